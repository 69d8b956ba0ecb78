//! Environment interfaces the tabular learners are written against.

use rand::Rng;

use crate::ids::{Action, OptionId, StateId};
use crate::scalar::Scalar;

/// Who issued a primitive move. Slip noise can be scoped to primitive-action
/// agents only, leaving option-issued moves deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSource {
    Primitive,
    Option,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<T> {
    pub state: StateId,
    pub reward: T,
    pub done: bool,
}

/// Episodic discrete environment.
pub trait Environment<T: Scalar> {
    /// Size of the learner-facing state space.
    fn state_count(&self) -> usize;

    fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StateId;

    /// Current learner-facing state.
    fn state(&self) -> StateId;

    fn step<R: Rng + ?Sized>(&mut self, action: Action, source: ActionSource, rng: &mut R) -> Transition<T>;
}

/// Environment with a fixed option set.
pub trait OptionEnvironment<T: Scalar>: Environment<T> {
    fn option_count(&self) -> usize;

    /// State as seen by option policies and initiation sets; may be coarser
    /// than [`Environment::state`].
    fn option_state(&self) -> StateId;

    /// Options whose initiation set contains the current state.
    fn available_options(&self) -> Vec<OptionId>;
}
