//! One call-and-return option execution and the updates it produces.

use crate::error::{HrlError, Result};
use crate::ids::{Action, OptionId, StateId};
use crate::params::{Deltas, Hyperparams, ParamTables, TerminationTd};
use crate::policy::{grad_log_meta_policy, termination_grad};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndCause {
    /// The option reached its completion state.
    NaturalCompletion,
    /// The learned termination function fired.
    Interrupted,
    /// The environment reached a terminal state.
    Terminal,
    /// The episode step budget ran out.
    StepCap,
    /// The agent left the option's initiation set (possible under slip).
    ExitedDomain,
}

/// States, actions and rewards of a single option segment.
///
/// `states` has one more entry than `actions` and `rewards`: it ends with the
/// state in which the segment stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTrace<T> {
    pub option: OptionId,
    /// Options that were available at the segment's start state.
    pub available: Vec<OptionId>,
    pub t_start: usize,
    pub states: Vec<StateId>,
    pub actions: Vec<Action>,
    pub rewards: Vec<T>,
    pub end_cause: EndCause,
}

impl<T: Scalar> SegmentTrace<T> {
    /// Option duration in primitive steps.
    pub fn duration(&self) -> usize {
        self.actions.len()
    }

    pub fn start_state(&self) -> StateId {
        self.states[0]
    }

    pub fn end_state(&self) -> StateId {
        *self.states.last().expect("trace has an end state")
    }

    pub fn check_shape(&self) -> Result<()> {
        let tau = self.actions.len();
        if tau == 0 {
            return Err(HrlError::EmptySegment);
        }
        if self.rewards.len() != tau {
            return Err(HrlError::Misaligned { what: "rewards vs actions", expected: tau, got: self.rewards.len() });
        }
        if self.states.len() != tau + 1 {
            return Err(HrlError::Misaligned { what: "states vs actions + 1", expected: tau + 1, got: self.states.len() });
        }
        Ok(())
    }

    /// Bootstrap value for the backward return: zero after a terminal
    /// transition, the critic's estimate of the end state otherwise.
    pub fn bootstrap(&self, tables: &ParamTables<T>) -> T {
        if self.end_cause == EndCause::Terminal {
            T::zero()
        } else {
            tables.value(self.end_state())
        }
    }
}

/// Backward recursion `R = r_i + gamma * R` seeded with `bootstrap`.
/// Element `i` is the return from step `i` of the segment.
pub fn n_step_returns<T: Scalar>(trace: &SegmentTrace<T>, gamma: T, bootstrap: T) -> Vec<T> {
    let mut out = vec![T::zero(); trace.rewards.len()];
    let mut r = bootstrap;
    for (i, &reward) in trace.rewards.iter().enumerate().rev() {
        r = reward + gamma * r;
        out[i] = r;
    }
    out
}

/// Segment deltas for all three tables.
///
/// * critic: `R_i - V(s_i)` per step;
/// * termination: `beta(1 - beta) * advantage_i` per step, applied with a minus sign;
/// * meta-policy: one contribution at the segment's start state,
///   `grad ln pi_Omega(w | s_start) * (R_0 - V(s_start))`.
pub fn accumulate_updates<T: Scalar>(
    tables: &ParamTables<T>,
    trace: &SegmentTrace<T>,
    returns: &[T],
    hyper: &Hyperparams<T>,
) -> Result<Deltas<T>> {
    trace.check_shape()?;
    let tau = trace.duration();
    if returns.len() != tau {
        return Err(HrlError::Misaligned { what: "returns vs segment steps", expected: tau, got: returns.len() });
    }
    let w = trace.option;
    let mut d = Deltas {
        theta: Vec::with_capacity(trace.available.len()),
        theta_v: Vec::with_capacity(tau),
        vartheta: Vec::with_capacity(tau),
    };
    for i in (0..tau).rev() {
        let s = trace.states[i];
        let v = tables.value(s);
        let advantage = returns[i] - v;
        let term_advantage = match hyper.termination_td {
            TerminationTd::NStep => advantage,
            TerminationTd::OneStep => {
                // The last step's one-step target is its n-step return:
                // r + gamma * bootstrap.
                let target = if i + 1 == tau {
                    returns[i]
                } else {
                    trace.rewards[i] + hyper.gamma * tables.value(trace.states[i + 1])
                };
                target - v
            }
        };
        d.vartheta.push((w, s, termination_grad(tables, w, s) * term_advantage));
        d.theta_v.push((s, advantage));
    }
    let s0 = trace.start_state();
    let meta_advantage = returns[0] - tables.value(s0);
    for (o, g) in grad_log_meta_policy(tables, s0, &trace.available, w, hyper.temperature)? {
        d.theta.push((s0, o, g * meta_advantage));
    }
    Ok(d)
}
