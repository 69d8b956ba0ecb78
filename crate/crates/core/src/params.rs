//! Learnable parameter tables and training hyperparameters.

use crate::error::{HrlError, Result};
use crate::ids::{OptionId, StateId};
use crate::scalar::Scalar;

/// The three separately-scaled tables learned by Option-Interruption:
/// meta-policy preferences `theta[s, w]`, termination logits `vartheta[w, s]`
/// and critic weights `theta_v[s]`. All zero at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamTables<T> {
    state_count: usize,
    option_count: usize,
    theta: Vec<T>,
    vartheta: Vec<T>,
    theta_v: Vec<T>,
}

impl<T: Scalar> ParamTables<T> {
    pub fn zeros(state_count: usize, option_count: usize) -> Self {
        ParamTables {
            state_count,
            option_count,
            theta: vec![T::zero(); state_count * option_count],
            vartheta: vec![T::zero(); option_count * state_count],
            theta_v: vec![T::zero(); state_count],
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn option_count(&self) -> usize {
        self.option_count
    }

    #[inline]
    pub fn theta(&self, s: StateId, w: OptionId) -> T {
        self.theta[s.0 * self.option_count + w.0]
    }

    #[inline]
    pub fn theta_mut(&mut self, s: StateId, w: OptionId) -> &mut T {
        &mut self.theta[s.0 * self.option_count + w.0]
    }

    #[inline]
    pub fn vartheta(&self, w: OptionId, s: StateId) -> T {
        self.vartheta[w.0 * self.state_count + s.0]
    }

    #[inline]
    pub fn vartheta_mut(&mut self, w: OptionId, s: StateId) -> &mut T {
        &mut self.vartheta[w.0 * self.state_count + s.0]
    }

    /// Critic estimate `V(s)`.
    #[inline]
    pub fn value(&self, s: StateId) -> T {
        self.theta_v[s.0]
    }

    #[inline]
    pub fn value_mut(&mut self, s: StateId) -> &mut T {
        &mut self.theta_v[s.0]
    }

    pub fn is_finite(&self) -> bool {
        self.theta
            .iter()
            .chain(&self.vartheta)
            .chain(&self.theta_v)
            .all(|x| x.is_finite())
    }

    /// Applies accumulated deltas: ascent on `theta` and `theta_v`, descent on
    /// `vartheta` (the termination update carries an explicit minus sign).
    /// `update_termination = false` leaves `vartheta` untouched.
    pub fn apply(&mut self, deltas: &Deltas<T>, hyper: &Hyperparams<T>, update_termination: bool) {
        for &(s, w, d) in &deltas.theta {
            *self.theta_mut(s, w) += hyper.alpha_theta * d;
        }
        for &(s, d) in &deltas.theta_v {
            *self.value_mut(s) += hyper.alpha_v * d;
        }
        if update_termination {
            for &(w, s, d) in &deltas.vartheta {
                *self.vartheta_mut(w, s) -= hyper.alpha_vartheta * d;
            }
        }
    }
}

/// Sparse per-segment parameter deltas. Entries may repeat; they are summed on apply.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Deltas<T> {
    pub theta: Vec<(StateId, OptionId, T)>,
    pub theta_v: Vec<(StateId, T)>,
    pub vartheta: Vec<(OptionId, StateId, T)>,
}

impl<T: Scalar> Deltas<T> {
    pub fn theta_at(&self, s: StateId, w: OptionId) -> T {
        sum_where(self.theta.iter().filter(|e| e.0 == s && e.1 == w).map(|e| e.2))
    }

    pub fn theta_v_at(&self, s: StateId) -> T {
        sum_where(self.theta_v.iter().filter(|e| e.0 == s).map(|e| e.1))
    }

    pub fn vartheta_at(&self, w: OptionId, s: StateId) -> T {
        sum_where(self.vartheta.iter().filter(|e| e.0 == w && e.1 == s).map(|e| e.2))
    }
}

fn sum_where<T: Scalar>(it: impl Iterator<Item = T>) -> T {
    it.fold(T::zero(), |a, b| a + b)
}

/// Which TD target drives the termination update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TerminationTd {
    /// `r_i + gamma * V(s_{i+1}) - V(s_i)` per action step.
    OneStep,
    /// The segment's backward n-step return `R_i - V(s_i)`.
    #[default]
    NStep,
}

impl std::str::FromStr for TerminationTd {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "one-step" => Ok(TerminationTd::OneStep),
            "n-step" => Ok(TerminationTd::NStep),
            other => Err(format!("unknown termination TD mode {other:?} (expected one-step|n-step)")),
        }
    }
}

impl std::fmt::Display for TerminationTd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TerminationTd::OneStep => "one-step",
            TerminationTd::NStep => "n-step",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams<T> {
    pub gamma: T,
    pub alpha_theta: T,
    pub alpha_v: T,
    pub alpha_vartheta: T,
    pub temperature: T,
    /// Per-episode primitive step cap.
    pub t_max: usize,
    pub episodes: usize,
    pub termination_td: TerminationTd,
}

impl<T: Scalar> Default for Hyperparams<T> {
    fn default() -> Self {
        Hyperparams {
            gamma: T::of(0.99),
            alpha_theta: T::of(0.25),
            alpha_v: T::of(0.5),
            alpha_vartheta: T::of(0.25),
            temperature: T::one(),
            t_max: 800,
            episodes: 1000,
            termination_td: TerminationTd::NStep,
        }
    }
}

impl<T: Scalar> Hyperparams<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HrlError::InvalidHyperparams(m));
        if !(self.gamma >= T::zero() && self.gamma <= T::one()) {
            return bad(format!("gamma must lie in [0, 1], got {}", self.gamma));
        }
        for (name, v) in [
            ("alpha_theta", self.alpha_theta),
            ("alpha_v", self.alpha_v),
            ("alpha_vartheta", self.alpha_vartheta),
            ("temperature", self.temperature),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.t_max == 0 {
            return bad("t_max must be at least 1".into());
        }
        Ok(())
    }
}
