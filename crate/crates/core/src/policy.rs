//! Boltzmann meta-policy, sigmoid terminations and their analytic gradients.

use rand::Rng;

use crate::error::{HrlError, Result};
use crate::ids::{OptionId, StateId};
use crate::params::ParamTables;
use crate::scalar::Scalar;

/// Probability vector over a subset of options.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionDistribution<T> {
    pub options: Vec<OptionId>,
    pub probs: Vec<T>,
}

impl<T: Scalar> OptionDistribution<T> {
    /// Probability of `w`; exactly zero outside the support.
    pub fn prob(&self, w: OptionId) -> T {
        self.options
            .iter()
            .position(|&o| o == w)
            .map_or(T::zero(), |i| self.probs[i])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> OptionId {
        self.options[sample_index(&self.probs, rng)]
    }
}

/// Max-shifted softmax of `prefs / temperature`.
pub fn softmax<T: Scalar>(prefs: &[T], temperature: T) -> Vec<T> {
    let max = prefs.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = prefs.iter().map(|&p| ((p - max) / temperature).exp()).collect();
    let z = exps.iter().copied().fold(T::zero(), |a, b| a + b);
    exps.into_iter().map(|e| e / z).collect()
}

/// Draws an index from a probability vector with one uniform variate.
pub fn sample_index<T: Scalar, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p.as_f64();
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// `pi_Omega(. | s)` restricted to `available`.
pub fn meta_policy_probs<T: Scalar>(
    tables: &ParamTables<T>,
    s: StateId,
    available: &[OptionId],
    temperature: T,
) -> Result<OptionDistribution<T>> {
    if available.is_empty() {
        return Err(HrlError::NoOptionAvailable(s));
    }
    let prefs: Vec<T> = available.iter().map(|&w| tables.theta(s, w)).collect();
    Ok(OptionDistribution {
        options: available.to_vec(),
        probs: softmax(&prefs, temperature),
    })
}

/// `d/d theta[s, w'] ln pi_Omega(chosen | s)` for each `w'` in `available`.
/// Entries outside `available` are implicitly zero.
pub fn grad_log_meta_policy<T: Scalar>(
    tables: &ParamTables<T>,
    s: StateId,
    available: &[OptionId],
    chosen: OptionId,
    temperature: T,
) -> Result<Vec<(OptionId, T)>> {
    if !available.contains(&chosen) {
        return Err(HrlError::OptionNotAvailable { option: chosen, state: s });
    }
    let dist = meta_policy_probs(tables, s, available, temperature)?;
    Ok(grad_log_softmax(&dist.probs, available.iter().position(|&w| w == chosen).unwrap(), temperature)
        .into_iter()
        .zip(available)
        .map(|(g, &w)| (w, g))
        .collect())
}

/// `(1{i == chosen} - p_i) / temperature`.
pub fn grad_log_softmax<T: Scalar>(probs: &[T], chosen: usize, temperature: T) -> Vec<T> {
    probs
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let ind = if i == chosen { T::one() } else { T::zero() };
            (ind - p) / temperature
        })
        .collect()
}

/// Logistic function, clamped so the result stays strictly inside (0, 1)
/// even where the exact value rounds to an endpoint.
#[inline]
pub fn sigmoid<T: Scalar>(x: T) -> T {
    let y = if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    };
    y.max(T::min_positive_value()).min(T::one() - T::epsilon() / T::of(2.0))
}

/// `beta_w(s) = sigmoid(vartheta[w, s])`.
#[inline]
pub fn termination_prob<T: Scalar>(tables: &ParamTables<T>, w: OptionId, s: StateId) -> T {
    sigmoid(tables.vartheta(w, s))
}

/// `d beta_w(s) / d vartheta[w, s] = beta (1 - beta)`.
#[inline]
pub fn termination_grad<T: Scalar>(tables: &ParamTables<T>, w: OptionId, s: StateId) -> T {
    let b = termination_prob(tables, w, s);
    b * (T::one() - b)
}
