use std::time::Instant;

use rand::Rng;

use super::{EpisodeTally, TrainingLog};
use crate::env::{ActionSource, Environment};
use crate::error::Result;
use crate::ids::{Action, OptionId, StateId};
use crate::params::{Hyperparams, ParamTables};
use crate::policy::{grad_log_softmax, sample_index, softmax, termination_grad, termination_prob};
use crate::scalar::Scalar;

/// Option-critic parameters: learnable intra-option preferences on top of
/// the meta-policy, termination and critic tables.
#[derive(Debug, Clone, PartialEq)]
pub struct OcParams<T> {
    /// `intra[(w * states + s) * 4 + a]`.
    pub intra: Vec<T>,
    pub tables: ParamTables<T>,
}

impl<T: Scalar> OcParams<T> {
    pub fn zeros(state_count: usize, option_count: usize) -> Self {
        OcParams {
            intra: vec![T::zero(); option_count * state_count * Action::COUNT],
            tables: ParamTables::zeros(state_count, option_count),
        }
    }

    fn intra_row(&self, w: OptionId, s: StateId) -> usize {
        (w.0 * self.tables.state_count() + s.0) * Action::COUNT
    }

    pub fn intra_prefs(&self, w: OptionId, s: StateId) -> &[T] {
        let i = self.intra_row(w, s);
        &self.intra[i..i + Action::COUNT]
    }
}

/// Four-option option-critic learning every option from scratch.
///
/// Every option may start anywhere. Per primitive step with TD error
/// `delta = r + gamma V(s') - V(s)`: the intra-option actor ascends
/// `delta * grad ln pi_w(a|s)`, the termination logit at `s` descends
/// `delta * grad beta_w(s)`, and the critic moves by `alpha_v * delta`. The
/// meta-policy is updated when an option ends with the option-scale
/// advantage `R_{t:t+tau} + gamma^tau V(s_end) - V(s_start)`.
pub fn train_option_critic<T, E, R>(
    env: &mut E,
    option_count: usize,
    hyper: &Hyperparams<T>,
    rng: &mut R,
) -> Result<(TrainingLog<T>, OcParams<T>)>
where
    T: Scalar,
    E: Environment<T>,
    R: Rng + ?Sized,
{
    hyper.validate()?;
    let clock = Instant::now();
    let mut p = OcParams::zeros(env.state_count(), option_count);
    let all: Vec<OptionId> = (0..option_count).map(OptionId).collect();
    let mut log = TrainingLog { episodes: Vec::with_capacity(hyper.episodes), ..TrainingLog::default() };
    let mut meta_prefs = vec![T::zero(); option_count];

    for _ in 0..hyper.episodes {
        let mut s = env.reset(rng);
        let mut tally = EpisodeTally::new();
        let mut current: Option<Segment<T>> = None;
        while tally.length < hyper.t_max {
            let seg = current.get_or_insert_with(|| {
                for (w, pref) in meta_prefs.iter_mut().enumerate() {
                    *pref = p.tables.theta(s, OptionId(w));
                }
                let probs = softmax(&meta_prefs, hyper.temperature);
                let w = all[sample_index(&probs, rng)];
                Segment { option: w, start: s, probs, discounted: T::zero(), discount: T::one() }
            });
            let w = seg.option;

            let action_probs = softmax(p.intra_prefs(w, s), hyper.temperature);
            let ai = sample_index(&action_probs, rng);
            let tr = env.step(Action::ALL[ai], ActionSource::Primitive, rng);
            let next_v = if tr.done { T::zero() } else { p.tables.value(tr.state) };
            let delta = tr.reward + hyper.gamma * next_v - p.tables.value(s);

            let row = p.intra_row(w, s);
            for (a, g) in grad_log_softmax(&action_probs, ai, hyper.temperature).into_iter().enumerate() {
                p.intra[row + a] += hyper.alpha_theta * delta * g;
            }
            let dbeta = termination_grad(&p.tables, w, s);
            *p.tables.vartheta_mut(w, s) -= hyper.alpha_vartheta * delta * dbeta;
            *p.tables.value_mut(s) += hyper.alpha_v * delta;

            seg.discounted += seg.discount * tr.reward;
            seg.discount *= hyper.gamma;
            tally.length += 1;
            tally.ret += tr.reward;
            s = tr.state;

            let ended = tr.done
                || tally.length >= hyper.t_max
                || rng.gen::<f64>() < termination_prob(&p.tables, w, s).as_f64();
            if ended {
                let seg = current.take().expect("segment in progress");
                let bootstrap = if tr.done { T::zero() } else { p.tables.value(s) };
                let advantage = seg.discounted + seg.discount * bootstrap - p.tables.value(seg.start);
                let chosen = seg.option.0;
                for (o, g) in grad_log_softmax(&seg.probs, chosen, hyper.temperature).into_iter().enumerate() {
                    *p.tables.theta_mut(seg.start, OptionId(o)) += hyper.alpha_theta * advantage * g;
                }
                tally.segments += 1;
                tally.interruptions += (!tr.done && tally.length < hyper.t_max) as usize;
            }
            if tr.done {
                break;
            }
        }
        log.episodes.push(tally.finish());
    }
    log.wall_clock = clock.elapsed();
    Ok((log, p))
}

struct Segment<T> {
    option: OptionId,
    start: StateId,
    probs: Vec<T>,
    discounted: T,
    discount: T,
}
