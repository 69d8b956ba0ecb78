use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{EpisodeTally, TrainingLog};
use crate::error::{HrlError, Result};
use crate::exploration::{ExplorationConfig, ExplorationEnv, OccupancyGrid, FEATURE_LEN};
use crate::ids::Action;
use crate::options::build_move_options;
use crate::params::Hyperparams;
use crate::policy::{grad_log_softmax, sample_index, softmax};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExplorationAgent {
    /// Meta-policy over one-step move options into known-free cells.
    MaskedOptions,
    /// Policy over all four primitive moves; walls cost a collision.
    Primitive,
}

/// Linear actor (one weight row per action) and linear critic.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<T> {
    /// `actor[a * FEATURE_LEN + i]`.
    pub actor: Vec<T>,
    pub critic: Vec<T>,
}

impl<T: Scalar> Default for LinearModel<T> {
    fn default() -> Self {
        LinearModel { actor: vec![T::zero(); Action::COUNT * FEATURE_LEN], critic: vec![T::zero(); FEATURE_LEN] }
    }
}

impl<T: Scalar> LinearModel<T> {
    pub fn preference(&self, a: usize, phi: &[T]) -> T {
        dot(&self.actor[a * FEATURE_LEN..(a + 1) * FEATURE_LEN], phi)
    }

    pub fn value(&self, phi: &[T]) -> T {
        dot(&self.critic, phi)
    }

    pub fn is_finite(&self) -> bool {
        self.actor.iter().chain(&self.critic).all(|x| x.is_finite())
    }

    fn add(&mut self, d: &LinearModel<T>) {
        for (w, g) in self.actor.iter_mut().zip(&d.actor).chain(self.critic.iter_mut().zip(&d.critic)) {
            *w += *g;
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Worker layout. Each round, every worker runs `sync_steps` steps against
/// the same parameter snapshot; their accumulated deltas are then applied in
/// worker order. One worker with one step per round is plain online learning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workers {
    pub count: usize,
    pub sync_steps: usize,
}

impl Default for Workers {
    fn default() -> Self {
        Workers { count: 1, sync_steps: 1 }
    }
}

struct Worker<T> {
    env: ExplorationEnv<T>,
    rng: ChaCha8Rng,
    phi: Option<Vec<T>>,
    tally: EpisodeTally<T>,
}

impl<T: Scalar> Worker<T> {
    /// Runs up to `steps` steps; returns the parameter delta and the
    /// episodes finished along the way.
    fn run(
        &mut self,
        model: &LinearModel<T>,
        agent: ExplorationAgent,
        hyper: &Hyperparams<T>,
        steps: usize,
    ) -> (LinearModel<T>, Vec<super::EpisodeRecord<T>>) {
        let mut delta = LinearModel::default();
        let mut done_eps = Vec::new();
        let mut prefs = Vec::with_capacity(Action::COUNT);
        for _ in 0..steps {
            let phi = match self.phi.take() {
                Some(phi) => phi,
                None => {
                    self.env.reset(&mut self.rng);
                    self.tally = EpisodeTally::new();
                    self.env.features()
                }
            };
            let actions: Vec<usize> = match agent {
                ExplorationAgent::MaskedOptions => {
                    build_move_options(self.env.belief(), self.env.pose()).iter().map(|o| o.id.0).collect()
                }
                ExplorationAgent::Primitive => (0..Action::COUNT).collect(),
            };
            if actions.is_empty() {
                done_eps.push(std::mem::replace(&mut self.tally, EpisodeTally::new()).finish());
                continue;
            }
            prefs.clear();
            prefs.extend(actions.iter().map(|&a| model.preference(a, &phi)));
            let probs = softmax(&prefs, hyper.temperature);
            let k = sample_index(&probs, &mut self.rng);
            let out = self.env.step(Action::ALL[actions[k]]);
            let next = (!out.done).then(|| self.env.features());
            let next_v = next.as_ref().map_or(T::zero(), |p| model.value(p));
            let td = out.reward + hyper.gamma * next_v - model.value(&phi);
            let scale = td / dot(&phi, &phi);
            for (j, g) in grad_log_softmax(&probs, k, hyper.temperature).into_iter().enumerate() {
                let row = &mut delta.actor[actions[j] * FEATURE_LEN..(actions[j] + 1) * FEATURE_LEN];
                let c = hyper.alpha_theta * scale * g;
                for (w, &x) in row.iter_mut().zip(&phi) {
                    *w += c * x;
                }
            }
            let c = hyper.alpha_v * scale;
            for (w, &x) in delta.critic.iter_mut().zip(&phi) {
                *w += c * x;
            }

            self.tally.length += 1;
            self.tally.segments += 1;
            self.tally.ret += out.reward;
            self.tally.collisions += out.collided as usize;
            if out.done || self.tally.length >= hyper.t_max {
                done_eps.push(std::mem::replace(&mut self.tally, EpisodeTally::new()).finish());
            } else {
                self.phi = next;
            }
        }
        (delta, done_eps)
    }
}

/// Linear-feature actor-critic on the exploration task.
///
/// The critic and actor take one-step TD updates with step sizes divided by
/// the squared feature norm. With [`ExplorationAgent::MaskedOptions`] the
/// policy ranges over the one-step move options available at the pose (their
/// terminations are trivial, so only the meta-policy and critic learn).
/// Training stops once `hyper.episodes` episodes have finished across all
/// workers; worker `i` draws its seed from `rng` in order.
pub fn train_exploration<T, R>(
    grid: Arc<OccupancyGrid>,
    cfg: ExplorationConfig<T>,
    hyper: &Hyperparams<T>,
    agent: ExplorationAgent,
    workers: Workers,
    rng: &mut R,
) -> Result<(TrainingLog<T>, LinearModel<T>)>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    hyper.validate()?;
    if workers.count == 0 || workers.sync_steps == 0 {
        return Err(HrlError::InvalidHyperparams("workers and sync_steps must be positive".into()));
    }
    if cfg.sensor_range == 0 {
        return Err(HrlError::InvalidHyperparams("sensor_range must be positive".into()));
    }
    let clock = Instant::now();
    let mut pool = Vec::with_capacity(workers.count);
    for _ in 0..workers.count {
        pool.push(Worker {
            env: ExplorationEnv::new(grid.clone(), cfg)?,
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            phi: None,
            tally: EpisodeTally::new(),
        });
    }
    let mut model = LinearModel::default();
    let mut log = TrainingLog { episodes: Vec::with_capacity(hyper.episodes), ..TrainingLog::default() };
    while log.episodes.len() < hyper.episodes {
        let results: Vec<_> = if workers.count == 1 {
            vec![pool[0].run(&model, agent, hyper, workers.sync_steps)]
        } else {
            let snapshot = &model;
            pool.par_iter_mut().map(|w| w.run(snapshot, agent, hyper, workers.sync_steps)).collect()
        };
        for (delta, eps) in results {
            model.add(&delta);
            log.episodes.extend(eps);
        }
    }
    log.episodes.truncate(hyper.episodes);
    log.wall_clock = clock.elapsed();
    Ok((log, model))
}
