use std::time::Instant;

use rand::Rng;

use super::{EpisodeTally, TrainingLog};
use crate::env::{ActionSource, Environment};
use crate::error::Result;
use crate::ids::{Action, OptionId};
use crate::params::{Hyperparams, ParamTables};
use crate::policy::{grad_log_softmax, sample_index, softmax};
use crate::scalar::Scalar;

/// One-step actor-critic over the four primitive actions.
///
/// The returned tables hold action preferences in the `theta` slot (one
/// "option" per action) and the critic in `theta_v`; `vartheta` is unused.
pub fn train_actor_critic<T, E, R>(env: &mut E, hyper: &Hyperparams<T>, rng: &mut R) -> Result<(TrainingLog<T>, ParamTables<T>)>
where
    T: Scalar,
    E: Environment<T>,
    R: Rng + ?Sized,
{
    hyper.validate()?;
    let clock = Instant::now();
    let mut tables = ParamTables::zeros(env.state_count(), Action::COUNT);
    let mut log = TrainingLog { episodes: Vec::with_capacity(hyper.episodes), ..TrainingLog::default() };
    let mut prefs = [T::zero(); Action::COUNT];
    for _ in 0..hyper.episodes {
        let mut s = env.reset(rng);
        let mut tally = EpisodeTally::new();
        while tally.length < hyper.t_max {
            for (a, p) in prefs.iter_mut().enumerate() {
                *p = tables.theta(s, OptionId(a));
            }
            let probs = softmax(&prefs, hyper.temperature);
            let ai = sample_index(&probs, rng);
            let tr = env.step(Action::ALL[ai], ActionSource::Primitive, rng);
            let next_v = if tr.done { T::zero() } else { tables.value(tr.state) };
            let delta = tr.reward + hyper.gamma * next_v - tables.value(s);
            for (a, g) in grad_log_softmax(&probs, ai, hyper.temperature).into_iter().enumerate() {
                *tables.theta_mut(s, OptionId(a)) += hyper.alpha_theta * delta * g;
            }
            *tables.value_mut(s) += hyper.alpha_v * delta;

            tally.length += 1;
            tally.segments += 1;
            tally.ret += tr.reward;
            s = tr.state;
            if tr.done {
                break;
            }
        }
        log.episodes.push(tally.finish());
    }
    log.wall_clock = clock.elapsed();
    Ok((log, tables))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::env::Transition;
    use crate::ids::StateId;

    /// 0 -> 1 -> terminal regardless of action; reward 1 on the final step.
    struct Chain {
        at: usize,
    }

    impl Environment<f64> for Chain {
        fn state_count(&self) -> usize {
            2
        }
        fn reset<R: Rng + ?Sized>(&mut self, _: &mut R) -> StateId {
            self.at = 0;
            StateId(0)
        }
        fn state(&self) -> StateId {
            StateId(self.at)
        }
        fn step<R: Rng + ?Sized>(&mut self, _: Action, _: ActionSource, _: &mut R) -> Transition<f64> {
            self.at += 1;
            let done = self.at == 2;
            Transition { state: StateId(self.at.min(1)), reward: if done { 1.0 } else { 0.0 }, done }
        }
    }

    #[test]
    fn critic_converges_on_deterministic_chain() {
        let h = Hyperparams { alpha_v: 0.1, episodes: 5000, gamma: 0.9, ..Hyperparams::default() };
        let (log, t) = train_actor_critic(&mut Chain { at: 0 }, &h, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(log.episodes.iter().map(|e| e.length).sum::<usize>(), 10_000);
        assert!((t.value(StateId(1)) - 1.0).abs() < 1e-2);
        assert!((t.value(StateId(0)) - 0.9).abs() < 1e-2);
    }

    #[test]
    fn deterministic_under_seed() {
        use crate::gridworld::{FourRooms, FourRoomsConfig, GridMap};
        let h = Hyperparams { episodes: 20, ..Hyperparams::default() };
        let run = || {
            let mut env = FourRooms::<f64>::new(std::sync::Arc::new(GridMap::default_map()), FourRoomsConfig::default());
            train_actor_critic(&mut env, &h, &mut ChaCha8Rng::seed_from_u64(5)).unwrap()
        };
        let (a, ta) = run();
        let (b, tb) = run();
        assert!(a.same_episodes(&b));
        assert_eq!(ta, tb);
        assert!(a.episodes.iter().all(|e| e.mean_option_duration == 1.0 && e.interruptions == 0));
    }
}
