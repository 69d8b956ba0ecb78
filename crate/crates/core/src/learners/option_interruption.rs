use std::time::Instant;

use rand::Rng;

use super::{EpisodeTally, TrainingLog};
use crate::env::{ActionSource, OptionEnvironment};
use crate::error::{HrlError, Result};
use crate::ids::OptionId;
use crate::options::OptionSpec;
use crate::params::{Hyperparams, ParamTables};
use crate::policy::{meta_policy_probs, termination_prob};
use crate::scalar::Scalar;
use crate::segment::{accumulate_updates, n_step_returns, EndCause, SegmentTrace};

/// Whether learned terminations may cut an option short.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interruption {
    Enabled,
    /// Options end only on completion, terminal states or the step cap.
    Disabled,
}

/// Executes `option` call-and-return style from the environment's current state.
///
/// After every transition the end conditions are checked in order: terminal,
/// natural completion, leaving the initiation set, learned termination
/// (`beta` evaluated at the new state, only when interruption is enabled) and
/// finally the step budget.
#[allow(clippy::too_many_arguments)]
pub fn run_option_segment<T, E, R>(
    env: &mut E,
    option: &OptionSpec,
    available: Vec<OptionId>,
    tables: &ParamTables<T>,
    interruption: Interruption,
    t_start: usize,
    step_budget: usize,
    rng: &mut R,
) -> Result<SegmentTrace<T>>
where
    T: Scalar,
    E: OptionEnvironment<T>,
    R: Rng + ?Sized,
{
    let start = env.option_state();
    if !option.can_start(start) {
        return Err(HrlError::OptionNotAvailable { option: option.id, state: env.state() });
    }
    let mut trace = SegmentTrace {
        option: option.id,
        available,
        t_start,
        states: vec![env.state()],
        actions: Vec::new(),
        rewards: Vec::new(),
        end_cause: EndCause::StepCap,
    };
    loop {
        let a = option.action(env.option_state()).expect("segment stays inside the initiation set");
        let tr = env.step(a, ActionSource::Option, rng);
        trace.actions.push(a);
        trace.rewards.push(tr.reward);
        trace.states.push(tr.state);
        let here = env.option_state();
        let steps = trace.actions.len();
        let cause = if tr.done {
            Some(EndCause::Terminal)
        } else if option.completes_at(here, steps) {
            Some(EndCause::NaturalCompletion)
        } else if !option.can_start(here) {
            Some(EndCause::ExitedDomain)
        } else if interruption == Interruption::Enabled
            && rng.gen::<f64>() < termination_prob(tables, option.id, tr.state).as_f64()
        {
            Some(EndCause::Interrupted)
        } else if steps >= step_budget {
            Some(EndCause::StepCap)
        } else {
            None
        };
        if let Some(c) = cause {
            trace.end_cause = c;
            return Ok(trace);
        }
    }
}

/// Option-Interruption training: Boltzmann meta-policy over available
/// options, fixed option policies, learned sigmoid terminations and a
/// tabular critic, all updated from each segment's backward n-step returns.
///
/// `options[i]` must have id `i`. Returns the log and the learned tables.
pub fn train_option_interruption<T, E, R>(
    env: &mut E,
    options: &[OptionSpec],
    hyper: &Hyperparams<T>,
    interruption: Interruption,
    rng: &mut R,
) -> Result<(TrainingLog<T>, ParamTables<T>)>
where
    T: Scalar,
    E: OptionEnvironment<T>,
    R: Rng + ?Sized,
{
    hyper.validate()?;
    let clock = Instant::now();
    let mut tables = ParamTables::zeros(env.state_count(), env.option_count());
    let mut log = TrainingLog { episodes: Vec::with_capacity(hyper.episodes), ..TrainingLog::default() };
    for _ in 0..hyper.episodes {
        env.reset(rng);
        let mut tally = EpisodeTally::new();
        while tally.length < hyper.t_max {
            let s = env.state();
            let available = env.available_options();
            let w = meta_policy_probs(&tables, s, &available, hyper.temperature)?.sample(rng);
            let trace = run_option_segment(
                env,
                &options[w.0],
                available,
                &tables,
                interruption,
                tally.length,
                hyper.t_max - tally.length,
                rng,
            )?;
            let returns = n_step_returns(&trace, hyper.gamma, trace.bootstrap(&tables));
            let deltas = accumulate_updates(&tables, &trace, &returns, hyper)?;
            tables.apply(&deltas, hyper, interruption == Interruption::Enabled);

            tally.length += trace.duration();
            tally.ret += trace.rewards.iter().fold(T::zero(), |a, &b| a + b);
            tally.segments += 1;
            tally.interruptions += (trace.end_cause == EndCause::Interrupted) as usize;
            if trace.end_cause == EndCause::Terminal {
                break;
            }
        }
        log.episodes.push(tally.finish());
    }
    log.wall_clock = clock.elapsed();
    Ok((log, tables))
}
