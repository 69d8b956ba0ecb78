use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use hrl_core::exploration::{ExplorationConfig, OccupancyGrid};
use hrl_core::gridworld::{load_map, FourRooms, FourRoomsConfig, GridMap, SlipModel};
use hrl_core::learners::{
    train_actor_critic, train_exploration, train_option_critic, train_option_interruption, ExplorationAgent,
    Interruption, Workers,
};
use hrl_core::options::{build_hallway_options, OptionSpec};
use hrl_core::TrainingLog;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Algorithm, EnvId, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::metrics::{read_records, write_records, MetricRecord, META_FILE, METRICS_FILE, SCHEMA_VERSION};
use crate::seed::run_seed;

/// Map and options shared by every replicate.
enum World {
    Rooms { map: Arc<GridMap>, options: Vec<OptionSpec> },
    House(Arc<OccupancyGrid>),
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(HarnessError::io(path))
}

fn load_world(cfg: &ExperimentConfig) -> Result<World> {
    let map_err = |e: hrl_core::MapError| HarnessError::Config(format!("map: {e}"));
    match cfg.env {
        EnvId::Exploration => {
            let grid = match &cfg.map {
                Some(p) => OccupancyGrid::parse(&read_text(p)?).map_err(map_err)?,
                None => OccupancyGrid::default_house(),
            };
            Ok(World::House(Arc::new(grid)))
        }
        EnvId::FourRooms | EnvId::FourRoomsBlocked => {
            let map = match &cfg.map {
                Some(p) => load_map(&read_text(p)?).map_err(map_err)?,
                None => GridMap::default_map(),
            };
            let options = build_hallway_options(&map)?;
            Ok(World::Rooms { map: Arc::new(map), options })
        }
    }
}

fn train(cfg: &ExperimentConfig, world: &World, seed: u64) -> Result<TrainingLog> {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let h = &cfg.hyper;
    let mut log = match world {
        World::Rooms { map, options } => {
            let env_cfg = FourRoomsConfig {
                slip: SlipModel { fail_prob: cfg.slip_prob, applies_to_options: cfg.slip_options, ..SlipModel::default() },
                blocking: cfg.env == EnvId::FourRoomsBlocked,
                observe_blockage: cfg.observe_blockage,
                ..FourRoomsConfig::default()
            };
            let env = &mut FourRooms::new(map.clone(), env_cfg);
            match cfg.algorithm {
                Algorithm::OptionInterruption => train_option_interruption(env, options, h, Interruption::Enabled, rng)?.0,
                Algorithm::NoInterruption => train_option_interruption(env, options, h, Interruption::Disabled, rng)?.0,
                Algorithm::ActorCritic => train_actor_critic(env, h, rng)?.0,
                Algorithm::OptionCritic => train_option_critic(env, options.len(), h, rng)?.0,
            }
        }
        World::House(grid) => {
            let agent = match cfg.algorithm {
                Algorithm::ActorCritic => ExplorationAgent::Primitive,
                _ => ExplorationAgent::MaskedOptions,
            };
            let env_cfg = ExplorationConfig { reward: cfg.reward, sensor_range: cfg.sensor_range };
            let workers = Workers { count: cfg.workers, sync_steps: cfg.sync_steps };
            train_exploration(grid.clone(), env_cfg, h, agent, workers, rng)?.0
        }
    };
    log.seed = Some(seed);
    Ok(log)
}

/// Trains replicate `run` of `cfg`.
pub fn run_replicate(cfg: &ExperimentConfig, run: usize) -> Result<TrainingLog> {
    train(cfg, &load_world(cfg)?, run_seed(cfg.master_seed, run))
}

pub fn records(run: usize, log: &TrainingLog) -> Vec<MetricRecord> {
    log.episodes
        .iter()
        .enumerate()
        .map(|(i, e)| MetricRecord {
            v: SCHEMA_VERSION,
            run,
            episode: i + 1,
            length: e.length,
            ret: e.ret,
            mean_option_duration: e.mean_option_duration,
            interruptions: e.interruptions,
            collisions: e.collisions,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub records: usize,
    pub wall_clock: Duration,
}

/// Runs every replicate in parallel, each into its own part file, then
/// merges the parts in run order into `metrics.jsonl` and writes
/// `meta.json` with the resolved config.
pub fn run_experiment(cfg: &ExperimentConfig, dir: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let clock = Instant::now();
    let world = load_world(cfg)?;
    let parts = dir.join("parts");
    std::fs::create_dir_all(&parts).map_err(HarnessError::io(&parts))?;
    let part = |run: usize| parts.join(format!("run-{run:05}.jsonl"));
    (0..cfg.runs).into_par_iter().try_for_each(|run| -> Result<()> {
        let log = train(cfg, &world, run_seed(cfg.master_seed, run))?;
        write_records(&part(run), &records(run, &log))
    })?;
    let mut all = Vec::new();
    for run in 0..cfg.runs {
        all.extend(read_records(&part(run))?);
    }
    let metrics = dir.join(METRICS_FILE);
    write_records(&metrics, &all)?;
    std::fs::remove_dir_all(&parts).map_err(HarnessError::io(&parts))?;

    let wall_clock = clock.elapsed();
    let config: serde_json::Map<String, serde_json::Value> =
        cfg.to_pairs().into_iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(v))).collect();
    let meta = serde_json::json!({
        "v": SCHEMA_VERSION,
        "config": config,
        "records": all.len(),
        "wall_clock_secs": wall_clock.as_secs_f64(),
    });
    let meta_path = dir.join(META_FILE);
    let text = serde_json::to_string_pretty(&meta).expect("json values serialize");
    std::fs::write(&meta_path, text + "\n").map_err(HarnessError::io(&meta_path))?;
    Ok(RunOutcome { dir: dir.to_path_buf(), records: all.len(), wall_clock })
}
