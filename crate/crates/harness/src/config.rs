//! Flat `key = value` experiment configs.
//!
//! Keys (defaults depend on `env` and `algorithm`):
//!
//! | key | meaning |
//! |---|---|
//! | `env` | `four-rooms`, `four-rooms-blocked` or `exploration` |
//! | `algorithm` | `option-interruption`, `no-interruption`, `actor-critic`, `option-critic` |
//! | `runs`, `master_seed`, `episodes`, `t_max` | replicate count, seeding, episode count and cap |
//! | `gamma`, `alpha_theta`, `alpha_v`, `alpha_vartheta`, `temperature` | learning constants |
//! | `termination_td` | `n-step` or `one-step` |
//! | `out` | output directory, relative to `$HRL_OUTPUT_ROOT` when set |
//! | `map` | map file; built-in four-rooms / house layouts otherwise |
//! | `observe_blockage`, `slip_prob`, `slip_options` | four-rooms dynamics |
//! | `reward_c_s`, `reward_p_time`, `reward_p_collision`, `reward_r_success`, `sensor_range` | exploration |
//! | `workers`, `sync_steps` | exploration worker layout |

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hrl_core::{Hyper, RewardConfig};

use crate::error::{HarnessError, Result};

/// Environment variable prefixed to relative output directories.
pub const OUTPUT_ROOT_VAR: &str = "HRL_OUTPUT_ROOT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvId {
    FourRooms,
    FourRoomsBlocked,
    Exploration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    OptionInterruption,
    NoInterruption,
    ActorCritic,
    OptionCritic,
}

macro_rules! named {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $t {
            pub fn name(self) -> &'static str {
                match self { $(Self::$v => $s),* }
            }
        }
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s { $($s => Ok(Self::$v),)* _ => Err(format!("unknown {} {s:?}", stringify!($t))) }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

named!(EnvId { FourRooms => "four-rooms", FourRoomsBlocked => "four-rooms-blocked", Exploration => "exploration" });
named!(Algorithm {
    OptionInterruption => "option-interruption",
    NoInterruption => "no-interruption",
    ActorCritic => "actor-critic",
    OptionCritic => "option-critic",
});

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub env: EnvId,
    pub algorithm: Algorithm,
    pub hyper: Hyper,
    pub runs: usize,
    pub master_seed: u64,
    pub out: PathBuf,
    pub map: Option<PathBuf>,
    pub observe_blockage: bool,
    pub slip_prob: f64,
    pub slip_options: bool,
    pub reward: RewardConfig,
    pub sensor_range: usize,
    pub workers: usize,
    pub sync_steps: usize,
}

impl ExperimentConfig {
    /// Defaults for an environment/algorithm pair.
    pub fn defaults(env: EnvId, algorithm: Algorithm) -> Self {
        let (alpha_theta, alpha_v, alpha_vartheta) = match (env, algorithm) {
            (EnvId::Exploration, _) => (0.03, 0.1, 0.25),
            (_, Algorithm::OptionInterruption | Algorithm::NoInterruption) => (1.0, 0.25, 1.0),
            (_, Algorithm::ActorCritic) => (1.0, 0.5, 0.25),
            (_, Algorithm::OptionCritic) => (2.0, 0.5, 0.25),
        };
        let (episodes, t_max, runs) = match env {
            EnvId::Exploration => (200, 1500, 16),
            _ => (1000, 800, 100),
        };
        ExperimentConfig {
            env,
            algorithm,
            hyper: Hyper { alpha_theta, alpha_v, alpha_vartheta, episodes, t_max, ..Hyper::default() },
            runs,
            master_seed: 0,
            out: PathBuf::from(format!("{env}-{algorithm}")),
            map: None,
            observe_blockage: true,
            slip_prob: 1.0 / 3.0,
            slip_options: false,
            reward: RewardConfig::default(),
            sensor_range: hrl_core::exploration::DEFAULT_SENSOR_RANGE,
            workers: 1,
            sync_steps: 1,
        }
    }

    /// Resolves settings in order; later keys win. `env` and `algorithm`
    /// pick the defaults wherever they appear.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self> {
        let last = |key: &str| pairs.iter().rev().find(|(k, _)| k.as_ref() == key).map(|(_, v)| v.as_ref());
        let env = parse_value("env", last("env").unwrap_or("four-rooms"))?;
        let algorithm = parse_value("algorithm", last("algorithm").unwrap_or("option-interruption"))?;
        let mut cfg = Self::defaults(env, algorithm);
        for (k, v) in pairs {
            cfg.set(k.as_ref(), v.as_ref())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config file text plus `key=value` overrides.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self> {
        let mut pairs = parse_pairs(text)?;
        for o in overrides {
            pairs.push(split_pair(o).ok_or_else(|| HarnessError::Config(format!("override {o:?} is not key=value")))?);
        }
        Self::from_pairs(&pairs)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "env" | "algorithm" => {}
            "runs" => self.runs = parse_value(key, v)?,
            "master_seed" => self.master_seed = parse_value(key, v)?,
            "episodes" => self.hyper.episodes = parse_value(key, v)?,
            "t_max" => self.hyper.t_max = parse_value(key, v)?,
            "gamma" => self.hyper.gamma = parse_value(key, v)?,
            "alpha_theta" => self.hyper.alpha_theta = parse_value(key, v)?,
            "alpha_v" => self.hyper.alpha_v = parse_value(key, v)?,
            "alpha_vartheta" => self.hyper.alpha_vartheta = parse_value(key, v)?,
            "temperature" => self.hyper.temperature = parse_value(key, v)?,
            "termination_td" => self.hyper.termination_td = parse_value(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "map" => self.map = Some(PathBuf::from(v)),
            "observe_blockage" => self.observe_blockage = parse_value(key, v)?,
            "slip_prob" => self.slip_prob = parse_value(key, v)?,
            "slip_options" => self.slip_options = parse_value(key, v)?,
            "reward_c_s" => self.reward.c_s = parse_value(key, v)?,
            "reward_p_time" => self.reward.p_time = parse_value(key, v)?,
            "reward_p_collision" => self.reward.p_collision = parse_value(key, v)?,
            "reward_r_success" => self.reward.r_success = parse_value(key, v)?,
            "sensor_range" => self.sensor_range = parse_value(key, v)?,
            "workers" => self.workers = parse_value(key, v)?,
            "sync_steps" => self.sync_steps = parse_value(key, v)?,
            _ => return Err(HarnessError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.slip_prob) {
            return bad("slip_prob must lie in [0, 1]");
        }
        if self.env == EnvId::Exploration {
            if matches!(self.algorithm, Algorithm::OptionCritic) {
                return bad("exploration supports option-interruption, no-interruption and actor-critic");
            }
            if self.sensor_range == 0 || self.workers == 0 || self.sync_steps == 0 {
                return bad("sensor_range, workers and sync_steps must be positive");
            }
            self.reward.validate()?;
        }
        self.hyper.validate()?;
        Ok(())
    }

    /// Every setting, defaults included, in key order of the table above;
    /// `map` appears only when set.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let h = &self.hyper;
        let mut pairs = vec![
            ("env", self.env.to_string()),
            ("algorithm", self.algorithm.to_string()),
            ("runs", self.runs.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("episodes", h.episodes.to_string()),
            ("t_max", h.t_max.to_string()),
            ("gamma", h.gamma.to_string()),
            ("alpha_theta", h.alpha_theta.to_string()),
            ("alpha_v", h.alpha_v.to_string()),
            ("alpha_vartheta", h.alpha_vartheta.to_string()),
            ("temperature", h.temperature.to_string()),
            ("termination_td", h.termination_td.to_string()),
            ("out", self.out.display().to_string()),
            ("observe_blockage", self.observe_blockage.to_string()),
            ("slip_prob", self.slip_prob.to_string()),
            ("slip_options", self.slip_options.to_string()),
            ("reward_c_s", self.reward.c_s.to_string()),
            ("reward_p_time", self.reward.p_time.to_string()),
            ("reward_p_collision", self.reward.p_collision.to_string()),
            ("reward_r_success", self.reward.r_success.to_string()),
            ("sensor_range", self.sensor_range.to_string()),
            ("workers", self.workers.to_string()),
            ("sync_steps", self.sync_steps.to_string()),
        ];
        if let Some(m) = &self.map {
            pairs.insert(13, ("map", m.display().to_string()));
        }
        pairs
    }

    /// `out` below the output root when it is relative.
    pub fn output_dir(&self, root: Option<&Path>) -> PathBuf {
        match root {
            Some(r) if self.out.is_relative() => r.join(&self.out),
            _ => self.out.clone(),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e| HarnessError::Config(format!("{key} = {v:?}: {e}")))
}

fn split_pair(line: &str) -> Option<(String, String)> {
    let (k, v) = line.split_once('=')?;
    let k = k.trim();
    (!k.is_empty()).then(|| (k.to_string(), v.trim().to_string()))
}

/// `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| split_pair(l).ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", i + 1))))
        .collect()
}
