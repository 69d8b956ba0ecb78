//! Training loops over tabular parameters: Option-Interruption (with and
//! without interruption), primitive actor-critic and the option-critic
//! baseline, plus the linear-feature exploration learner.

mod actor_critic;
mod exploration;
mod option_critic;
mod option_interruption;

use std::time::Duration;

pub use actor_critic::train_actor_critic;
pub use exploration::{train_exploration, ExplorationAgent, LinearModel, Workers};
pub use option_critic::{train_option_critic, OcParams};
pub use option_interruption::{run_option_segment, train_option_interruption, Interruption};

use crate::scalar::Scalar;

/// Per-episode training statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeRecord<T> {
    /// Primitive steps taken.
    pub length: usize,
    /// Undiscounted sum of rewards.
    pub ret: T,
    /// Mean primitive steps per option segment (1 for primitive learners).
    pub mean_option_duration: f64,
    /// Segments ended by a learned termination.
    pub interruptions: usize,
    /// Moves into obstacles (exploration only).
    pub collisions: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingLog<T> {
    pub episodes: Vec<EpisodeRecord<T>>,
    pub seed: Option<u64>,
    /// Excluded from determinism comparisons.
    pub wall_clock: Duration,
}

impl<T: Scalar> TrainingLog<T> {
    pub fn lengths(&self) -> Vec<usize> {
        self.episodes.iter().map(|e| e.length).collect()
    }

    pub fn mean_length(&self) -> f64 {
        if self.episodes.is_empty() {
            return 0.0;
        }
        self.episodes.iter().map(|e| e.length as f64).sum::<f64>() / self.episodes.len() as f64
    }

    /// Same episodes, ignoring seed and timing.
    pub fn same_episodes(&self, other: &Self) -> bool {
        self.episodes == other.episodes
    }
}

/// Accumulates segment statistics within one episode.
#[derive(Debug, Default)]
pub(crate) struct EpisodeTally<T> {
    pub length: usize,
    pub ret: T,
    pub segments: usize,
    pub interruptions: usize,
    pub collisions: usize,
}

impl<T: Scalar> EpisodeTally<T> {
    pub fn new() -> Self {
        EpisodeTally { length: 0, ret: T::zero(), segments: 0, interruptions: 0, collisions: 0 }
    }

    pub fn finish(self) -> EpisodeRecord<T> {
        EpisodeRecord {
            length: self.length,
            ret: self.ret,
            mean_option_duration: if self.segments == 0 { 0.0 } else { self.length as f64 / self.segments as f64 },
            interruptions: self.interruptions,
            collisions: self.collisions,
        }
    }
}
