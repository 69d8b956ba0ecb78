use std::sync::Arc;

use rand::Rng;

use super::grid::{BeliefMap, OccupancyGrid};
use super::patch::belief_features;
use super::sensor::{sense, DEFAULT_SENSOR_RANGE};
use crate::error::{HrlError, Result};
use crate::ids::{Action, Coord};
use crate::scalar::Scalar;

/// Reward constants: per-cell coverage scale, time penalty, collision
/// penalty and completion reward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardConfig<T> {
    pub c_s: T,
    pub p_time: T,
    pub p_collision: T,
    pub r_success: T,
}

impl<T: Scalar> Default for RewardConfig<T> {
    fn default() -> Self {
        RewardConfig { c_s: T::of(0.01), p_time: T::of(-0.02), p_collision: T::of(-1.0), r_success: T::of(10.0) }
    }
}

impl<T: Scalar> RewardConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let all = [self.c_s, self.p_time, self.p_collision, self.r_success];
        if !all.iter().all(|x| x.is_finite()) {
            return Err(HrlError::InvalidHyperparams("reward constants must be finite".into()));
        }
        if self.p_time > T::zero() || self.p_collision > T::zero() || self.r_success < T::zero() {
            return Err(HrlError::InvalidHyperparams(
                "need p_time <= 0, p_collision <= 0 and r_success >= 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationConfig<T> {
    pub reward: RewardConfig<T>,
    pub sensor_range: usize,
}

impl<T: Scalar> Default for ExplorationConfig<T> {
    fn default() -> Self {
        ExplorationConfig { reward: RewardConfig::default(), sensor_range: DEFAULT_SENSOR_RANGE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationStep<T> {
    pub reward: T,
    pub done: bool,
    pub collided: bool,
    pub revealed: usize,
}

/// One robot exploring a fixed house.
#[derive(Debug, Clone)]
pub struct ExplorationEnv<T> {
    grid: Arc<OccupancyGrid>,
    cfg: ExplorationConfig<T>,
    belief: BeliefMap,
    pose: Coord,
}

impl<T: Scalar> ExplorationEnv<T> {
    /// Starts at the first free cell with an unsensed belief; call
    /// [`reset`](Self::reset) or [`place`](Self::place) before stepping.
    pub fn new(grid: Arc<OccupancyGrid>, cfg: ExplorationConfig<T>) -> Result<Self> {
        cfg.reward.validate()?;
        let belief = BeliefMap::for_grid(&grid);
        let pose = grid.free_cells().next().expect("validated grid has free cells");
        Ok(ExplorationEnv { grid, cfg, belief, pose })
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn config(&self) -> &ExplorationConfig<T> {
        &self.cfg
    }

    pub fn belief(&self) -> &BeliefMap {
        &self.belief
    }

    pub fn pose(&self) -> Coord {
        self.pose
    }

    /// Every free cell is known.
    pub fn explored(&self) -> bool {
        self.belief.known_free_count() == self.grid.free_count()
    }

    /// Fresh belief, uniform random free start cell, initial sensing sweep.
    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Coord {
        let i = rng.gen_range(0..self.grid.free_count());
        let pose = self.grid.free_cells().nth(i).expect("index below free count");
        self.place(pose).expect("free cell");
        pose
    }

    /// Fresh belief at `pose`, sensed once. Returns the number of revealed cells.
    pub fn place(&mut self, pose: Coord) -> Result<usize> {
        if !self.grid.is_free(pose) {
            return Err(HrlError::InvalidCell(pose));
        }
        self.belief = BeliefMap::for_grid(&self.grid);
        self.pose = pose;
        Ok(sense(&self.grid, &mut self.belief, pose, self.cfg.sensor_range))
    }

    pub fn step(&mut self, a: Action) -> ExplorationStep<T> {
        let rc = self.cfg.reward;
        let target = self.pose.offset(a).filter(|&c| self.grid.is_free(c));
        let Some(target) = target else {
            return ExplorationStep { reward: rc.p_collision, done: false, collided: true, revealed: 0 };
        };
        self.pose = target;
        let revealed = sense(&self.grid, &mut self.belief, target, self.cfg.sensor_range);
        if self.explored() {
            return ExplorationStep { reward: rc.r_success, done: true, collided: false, revealed };
        }
        ExplorationStep { reward: rc.c_s * T::of_usize(revealed) + rc.p_time, done: false, collided: false, revealed }
    }

    /// Features of the patch around the current pose.
    pub fn features(&self) -> Vec<T> {
        belief_features(&self.belief, self.pose)
    }
}
