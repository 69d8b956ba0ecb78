//! Indoor exploration: a ground-truth occupancy grid, a ray-cast range
//! sensor, the robot's belief map, an egocentric patch observation and its
//! linear featurization.

mod env;
mod grid;
mod patch;
mod sensor;

pub use env::{ExplorationConfig, ExplorationEnv, ExplorationStep, RewardConfig};
pub use grid::{Belief, BeliefMap, OccupancyGrid, DEFAULT_HOUSE};
pub use patch::{belief_features, extract_patch, featurize, PatchCell, PatchObservation, FEATURE_LEN, PATCH_CENTER, PATCH_SIZE};
pub use sensor::{ray, sense, DEFAULT_SENSOR_RANGE};
