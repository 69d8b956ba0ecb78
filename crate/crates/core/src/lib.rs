//! Option-Interruption hierarchical reinforcement learning.
//!
//! Fixed, human-designed option policies are combined with a learned
//! Boltzmann meta-policy and learned sigmoid termination functions. The
//! crate provides the parameter math, the four-rooms and exploration
//! environments, the option library and the training loops for
//! Option-Interruption and its baselines.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the precision used by the experiment harness.

pub mod env;
pub mod error;
pub mod exploration;
pub mod gridworld;
pub mod ids;
pub mod learners;
pub mod options;
pub mod params;
pub mod policy;
pub mod scalar;
pub mod segment;

pub use env::{ActionSource, Environment, OptionEnvironment, Transition};
pub use error::{HrlError, MapError, Result};
pub use ids::{Action, Coord, OptionId, StateId};
pub use params::{Deltas, Hyperparams, TerminationTd};
pub use scalar::Scalar;
pub use segment::{EndCause, SegmentTrace};

/// Default working precision.
pub type Real = f64;

pub type ParamTables = params::ParamTables<Real>;
pub type ParamTables32 = params::ParamTables<f32>;
pub type Hyper = Hyperparams<Real>;
pub type Hyper32 = Hyperparams<f32>;
pub type Trace = SegmentTrace<Real>;
pub type TrainingLog = learners::TrainingLog<Real>;
pub type EpisodeRecord = learners::EpisodeRecord<Real>;
pub type FourRooms = gridworld::FourRooms<Real>;
pub type FourRoomsConfig = gridworld::FourRoomsConfig<Real>;
pub type RewardConfig = exploration::RewardConfig<Real>;
pub type ExplorationConfig = exploration::ExplorationConfig<Real>;
pub type ExplorationEnv = exploration::ExplorationEnv<Real>;
pub type LinearModel = learners::LinearModel<Real>;
