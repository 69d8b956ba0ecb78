//! Experiment driver: flat configs, seeded parallel replicates, JSON-lines
//! metrics, summary tables and learning curves.

pub mod config;
pub mod error;
pub mod metrics;
pub mod run;
pub mod seed;
pub mod summary;

pub use config::{Algorithm, EnvId, ExperimentConfig, OUTPUT_ROOT_VAR};
pub use error::{HarnessError, Result};
pub use metrics::{read_records, MetricRecord, SCHEMA_VERSION};
pub use run::{run_experiment, run_replicate, RunOutcome};
pub use summary::{curve, summarize_dir, summarize_records, write_curves, SummaryRow, DEFAULT_WINDOW};
