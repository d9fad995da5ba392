//! Batch sweeps over probe energy, perturbation and decision parameters.
//!
//! Grid points run in parallel on the current rayon pool; rows are emitted
//! in grid order, so the output does not depend on the worker count.

pub mod config;
pub mod fit;
pub mod runners;
pub mod table;

pub use config::{ConfigError, CutoffPolicy, DecisionSection, ExperimentConfig, Format, OverlapSource};
pub use fit::{fit_loglog, fit_scaling, ScalingFit};
pub use runners::{run_overlap, run_photocurrent, run_roc, run_sensitivity, SweepOutput};
pub use table::{Table, Value};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "INTERF_OUT_DIR";
