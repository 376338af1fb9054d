//! Benchmark harness for the ddm-core matchers: suite running, scaling
//! metrics, CSV persistence and peak-RSS probing. The `ddm` binary is a thin
//! command-line front end over these modules.

pub mod csv;
pub mod rss;
pub mod scaling;
pub mod suite;

pub use scaling::{compute_scaling, ScalingRow, ScalingSummary};
pub use suite::{
    default_thread_sweep, physical_cores, run_suite, Aggregate, BenchRecord, SkippedCombo,
    SuiteConfig, SuiteError, SuiteReport, DEFAULT_TIME_BUDGET_SECS,
};
