//! Library side of the `risec` command: JSON run configurations, point
//! evaluation, one-dimensional sweeps to CSV, and analytic-versus-simulation
//! validation reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod run;
pub mod validate;

pub use config::{Output, RunConfig, Scale, SweepParam, SweepSpec};
pub use error::{exit, CliError};
pub use run::{point_csv, point_table, run_point, run_sweep, sweep_csv, PointMetrics, SweepRow};
pub use validate::{validate, Tolerances, ValidationReport, Verdict};
