//! Body specs, experiment suites and their tabular reports.

pub mod experiments;
pub mod report;
pub mod spec;

pub use experiments::{run_experiment, ExperimentConfig, Suite};
pub use report::{Cell, ExperimentReport, Meta, Violation};
pub use spec::{build_body, load_body_spec, parse_body_spec};
