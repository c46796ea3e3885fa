//! Experiment runners behind the `hidden-shift` binary.
//!
//! Each runner takes a config, executes seeded trials, and produces an
//! [`report::ExperimentReport`]: a JSON document with a `schema` version,
//! the echoed config, derived quantities (tuple lengths, exact bound
//! values), per-trial rows, aggregate statistics, and pass/fail verdicts.
//! Rerunning with an identical config reproduces the report byte for byte,
//! except for the `timing` field.

pub mod bent;
pub mod bounds;
pub mod end_to_end;
pub mod game;
pub mod oracle_cmd;
pub mod periodicity;
pub mod report;

use thiserror::Error;

/// Feasibility guard on `|G|` for table-driven experiments.
pub const MAX_ORDER: usize = 1 << 16;

/// A configuration problem: reported to stderr, exit code 2.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl From<hidden_shift_core::Error> for ConfigError {
    fn from(err: hidden_shift_core::Error) -> Self {
        ConfigError(err.to_string())
    }
}

impl From<std::io::Error> for ConfigError {
    fn from(err: std::io::Error) -> Self {
        ConfigError(err.to_string())
    }
}
