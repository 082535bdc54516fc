//! Experiment harness: wires the generators, heuristics, verifiers, and
//! exact baselines into reproducible ratio experiments.
//!
//! Every pass/fail decision is made in exact arithmetic: ratios are exact
//! rationals and the logarithmic bound is checked by cross-raising integers.
//! Floating point appears only in rendered output.

mod experiments;
mod report;

pub use experiments::{
    random_onetwo_check, run_cw_experiment, run_gk_experiment, run_onetwo_experiment,
    ExperimentRow, OneTwoRandomReport,
};
pub use report::{emit_report, random_report_csv, ReportFormat};

use std::fmt;

use tsplab_core::certificates::Verdict;

/// Harness-level error with a stable process exit code mapping.
#[derive(Debug)]
pub enum HarnessError {
    Core(tsplab_core::Error),
    Io(std::io::Error),
    /// An exact-arithmetic experiment assertion failed.
    Assertion(String),
    /// A certificate failed verification; the verdict carries the witness.
    Verification { param: u64, verdict: Verdict },
    EmptyReport,
}

impl HarnessError {
    /// 2 assertion failure, 3 verification failure, 4 I/O or parse error,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Assertion(_) => 2,
            HarnessError::Verification { .. } => 3,
            HarnessError::Io(_) | HarnessError::Core(tsplab_core::Error::Parse { .. }) => 4,
            _ => 1,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Core(e) => write!(f, "{e}"),
            HarnessError::Io(e) => write!(f, "i/o error: {e}"),
            HarnessError::Assertion(msg) => write!(f, "assertion failed: {msg}"),
            HarnessError::Verification { param, verdict } => {
                write!(
                    f,
                    "certificate verification failed at parameter {param}: {verdict}"
                )
            }
            HarnessError::EmptyReport => write!(f, "refusing to emit an empty report"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<tsplab_core::Error> for HarnessError {
    fn from(e: tsplab_core::Error) -> Self {
        HarnessError::Core(e)
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
