//! Experiment plumbing: labeled synthetic data, parameter sweeps with
//! timing, report writers, and brute-force oracles.

pub mod oracle;
mod report;
mod sweep;
mod synth;

pub use oracle::{oracle_check, oracle_trials, Mismatch, OracleReport};
pub use report::{emit_report, parse_report, series_tables, write_series, ReportFormat, REPORT_COLUMNS, SERIES};
pub use sweep::{run_sweep, Algorithm, Cell, FloatGrid, ResultRow, SweepConfig};
pub use synth::{generate_synthetic, SyntheticSpec};

use thiserror::Error;

use crate::cluster::ClusterError;
use crate::dataset::DataError;
use crate::validity::IndexError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("config line {line}: {detail}")]
    InvalidConfig { line: usize, detail: String },
    #[error("no rows to report")]
    EmptyRows,
    #[error("report record {record}: {detail}")]
    BadReport { record: usize, detail: String },
    #[error("oracle mismatch in {}: {}\ninstance: {}", .0.check, .0.detail, .0.instance)]
    OracleMismatch(Box<Mismatch>),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
