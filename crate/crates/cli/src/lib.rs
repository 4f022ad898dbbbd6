//! File formats, experiment runner and diagnostic suite for the `apcg` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod config;
pub mod error;
pub mod experiment;
pub mod libsvm;

pub use check::{check_invariants, CheckConfig};
pub use config::{DataSource, ExperimentConfig, FileConfig, LossKind, Overrides};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, SummaryRow};
pub use libsvm::{load_libsvm, parse_libsvm, save_libsvm, write_libsvm, DatasetMeta};
