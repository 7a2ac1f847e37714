//! Closed-loop experiments for the model-free control library: JSON
//! configuration, the simulation runner, CSV logs and summary metrics.

// `!(x > 0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod log;
pub mod metrics;
pub mod sim;

pub use config::{read_config, write_config, ExperimentConfig, Signal};
pub use error::{HarnessError, Result};
pub use log::{read_log_csv, render_log_csv, write_log_csv, HEADER};
pub use metrics::{compute_metrics, Summary, Tolerances};
pub use sim::{run_closed_loop, Record, RunLog, RunMeta};
