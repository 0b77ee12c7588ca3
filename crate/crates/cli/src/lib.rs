//! Configuration, file formats and scenario orchestration around
//! `hybrid-link-core`.

pub mod app;
pub mod cache;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod sweep;
pub mod tsv;

pub use config::{BandSet, Config, PumpChoice, SweepSpec};
pub use error::{CliError, Result};
pub use runner::Study;
pub use sweep::{run_sweep, SweepOutcome, SweepRow};
