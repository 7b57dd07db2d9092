//! Sweeps, report files and oracle verification for `quup`.
//!
//! The binary is a thin wrapper: it parses flags, loads the constants table
//! and a [`config::RunConfig`], calls [`run::run`] and writes the resulting
//! [`output::Table`].

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;
pub mod verify;

pub use config::{ExperimentKind, Format, RunConfig};
pub use error::{CliError, Result};
pub use output::Table;
pub use run::{run, Context};
