//! File formats, seeded instance generation and the `dpo` command line.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod io;
pub mod properties;
pub mod random;

pub use cli::run;
pub use error::CliError;
