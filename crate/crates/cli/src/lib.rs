//! Command-line surface over the `subplanck` library.

pub mod args;
pub mod commands;
pub mod complex;
pub mod output;

pub use args::Cli;
pub use commands::{run, Outcome};
