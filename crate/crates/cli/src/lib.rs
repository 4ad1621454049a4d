//! Library surface of the CLI: config parsing and subcommand runners,
//! kept separate from `main` so integration tests can drive them directly.

pub mod commands;
pub mod config;
