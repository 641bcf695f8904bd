//! Command implementations behind the `paire` binary.

pub mod commands;
pub mod config;
pub mod repro;

pub use config::RunConfig;
