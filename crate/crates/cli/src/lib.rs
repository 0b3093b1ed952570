//! Library side of the `ghzsim` binary: config parsing and subcommands.

pub mod commands;
pub mod config;

pub use commands::{cmd_run, cmd_sweep, cmd_validate, load_config, Overrides};
pub use config::{parse_config, ConfigError, OmegaSpec, RunConfig};
