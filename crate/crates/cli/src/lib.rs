//! Sweep driver for `qd-haze`: config handling, grids and the subcommands
//! that turn a validated configuration into CSV.

pub mod commands;
pub mod config;
pub mod grid;

pub use commands::{cmd_bimodal, cmd_mutual_info, cmd_redundancy, run_validation, validation_csv, Check, Table};
pub use config::{ConfigError, EnvSpec, Sweep, SweepConfig};
