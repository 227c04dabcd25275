//! File formats and subcommands of the `fibrelab` binary.

pub mod commands;
pub mod schema;
