//! Argument parsing and subcommands for the `precint` binary.

pub mod commands;
pub mod parse;
