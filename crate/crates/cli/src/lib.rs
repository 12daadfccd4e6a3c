//! Command-line front end: term and witness parsing, subcommands, and JSON
//! reports.

pub mod commands;
pub mod parse;
pub mod render;
pub mod report;

pub use commands::{execute, Cli, CliError, Command};
pub use parse::{parse_term, parse_terms, parse_witness, ParseError};
pub use report::{Check, Report};
