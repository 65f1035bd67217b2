//! Command-line front end: operator syntax, subcommands and output
//! documents.

pub mod commands;
pub mod output;
pub mod parser;

pub use commands::{main_with_args, run, Cli, CliError, Command, Format, Outcome};
pub use output::OutputDocument;
pub use parser::{parse_operator, parse_poly, parse_ratfun, ParseError};
