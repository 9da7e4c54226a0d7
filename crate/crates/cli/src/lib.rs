//! Library side of the `fairaudit` command line tool: config and input
//! schemas, dataset ingestion, report serialization, and the subcommand
//! implementations. The binary in `main.rs` only parses arguments and
//! maps errors to exit codes.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod report;
pub mod schema;

pub use error::CliError;
