//! Command-line front end: Matrix Market I/O, single solves and
//! experiment sweeps written as CSV.

pub mod commands;
pub mod mm;
pub mod record;

pub use commands::{cmd_classify, cmd_experiment, cmd_solve, exit_code, Cli, CliError, Command};
pub use mm::{parse_matrix_market, parse_vector, write_matrix_market, write_vector};
pub use record::{RunRecord, CSV_HEADER};
