//! Batch front end: problem files in, exact reports out.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod poly;
pub mod problem;
pub mod report;
pub mod run;

pub use error::CliError;
pub use problem::{parse_problem, parse_problem_with_order, print_problem, ProblemKind, ProblemSpec};
pub use report::Report;
pub use run::{run, verify_report, Command};
