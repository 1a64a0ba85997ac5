//! Problem files, CSV traces, rate reports and the command implementations
//! behind the `aamr` binary.

pub mod commands;
pub mod problem;
pub mod rate;
pub mod trace;

pub use commands::{dispatch, Command, CliOptions, ExitStatus};
pub use problem::{parse_problem, FiniteTermSpec, ParamOverrides, ProblemFile};
pub use rate::{rate_report, RateReport, SequenceCheck};
pub use trace::{read_trace, write_trace};
