//! File formats and the command-line front end.

pub mod dot;
pub mod format;
pub mod report;
pub mod run;

pub use dot::{ra_to_dot, ta_to_dot};
pub use format::{parse_constraint, parse_model, ModelFile, ParseError, ParseErrorKind};
pub use report::{Predicate, Report};
pub use run::{run, Cli, Console, Failure};

/// Reported when the initial state of the plant is bad.
pub const UNDEFINED: &str = "synthesis undefined: initial state is bad";
