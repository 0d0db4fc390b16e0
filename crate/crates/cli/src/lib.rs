//! Front end for `tcurve`: problem files, reports, SVG pictures and the
//! exhaustive sign sweep.

pub mod enumerate;
pub mod problem;
pub mod render;
pub mod report;
pub mod run;

pub use problem::{ProblemError, ProblemFile, SignChoice};
pub use report::Report;
pub use run::{run, Command, Options, Output, RunError};
