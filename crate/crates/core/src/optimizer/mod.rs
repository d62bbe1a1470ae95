//! Steepest descent with a secant line search over a decreasing `γ`
//! schedule, recording and verifying every iterate with negative `J`.

mod config;
mod line_search;
mod search;

pub use config::{DescentConfig, SecantConfig, XiMode};
pub use line_search::{
    descent_step, secant_line_search, secant_root, DescentStep, Diverged, LineSearch, SecantRoot,
};
pub use search::{
    run_search, sample_xi, verify_record, IterationTrace, SearchOutcome, TraceRow, TrialRecord,
};
