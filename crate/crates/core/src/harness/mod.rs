//! Numerical certification: grid scans, limit checks, inequality suites,
//! explicit counterexamples and classical oracles.

pub mod classical;
pub mod counterexample;
pub mod ensemble;
pub mod grid;
pub mod inequalities;
pub mod limits;
pub mod report;
pub mod scans;
pub mod suites;
pub mod theorem6;
pub mod theorem9;

pub use counterexample::{
    conjecture_search, reproduce_paper_counterexample, rotated_scan, CounterexampleRecord, SearchConfig, SearchSpace,
};
pub use grid::Grid;
pub use report::Check;
pub use scans::{logconvexity_scan, monotonicity_scan, Curve, LogConvexCurve, MonotoneCurve, ScanReport};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteReport};
