//! Std-side companion to `rsad-core`: the prime table cache file, threaded
//! drivers, report formatting and the `rsad` command line.

pub mod cache;
pub mod cli;
pub mod parallel;
pub mod report;

pub use report::CountReport;
