//! Parallel drivers, the evaluation-table cache, resumable censuses and the
//! output types behind the `tsn` command line.

pub mod cache;
pub mod parallel;
pub mod report;
pub mod split;
