//! File formats, the parallel trial harness and the command line on top
//! of `berge-core`.

pub mod cli;
pub mod format;
pub mod harness;
