//! File formats, reports and the command line of the `f4trace` tool.

pub mod cli;
pub mod io;
pub mod report;
