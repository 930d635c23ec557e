//! Command line front end, file formats and rayon runners over `heattrace-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod runner;
pub mod verify;
