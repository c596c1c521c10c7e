//! Command-line front end: file-driven analyses and a reproduction report.

mod checks;
pub mod commands;
pub mod report;
