//! Library side of the `wforms` command: configuration, suites, reports.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;
