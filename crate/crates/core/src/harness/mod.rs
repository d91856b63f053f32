//! Command-line harness: configuration, runs, artifacts and validation.

pub mod config;
pub mod output;
pub mod report;
pub mod run;
pub mod svg;
pub mod validation;
