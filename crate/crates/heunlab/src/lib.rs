//! Command-line front end, instance files and result documents for
//! `heunlab-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod instance;
pub mod number;
pub mod report;
