//! Front end for the `halfelastica` kernel: closure runs, curve exports,
//! period-map tables, the worked-example catalog and record verification.

pub mod catalog;
pub mod commands;
pub mod error;
pub mod export;
pub mod pipeline;
pub mod svg;

pub use error::{CliError, CliResult};
