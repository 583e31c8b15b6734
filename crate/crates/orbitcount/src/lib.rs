//! File formats, threading and the command-line frontend for
//! [`orbitcount_core`].

pub mod cli;
pub mod error;
pub mod genfile;
pub mod parallel;
pub mod report;
pub mod series_csv;
pub mod verify;

pub use error::{CliError, CliResult};
