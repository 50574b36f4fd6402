//! JSON formats, reports and the `polystab` command line on top of
//! [`polystab_core`].

pub mod cli;
pub mod error;
pub mod input;
pub mod report;

pub use error::{CliError, CliResult};
