//! Command-line companion to `gapos-core`: file IO around the text
//! formats, batch tagging parallel across sentences, and the parameter
//! sweep harness with CSV output.

pub mod error;
pub mod io;
pub mod sweep;
pub mod tagging;

pub use error::CliError;
