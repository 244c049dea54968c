//! Library surface of the CLI: file formats and report types, exposed for
//! integration tests.

pub mod commands;
pub mod format;
pub mod report;
