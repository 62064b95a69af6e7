//! Standard-library companion to `rescue-core`: scenario file ingestion,
//! parallel run execution, and result artifact writers used by the
//! `rescue-sim` command-line tool.

pub mod output;
pub mod runner;
pub mod schema;
