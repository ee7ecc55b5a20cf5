//! Pipeline library behind the `longrun` command-line tool: configuration,
//! CSV ingestion, the staged analysis workflow, and report emission.

pub mod config;
pub mod error;
pub mod ingest;
pub mod pipeline;
pub mod report;
