//! Input formats, the built-in catalog and JSON output.

pub mod canonical;
pub mod catalog;
pub mod instance;
pub mod report;
