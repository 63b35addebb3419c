//! File formats, reports and command dispatch for the `xprod` tool.

pub mod document;
pub mod report;
pub mod run;

pub use document::{parse_document, serialize_document, Document, InputError};
pub use run::{run, run_text, threads_from_env, Command, Flags, Outcome};
