//! Library side of the `rhymevec` command-line tool: configuration handling,
//! the pipeline orchestrator, and the synthetic corpus generator. The binary
//! in `main.rs` is a thin argument-parsing layer over these.

pub mod config;
pub mod fixture;
pub mod pipeline;

pub use config::{ConfigOverrides, PipelineConfig};
pub use fixture::{generate_poetry_corpus, CorpusSpec};
pub use pipeline::run_pipeline;
