//! Benchmark runs against chat-completion endpoints: sampling, prompting,
//! completion caching, scoring and aggregation.

pub mod aggregate;
pub mod cache;
pub mod client;
pub mod endpoint;
pub mod mock;
pub mod run;
pub mod sample;

use thiserror::Error;
use topobench_core::{Difficulty, Subject};

pub use aggregate::{aggregate, render_table, GroupRow, ReportTable};
pub use cache::CompletionCache;
pub use client::{CallError, HttpClient, ModelClient, Query};
pub use endpoint::ModelEndpoint;
pub use mock::{AllZerosClient, EchoClient, NoiseClient, ScriptedClient};
pub use run::{run, RunOutput, RunRecord, RunSpec, ScoreLine};
pub use sample::{sample_instances, SampleSpec};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("stratum {subject}/{difficulty} has {available} instances, {requested} requested")]
    InsufficientInstances {
        subject: Subject,
        difficulty: Difficulty,
        requested: usize,
        available: usize,
    },
    #[error("no records to aggregate")]
    EmptyGroup,
    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),
    #[error("invalid run spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
