//! Core library for a topology-optimization reasoning benchmark: the grid
//! model, a SIMP solver, scenario enumeration, task masking and prompts, and
//! the metric suite.

pub mod dataset;
pub mod exec;
pub mod grid;
pub mod metrics;
pub mod scenario;
pub mod solver;
pub mod task;

pub use dataset::{build_dataset, read_jsonl, write_jsonl, DatasetError};
pub use exec::Execution;
pub use grid::{Cell, Difficulty, GravityVector, Grid, GridError};
pub use metrics::{evaluate, evaluate_batch, MetricConfig, MetricReport};
pub use scenario::{
    enumerate_scenarios, EnumerationConfig, Scenario, ScenarioError, Span, Subject,
};
pub use solver::{optimize, Optimized, SolverConfig, SolverError};
pub use task::{
    parse_completion, render_prompt, Completion, PromptStyle, Style, TaskError, TaskInstance,
};
