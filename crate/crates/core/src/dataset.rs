//! Dataset construction and line-delimited persistence.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::exec::Execution;
use crate::grid::Difficulty;
use crate::scenario::{Scenario, Subject};
use crate::solver::{optimize, SolverConfig, SolverError};
use crate::task::{apply_mask, mask_rng, TaskError, TaskInstance};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("no scenarios to build")]
    NoScenarios,
    #[error("scenario {index} ({label}): {source}")]
    Solver {
        index: usize,
        label: String,
        source: SolverError,
    },
    #[error("scenario {index} ({label}): {source}")]
    Mask {
        index: usize,
        label: String,
        source: TaskError,
    },
    #[error("line {line}: {source}")]
    Decode {
        line: usize,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn instance_id(scenario_index: usize, subject: Subject, difficulty: Difficulty) -> String {
    format!("s{scenario_index:03}-{subject}-{difficulty}")
}

/// Optimizes every scenario once and derives one instance per subject and
/// difficulty. Output is ordered by scenario, then subject, then difficulty.
pub fn build_dataset(
    scenarios: &[Scenario],
    cfg: &SolverConfig,
    seed: u64,
    exec: Execution,
) -> Result<Vec<TaskInstance>, DatasetError> {
    if scenarios.is_empty() {
        return Err(DatasetError::NoScenarios);
    }
    let per_scenario = exec.map(
        scenarios,
        |index, scenario| -> Result<Vec<TaskInstance>, DatasetError> {
            let label = scenario.label();
            let out = optimize(scenario, cfg).map_err(|source| DatasetError::Solver {
                index,
                label: label.clone(),
                source,
            })?;
            let mut instances = Vec::with_capacity(Subject::ALL.len() * 2);
            for subject in Subject::ALL {
                for difficulty in Difficulty::ALL {
                    let gt = match difficulty {
                        Difficulty::Easy => &out.easy,
                        Difficulty::Hard => &out.hard,
                    };
                    let mut rng = mask_rng(seed, index, subject, difficulty);
                    let (input, mask) =
                        apply_mask(gt, subject, &mut rng).map_err(|source| DatasetError::Mask {
                            index,
                            label: label.clone(),
                            source,
                        })?;
                    instances.push(TaskInstance {
                        id: instance_id(index, subject, difficulty),
                        subject,
                        difficulty,
                        rotation: scenario.rotation,
                        gravity: scenario.gravity,
                        input,
                        ground_truth: gt.clone(),
                        mask,
                    });
                }
            }
            Ok(instances)
        },
    );
    let mut all = Vec::with_capacity(scenarios.len() * 16);
    for batch in per_scenario {
        all.extend(batch?);
    }
    Ok(all)
}

/// One JSON object per line, each terminated by `\n`.
pub fn write_jsonl<W: Write, T: serde::Serialize>(mut w: W, items: &[T]) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Reads one JSON object per non-blank line.
pub fn read_jsonl<R: BufRead, T: serde::de::DeserializeOwned>(
    r: R,
) -> Result<Vec<T>, DatasetError> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| DatasetError::Decode {
                line: n + 1,
                source,
            })?,
        );
    }
    Ok(out)
}
