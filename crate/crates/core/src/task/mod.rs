//! Benchmark task instances: masking, prompt rendering and completion parsing.

pub mod completion;
pub mod mask;
pub mod prompt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{rotate_position, Difficulty, GravityVector, Grid, GridError};
use crate::scenario::Subject;

pub use completion::{parse_completion, Completion};
pub use mask::{apply_mask, mask_rng};
pub use prompt::{render_prompt, PromptStyle, Style};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaskError {
    #[error("{subject} needs {needed} maskable units but only {available} exist")]
    NotEnoughMaskable {
        subject: Subject,
        needed: usize,
        available: usize,
    },
    #[error("ground truth contains V cells")]
    VoidInGroundTruth,
    #[error("{needed} few-shot examples requested but only {available} candidates")]
    EmptyPool { needed: usize, available: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("record {id}: {reason}")]
    BadRecord { id: String, reason: String },
}

/// One benchmark sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskInstance {
    pub id: String,
    pub subject: Subject,
    pub difficulty: Difficulty,
    pub rotation: u8,
    pub gravity: GravityVector,
    pub input: Grid,
    pub ground_truth: Grid,
    /// Masked positions in row-major order.
    pub mask: Vec<(usize, usize)>,
}

impl TaskInstance {
    /// The same task after `k` further clockwise quarter turns. Gravity and
    /// mask positions turn with the grids; the id gains an `-r<k>` suffix.
    pub fn rotated(&self, k: u8) -> Result<TaskInstance, GridError> {
        if k == 0 {
            return Ok(self.clone());
        }
        let (rows, cols) = self.input.shape();
        let mut mask: Vec<_> = self
            .mask
            .iter()
            .map(|&p| rotate_position(p, rows, cols, k))
            .collect();
        mask.sort_unstable();
        Ok(TaskInstance {
            id: format!("{}-r{k}", self.id),
            subject: self.subject,
            difficulty: self.difficulty,
            rotation: (self.rotation + k) % 4,
            gravity: self.gravity.rotate(k)?,
            input: self.input.rotate90(k)?,
            ground_truth: self.ground_truth.rotate90(k)?,
            mask,
        })
    }

    pub fn to_record(&self) -> TaskRecord {
        TaskRecord {
            id: self.id.clone(),
            subject: self.subject,
            difficulty: self.difficulty,
            rotation: self.rotation,
            gravity: self.gravity,
            input_grid: self.input.render(self.difficulty),
            gt_grid: self.ground_truth.render(self.difficulty),
            mask_cells: self.mask.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }

    pub fn from_record(rec: TaskRecord) -> Result<Self, TaskError> {
        let bad = |reason: String| TaskError::BadRecord {
            id: rec.id.clone(),
            reason,
        };
        let input = Grid::parse(&rec.input_grid, rec.difficulty)
            .map_err(|e| bad(format!("input_grid: {e}")))?;
        let ground_truth =
            Grid::parse(&rec.gt_grid, rec.difficulty).map_err(|e| bad(format!("gt_grid: {e}")))?;
        if rec.rotation > 3 {
            return Err(bad(format!("rotation {} out of range", rec.rotation)));
        }
        let mask: Vec<(usize, usize)> = rec.mask_cells.iter().map(|&[i, j]| (i, j)).collect();
        let voids = input.positions_where(|c| c == crate::grid::Cell::Void);
        let mut sorted = mask.clone();
        sorted.sort_unstable();
        if sorted != voids {
            return Err(bad(
                "mask_cells do not match the V cells of input_grid".into()
            ));
        }
        Ok(TaskInstance {
            id: rec.id.clone(),
            subject: rec.subject,
            difficulty: rec.difficulty,
            rotation: rec.rotation,
            gravity: rec.gravity,
            input,
            ground_truth,
            mask: sorted,
        })
    }
}

/// Line-delimited persistence form of a [`TaskInstance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskRecord {
    pub id: String,
    pub subject: Subject,
    pub difficulty: Difficulty,
    pub rotation: u8,
    pub gravity: GravityVector,
    pub input_grid: String,
    pub gt_grid: String,
    pub mask_cells: Vec<[usize; 2]>,
}

impl Serialize for TaskInstance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TaskInstance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rec = TaskRecord::deserialize(deserializer)?;
        TaskInstance::from_record(rec).map_err(serde::de::Error::custom)
    }
}
