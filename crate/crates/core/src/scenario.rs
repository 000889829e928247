//! Boundary-condition scenarios and task subjects.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::GravityVector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("span starting at {start} with width {width} does not fit {cols} columns")]
    SpanOutOfDomain {
        start: usize,
        width: usize,
        cols: usize,
    },
    #[error("domain must have at least 2 rows and 1 column, got {rows}x{cols}")]
    BadDomain { rows: usize, cols: usize },
    #[error("enumeration width {0} is outside 3..=6")]
    WidthOutOfRange(usize),
    #[error("stride must be at least 1")]
    ZeroStride,
    #[error("enumeration produced no scenarios")]
    EmptyEnumeration,
    #[error("rotation must be 0..=3 quarter turns, got {0}")]
    InvalidRotation(u8),
}

/// Contiguous run of cells along one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub width: usize,
}

impl Span {
    pub fn new(start: usize, width: usize) -> Self {
        Span { start, width }
    }

    pub fn columns(self) -> std::ops::Range<usize> {
        self.start..self.start + self.width
    }
}

/// Loads along the top row and supports along the bottom row of a
/// `rows x cols` domain, optionally viewed after `rotation` quarter turns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub rows: usize,
    pub cols: usize,
    pub load: Span,
    pub support: Span,
    pub rotation: u8,
    pub gravity: GravityVector,
}

impl Scenario {
    pub fn new(rows: usize, cols: usize, load: Span, support: Span) -> Result<Self, ScenarioError> {
        if rows < 2 || cols == 0 {
            return Err(ScenarioError::BadDomain { rows, cols });
        }
        for span in [load, support] {
            if span.width == 0 || span.start + span.width > cols {
                return Err(ScenarioError::SpanOutOfDomain {
                    start: span.start,
                    width: span.width,
                    cols,
                });
            }
        }
        Ok(Scenario {
            rows,
            cols,
            load,
            support,
            rotation: 0,
            gravity: GravityVector::DOWN,
        })
    }

    /// Same boundary conditions viewed after `k` clockwise quarter turns.
    pub fn with_rotation(mut self, k: u8) -> Result<Self, ScenarioError> {
        let gravity = GravityVector::DOWN
            .rotate(k)
            .map_err(|_| ScenarioError::InvalidRotation(k))?;
        self.rotation = k;
        self.gravity = gravity;
        Ok(self)
    }

    /// Load cells in the unrotated frame.
    pub fn load_cells(&self) -> Vec<(usize, usize)> {
        self.load.columns().map(|c| (0, c)).collect()
    }

    /// Support cells in the unrotated frame.
    pub fn support_cells(&self) -> Vec<(usize, usize)> {
        self.support.columns().map(|c| (self.rows - 1, c)).collect()
    }

    pub fn label(&self) -> String {
        format!(
            "L{}+{} S{}+{}",
            self.load.start, self.load.width, self.support.start, self.support.width
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnumerationConfig {
    pub rows: usize,
    pub cols: usize,
    pub widths: Vec<usize>,
    pub stride: usize,
    /// First start column considered on each edge.
    pub offset: usize,
}

impl Default for EnumerationConfig {
    /// 9 placements per edge (3 + 2 + 2 + 2 over widths 3..=6), 81 scenarios.
    fn default() -> Self {
        EnumerationConfig {
            rows: 10,
            cols: 10,
            widths: vec![3, 4, 5, 6],
            stride: 3,
            offset: 1,
        }
    }
}

/// Placements of each width along an edge, in ascending order.
fn placements(cfg: &EnumerationConfig) -> Vec<Span> {
    let mut widths = cfg.widths.clone();
    widths.sort_unstable();
    widths.dedup();
    let mut out = Vec::new();
    for w in widths {
        if w > cfg.cols || cfg.offset > cfg.cols - w {
            continue;
        }
        for start in (cfg.offset..=cfg.cols - w).step_by(cfg.stride) {
            out.push(Span::new(start, w));
        }
    }
    out
}

/// Every pairing of a load placement with a support placement, ordered by
/// (load width, load start, support width, support start).
pub fn enumerate_scenarios(cfg: &EnumerationConfig) -> Result<Vec<Scenario>, ScenarioError> {
    if cfg.stride == 0 {
        return Err(ScenarioError::ZeroStride);
    }
    if cfg.rows < 2 || cfg.cols == 0 {
        return Err(ScenarioError::BadDomain {
            rows: cfg.rows,
            cols: cfg.cols,
        });
    }
    if let Some(&w) = cfg.widths.iter().find(|w| !(3..=6).contains(*w)) {
        return Err(ScenarioError::WidthOutOfRange(w));
    }
    let edge = placements(cfg);
    let mut out = Vec::with_capacity(edge.len() * edge.len());
    for &load in &edge {
        for &support in &edge {
            out.push(Scenario::new(cfg.rows, cfg.cols, load, support)?);
        }
    }
    if out.is_empty() {
        return Err(ScenarioError::EmptyEnumeration);
    }
    Ok(out)
}

/// Masking task variation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subject {
    Cells(u8),
    Rows(u8),
    Columns(u8),
    Full,
}

impl Subject {
    pub const ALL: [Subject; 8] = [
        Subject::Cells(1),
        Subject::Cells(5),
        Subject::Cells(10),
        Subject::Rows(1),
        Subject::Rows(3),
        Subject::Columns(1),
        Subject::Columns(3),
        Subject::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subject::Cells(1) => "1_random_cell",
            Subject::Cells(5) => "5_random_cells",
            Subject::Cells(10) => "10_random_cells",
            Subject::Rows(1) => "1_random_row",
            Subject::Rows(3) => "3_random_rows",
            Subject::Columns(1) => "1_random_column",
            Subject::Columns(3) => "3_random_columns",
            Subject::Full => "full",
            _ => "unknown",
        }
    }

    /// Position in [`Subject::ALL`].
    pub fn index(self) -> usize {
        Subject::ALL
            .iter()
            .position(|&s| s == self)
            .unwrap_or(usize::MAX)
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subject {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Subject::ALL
            .into_iter()
            .find(|subj| subj.name() == s)
            .ok_or_else(|| format!("unknown subject {s:?}"))
    }
}

impl Serialize for Subject {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Subject {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
