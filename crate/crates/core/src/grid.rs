//! Grid data model and the space-separated text format.
//!
//! A grid is a row-major lattice of [`Cell`]s. Row `i` counts from the top,
//! column `j` from the left. The text format puts one row per line with
//! cells separated by a single space; `L`, `S` and `V` are the load, support
//! and masked-cell markers, everything else is a material density.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid text is empty")]
    Empty,
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("unrecognized token {token:?} at ({row}, {col})")]
    BadToken {
        row: usize,
        col: usize,
        token: String,
    },
    #[error("value {value} at ({row}, {col}) is outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("grid contains masked (V) cells")]
    VoidPresent,
    #[error("cell count {len} does not match {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("rotation must be 0..=3 quarter turns, got {0}")]
    InvalidRotation(u8),
}

/// One lattice cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Load,
    Support,
    Void,
    /// Material density. Grids built through the checked constructors keep
    /// this in `[0, 1]`; [`Grid::parse_unchecked`] admits any finite value so
    /// raw completions can still be scored.
    Value(f64),
}

impl Cell {
    pub fn is_marker(self) -> bool {
        matches!(self, Cell::Load | Cell::Support)
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            _ => None,
        }
    }

    /// Solid for connectivity purposes: any marker or a density above `threshold`.
    pub fn is_solid(self, threshold: f64) -> bool {
        match self {
            Cell::Load | Cell::Support => true,
            Cell::Value(v) => v > threshold,
            Cell::Void => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    /// Binary densities.
    Easy,
    /// One-decimal densities in `[0, 1]`.
    Hard,
}

impl Difficulty {
    pub const ALL: [Difficulty; 2] = [Difficulty::Easy, Difficulty::Hard];

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Hard => "hard",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Difficulty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "easy" => Ok(Difficulty::Easy),
            "hard" => Ok(Difficulty::Hard),
            other => Err(format!("unknown difficulty {other:?}")),
        }
    }
}

/// Axis-aligned unit gravity direction in (row, column) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i8; 2]", into = "[i8; 2]")]
pub struct GravityVector {
    dr: i8,
    dc: i8,
}

impl GravityVector {
    /// Straight down the rows, the unrotated dataset frame.
    pub const DOWN: GravityVector = GravityVector { dr: 1, dc: 0 };

    pub fn new(dr: i8, dc: i8) -> Option<Self> {
        match (dr, dc) {
            (-1 | 1, 0) | (0, -1 | 1) => Some(GravityVector { dr, dc }),
            _ => None,
        }
    }

    pub fn dr(self) -> i8 {
        self.dr
    }

    pub fn dc(self) -> i8 {
        self.dc
    }

    /// Co-rotates with [`Grid::rotate90`]: each clockwise quarter turn maps
    /// `(dr, dc)` to `(dc, -dr)`.
    pub fn rotate(self, k: u8) -> Result<Self, GridError> {
        check_turns(k)?;
        let mut g = self;
        for _ in 0..k {
            g = GravityVector {
                dr: g.dc,
                dc: -g.dr,
            };
        }
        Ok(g)
    }
}

impl Default for GravityVector {
    fn default() -> Self {
        GravityVector::DOWN
    }
}

impl TryFrom<[i8; 2]> for GravityVector {
    type Error = String;

    fn try_from(v: [i8; 2]) -> Result<Self, Self::Error> {
        GravityVector::new(v[0], v[1])
            .ok_or_else(|| format!("{v:?} is not an axis-aligned unit vector"))
    }
}

impl From<GravityVector> for [i8; 2] {
    fn from(g: GravityVector) -> Self {
        [g.dr, g.dc]
    }
}

fn check_turns(k: u8) -> Result<(), GridError> {
    if k > 3 {
        Err(GridError::InvalidRotation(k))
    } else {
        Ok(())
    }
}

/// Maps a position through `k` clockwise quarter turns of a `rows x cols` grid.
pub fn rotate_position(pos: (usize, usize), rows: usize, cols: usize, k: u8) -> (usize, usize) {
    let (mut i, mut j) = pos;
    let (mut r, mut c) = (rows, cols);
    for _ in 0..k % 4 {
        (i, j) = (j, r - 1 - i);
        (r, c) = (c, r);
    }
    (i, j)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize, cells: Vec<Cell>) -> Result<Self, GridError> {
        if cells.len() != rows * cols {
            return Err(GridError::Shape {
                rows,
                cols,
                len: cells.len(),
            });
        }
        for (idx, cell) in cells.iter().enumerate() {
            if let Cell::Value(v) = *cell {
                if !(0.0..=1.0).contains(&v) {
                    return Err(GridError::OutOfRange {
                        row: idx / cols.max(1),
                        col: idx % cols.max(1),
                        value: v,
                    });
                }
            }
        }
        Ok(Grid { rows, cols, cells })
    }

    pub fn filled(rows: usize, cols: usize, cell: Cell) -> Self {
        Grid {
            rows,
            cols,
            cells: vec![cell; rows * cols],
        }
    }

    /// Strict parse of the text format for the given difficulty.
    ///
    /// Easy grids accept `0`/`1`; Hard grids accept one-decimal literals
    /// `0.0`..`1.0` and bare `0`/`1`. Blank lines are skipped.
    pub fn parse(text: &str, difficulty: Difficulty) -> Result<Self, GridError> {
        parse_with(text, |row, col, tok| {
            parse_strict_token(row, col, tok, difficulty)
        })
    }

    /// Like [`Grid::parse`] but accepts any finite numeric token, in or out of
    /// range. Markers and unknown symbols are handled as in the strict parser.
    pub fn parse_unchecked(text: &str) -> Result<Self, GridError> {
        parse_with(text, |row, col, tok| {
            if let Some(cell) = marker(tok) {
                return Ok(cell);
            }
            match tok.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Cell::Value(v)),
                _ => Err(GridError::BadToken {
                    row,
                    col,
                    token: tok.to_string(),
                }),
            }
        })
    }

    /// Renders to the text format. Easy emits `0`/`1`, Hard one decimal.
    pub fn render(&self, difficulty: Difficulty) -> String {
        let mut out = String::with_capacity(self.cells.len() * 4);
        for i in 0..self.rows {
            if i > 0 {
                out.push('\n');
            }
            for j in 0..self.cols {
                if j > 0 {
                    out.push(' ');
                }
                match self.cells[i * self.cols + j] {
                    Cell::Load => out.push('L'),
                    Cell::Support => out.push('S'),
                    Cell::Void => out.push('V'),
                    Cell::Value(v) => match difficulty {
                        Difficulty::Easy if v == 0.0 => out.push('0'),
                        Difficulty::Easy if v == 1.0 => out.push('1'),
                        _ => out.push_str(&format!("{v:.1}")),
                    },
                }
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, cell: Cell) {
        self.cells[i * self.cols + j] = cell;
    }

    pub fn in_bounds(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.rows && (j as usize) < self.cols
    }

    /// Iterates `((i, j), cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Cell)> + '_ {
        let cols = self.cols;
        self.cells
            .iter()
            .enumerate()
            .map(move |(idx, &c)| ((idx / cols, idx % cols), c))
    }

    pub fn positions_where(&self, pred: impl Fn(Cell) -> bool) -> Vec<(usize, usize)> {
        self.iter()
            .filter(|&(_, c)| pred(c))
            .map(|(p, _)| p)
            .collect()
    }

    pub fn loads(&self) -> Vec<(usize, usize)> {
        self.positions_where(|c| c == Cell::Load)
    }

    pub fn supports(&self) -> Vec<(usize, usize)> {
        self.positions_where(|c| c == Cell::Support)
    }

    pub fn has_void(&self) -> bool {
        self.cells.contains(&Cell::Void)
    }

    /// Every density `d` becomes `1` when `d >= threshold`, else `0`.
    pub fn binarize(&self, threshold: f64) -> Result<Grid, GridError> {
        if self.has_void() {
            return Err(GridError::VoidPresent);
        }
        let cells = self
            .cells
            .iter()
            .map(|&c| match c {
                Cell::Value(d) => Cell::Value(if d >= threshold { 1.0 } else { 0.0 }),
                other => other,
            })
            .collect();
        Ok(Grid {
            rows: self.rows,
            cols: self.cols,
            cells,
        })
    }

    /// Rotates `k` quarter turns clockwise.
    pub fn rotate90(&self, k: u8) -> Result<Grid, GridError> {
        check_turns(k)?;
        let (rows, cols) = if k.is_multiple_of(2) {
            (self.rows, self.cols)
        } else {
            (self.cols, self.rows)
        };
        let mut cells = vec![Cell::Void; self.cells.len()];
        for ((i, j), cell) in self.iter() {
            let (ni, nj) = rotate_position((i, j), self.rows, self.cols, k);
            cells[ni * cols + nj] = cell;
        }
        Ok(Grid { rows, cols, cells })
    }

    /// Mirror image across the vertical axis.
    pub fn mirror_columns(&self) -> Grid {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, self.cols - 1 - j));
            }
        }
        out
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Difficulty::Hard))
    }
}

fn marker(tok: &str) -> Option<Cell> {
    match tok {
        "L" => Some(Cell::Load),
        "S" => Some(Cell::Support),
        "V" => Some(Cell::Void),
        _ => None,
    }
}

fn parse_strict_token(
    row: usize,
    col: usize,
    tok: &str,
    difficulty: Difficulty,
) -> Result<Cell, GridError> {
    if let Some(cell) = marker(tok) {
        return Ok(cell);
    }
    let bad = || GridError::BadToken {
        row,
        col,
        token: tok.to_string(),
    };
    let value: f64 = match tok.parse::<f64>() {
        Ok(v) if v.is_finite() && looks_numeric(tok) => v,
        _ => return Err(bad()),
    };
    if !(0.0..=1.0).contains(&value) {
        return Err(GridError::OutOfRange { row, col, value });
    }
    let well_formed = match difficulty {
        Difficulty::Easy => tok == "0" || tok == "1",
        Difficulty::Hard => tok == "0" || tok == "1" || is_one_decimal(tok),
    };
    if well_formed {
        Ok(Cell::Value(value))
    } else {
        Err(bad())
    }
}

// Rejects "inf", "NaN", "1e0" and friends that f64::from_str would accept.
fn looks_numeric(tok: &str) -> bool {
    let digits = tok.strip_prefix(['-', '+']).unwrap_or(tok);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit() || c == '.')
}

fn is_one_decimal(tok: &str) -> bool {
    let b = tok.as_bytes();
    b.len() == 3 && b[0].is_ascii_digit() && b[1] == b'.' && b[2].is_ascii_digit()
}

fn parse_with(
    text: &str,
    mut token: impl FnMut(usize, usize, &str) -> Result<Cell, GridError>,
) -> Result<Grid, GridError> {
    let mut cols = None;
    let mut cells = Vec::new();
    let mut rows = 0;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let mut found = 0;
        for (j, tok) in line.split_whitespace().enumerate() {
            cells.push(token(rows, j, tok)?);
            found += 1;
        }
        match cols {
            None => cols = Some(found),
            Some(expected) if expected != found => {
                return Err(GridError::RaggedRows {
                    row: rows,
                    expected,
                    found,
                })
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or(GridError::Empty)?;
    Ok(Grid { rows, cols, cells })
}
