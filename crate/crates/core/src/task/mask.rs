//! Subject-specific masking of ground-truth grids.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Cell, Difficulty, Grid};
use crate::scenario::Subject;

use super::TaskError;

/// Generator for one instance, keyed by (seed, scenario, subject, difficulty).
/// Each key gets its own ChaCha stream, so any instance can be rebuilt alone.
pub fn mask_rng(
    seed: u64,
    scenario_index: usize,
    subject: Subject,
    difficulty: Difficulty,
) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = match difficulty {
        Difficulty::Easy => 0,
        Difficulty::Hard => 1,
    };
    rng.set_stream((scenario_index as u64) << 8 | (subject.index() as u64) << 1 | d);
    rng
}

fn marker_free_rows(gt: &Grid) -> Vec<usize> {
    (0..gt.rows())
        .filter(|&i| (0..gt.cols()).all(|j| !gt.get(i, j).is_marker()))
        .collect()
}

fn pick<R: Rng + ?Sized>(
    rng: &mut R,
    pool: usize,
    n: usize,
    subject: Subject,
) -> Result<Vec<usize>, TaskError> {
    if n > pool {
        return Err(TaskError::NotEnoughMaskable {
            subject,
            needed: n,
            available: pool,
        });
    }
    Ok(index::sample(rng, pool, n).into_vec())
}

/// Replaces the subject's cells with `V` and returns the input grid with the
/// masked positions in row-major order. Markers are never masked.
///
/// * `Cells(n)`: `n` distinct non-marker cells.
/// * `Rows(n)`: `n` whole rows chosen among rows without markers.
/// * `Columns(n)`: `n` columns; within each, the cells of marker-free rows.
/// * `Full`: every cell of every marker-free row.
pub fn apply_mask<R: Rng + ?Sized>(
    gt: &Grid,
    subject: Subject,
    rng: &mut R,
) -> Result<(Grid, Vec<(usize, usize)>), TaskError> {
    if gt.has_void() {
        return Err(TaskError::VoidInGroundTruth);
    }
    let free_rows = marker_free_rows(gt);
    let mut mask: Vec<(usize, usize)> = match subject {
        Subject::Cells(n) => {
            let pool = gt.positions_where(|c| !c.is_marker());
            pick(rng, pool.len(), n as usize, subject)?
                .into_iter()
                .map(|k| pool[k])
                .collect()
        }
        Subject::Rows(n) => pick(rng, free_rows.len(), n as usize, subject)?
            .into_iter()
            .flat_map(|k| {
                let i = free_rows[k];
                (0..gt.cols()).map(move |j| (i, j))
            })
            .collect(),
        Subject::Columns(n) => {
            let cols = if free_rows.is_empty() { 0 } else { gt.cols() };
            let rows = &free_rows;
            pick(rng, cols, n as usize, subject)?
                .into_iter()
                .flat_map(|j| rows.iter().map(move |&i| (i, j)))
                .collect()
        }
        Subject::Full => {
            if free_rows.is_empty() {
                return Err(TaskError::NotEnoughMaskable {
                    subject,
                    needed: 1,
                    available: 0,
                });
            }
            free_rows
                .iter()
                .flat_map(|&i| (0..gt.cols()).map(move |j| (i, j)))
                .collect()
        }
    };
    mask.sort_unstable();
    let mut input = gt.clone();
    for &(i, j) in &mask {
        input.set(i, j, Cell::Void);
    }
    Ok((input, mask))
}
