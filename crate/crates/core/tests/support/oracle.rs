//! Exhaustive load-path search over simple paths, for small grids only.
#![allow(dead_code)]

/// Minimal cost over every simple path from `load` to a support cell.
///
/// `solid[i][j]` marks traversable cells, `support[i][j]` the targets.
/// Step weights follow the cost table for axis-aligned gravity on an
/// 8-neighborhood: straight along gravity 1.0, any other step without an
/// upward component 1.5, upward steps forbidden. Each step is scaled by
/// `1 + 0.05 * depth` of the cell stepped onto.
pub fn min_path_cost(
    solid: &[Vec<bool>],
    support: &[Vec<bool>],
    load: (usize, usize),
    gravity: (i32, i32),
) -> Option<f64> {
    let rows = solid.len();
    let cols = solid[0].len();
    let mut visited = vec![vec![false; cols]; rows];
    visited[load.0][load.1] = true;
    let mut best: Option<f64> = None;
    walk(
        solid,
        support,
        load,
        load,
        gravity,
        0.0,
        &mut visited,
        &mut best,
    );
    best
}

fn step_weight(d: (i32, i32), g: (i32, i32)) -> Option<f64> {
    let dot = d.0 * g.0 + d.1 * g.1;
    if dot < 0 {
        return None;
    }
    if dot == 1 && d.0.abs() + d.1.abs() == 1 {
        Some(1.0)
    } else {
        Some(1.5)
    }
}

#[allow(clippy::too_many_arguments)]
fn walk(
    solid: &[Vec<bool>],
    support: &[Vec<bool>],
    load: (usize, usize),
    at: (usize, usize),
    g: (i32, i32),
    cost: f64,
    visited: &mut Vec<Vec<bool>>,
    best: &mut Option<f64>,
) {
    let (rows, cols) = (solid.len() as i32, solid[0].len() as i32);
    for di in -1..=1 {
        for dj in -1..=1 {
            if di == 0 && dj == 0 {
                continue;
            }
            let (ni, nj) = (at.0 as i32 + di, at.1 as i32 + dj);
            if ni < 0 || nj < 0 || ni >= rows || nj >= cols {
                continue;
            }
            let (ni, nj) = (ni as usize, nj as usize);
            if visited[ni][nj] || !solid[ni][nj] {
                continue;
            }
            let Some(w) = step_weight((di, dj), g) else {
                continue;
            };
            let depth =
                ((ni as i32 - load.0 as i32) * g.0 + (nj as i32 - load.1 as i32) * g.1).abs();
            let next = cost + w * (1.0 + 0.05 * depth as f64);
            if support[ni][nj] {
                if best.is_none_or(|b| next < b) {
                    *best = Some(next);
                }
                continue;
            }
            visited[ni][nj] = true;
            walk(solid, support, load, (ni, nj), g, next, visited, best);
            visited[ni][nj] = false;
        }
    }
}
