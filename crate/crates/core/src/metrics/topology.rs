//! Load-support connectivity and isolated material clusters.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::grid::{Cell, GravityVector, Grid};

use super::force_path::NEIGHBORS_8;

const NEIGHBORS_4: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Connected,
    Disconnected,
    NoLoads,
    NoSupports,
}

impl Connectivity {
    pub fn is_connected(self) -> bool {
        self == Connectivity::Connected
    }
}

/// Breadth-first search from every load through solid cells (markers or
/// density above `threshold`).
///
/// The non-directional variant steps to all 8 neighbors. The directional
/// variant only steps along gravity or perpendicular to it, never diagonally.
pub fn ls_connectivity(
    g: &Grid,
    directional: bool,
    gravity: GravityVector,
    threshold: f64,
) -> Connectivity {
    let loads = g.loads();
    if loads.is_empty() {
        return Connectivity::NoLoads;
    }
    if g.supports().is_empty() {
        return Connectivity::NoSupports;
    }
    let moves: Vec<(isize, isize)> = if directional {
        let (gr, gc) = (gravity.dr() as isize, gravity.dc() as isize);
        vec![(gr, gc), (gc, gr), (-gc, -gr)]
    } else {
        NEIGHBORS_8.to_vec()
    };
    let cols = g.cols();
    let mut seen = vec![false; g.rows() * cols];
    let mut queue = VecDeque::new();
    for (i, j) in loads {
        seen[i * cols + j] = true;
        queue.push_back((i, j));
    }
    while let Some((i, j)) = queue.pop_front() {
        if g.get(i, j) == Cell::Support {
            return Connectivity::Connected;
        }
        for &(di, dj) in &moves {
            let (ni, nj) = (i as isize + di, j as isize + dj);
            if !g.in_bounds(ni, nj) {
                continue;
            }
            let (ni, nj) = (ni as usize, nj as usize);
            if !seen[ni * cols + nj] && g.get(ni, nj).is_solid(threshold) {
                seen[ni * cols + nj] = true;
                queue.push_back((ni, nj));
            }
        }
    }
    Connectivity::Disconnected
}

/// Number of 4-connected groups of positive-density cells with no cell
/// 4-adjacent to a load or support.
pub fn isolated_clusters(g: &Grid) -> usize {
    let cols = g.cols();
    let solid = |i: usize, j: usize| matches!(g.get(i, j), Cell::Value(v) if v > 0.0);
    let mut seen = vec![false; g.rows() * cols];
    let mut count = 0;
    for ((i, j), _) in g.iter() {
        if seen[i * cols + j] || !solid(i, j) {
            continue;
        }
        seen[i * cols + j] = true;
        let mut stack = vec![(i, j)];
        let mut anchored = false;
        while let Some((ci, cj)) = stack.pop() {
            for (di, dj) in NEIGHBORS_4 {
                let (ni, nj) = (ci as isize + di, cj as isize + dj);
                if !g.in_bounds(ni, nj) {
                    continue;
                }
                let (ni, nj) = (ni as usize, nj as usize);
                if g.get(ni, nj).is_marker() {
                    anchored = true;
                } else if !seen[ni * cols + nj] && solid(ni, nj) {
                    seen[ni * cols + nj] = true;
                    stack.push((ni, nj));
                }
            }
        }
        if !anchored {
            count += 1;
        }
    }
    count
}
