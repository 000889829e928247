//! Gravity-aligned load-path cost over solid cells.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::grid::{Cell, GravityVector, Grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForcePathConfig {
    /// Upper bounds in degrees of the first three angle buckets.
    pub angle_thresholds: [f64; 3],
    /// Step weights for the four buckets, the last one open-ended.
    pub angle_costs: [f64; 4],
    /// Moves whose normalized dot product with gravity falls below this are forbidden.
    pub upward_dot_cutoff: f64,
    pub depth_coeff: f64,
}

impl Default for ForcePathConfig {
    fn default() -> Self {
        ForcePathConfig {
            angle_thresholds: [15.0, 45.0, 100.0],
            angle_costs: [1.0, 1.2, 1.5, 3.0],
            upward_dot_cutoff: -0.5,
            depth_coeff: 0.05,
        }
    }
}

// Absorbs acos rounding so that exactly 45 degrees lands in the higher bucket.
const ANGLE_EPS: f64 = 1e-9;

pub const NEIGHBORS_8: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

impl ForcePathConfig {
    /// Angular weight of a unit step `d`, or `None` when the step runs against gravity.
    pub fn step_weight(&self, d: (isize, isize), gravity: GravityVector) -> Option<f64> {
        let (dr, dc) = (d.0 as f64, d.1 as f64);
        let norm = (dr * dr + dc * dc).sqrt();
        let cos = (dr * gravity.dr() as f64 + dc * gravity.dc() as f64) / norm;
        if cos < self.upward_dot_cutoff {
            return None;
        }
        let angle = cos.clamp(-1.0, 1.0).acos().to_degrees();
        let bucket = self
            .angle_thresholds
            .iter()
            .position(|&t| angle + ANGLE_EPS < t)
            .unwrap_or(3);
        Some(self.angle_costs[bucket])
    }

    /// Full edge cost of stepping onto `to` for a path that started at `load`.
    pub fn edge_cost(
        &self,
        load: (usize, usize),
        from: (usize, usize),
        to: (usize, usize),
        gravity: GravityVector,
    ) -> Option<f64> {
        let d = (
            to.0 as isize - from.0 as isize,
            to.1 as isize - from.1 as isize,
        );
        let w = self.step_weight(d, gravity)?;
        let depth = (to.0 as isize - load.0 as isize) * gravity.dr() as isize
            + (to.1 as isize - load.1 as isize) * gravity.dc() as isize;
        Some(w * (1.0 + self.depth_coeff * depth.unsigned_abs() as f64))
    }
}

/// Solid for path purposes: markers and any positive density.
pub fn is_path_node(cell: Cell) -> bool {
    match cell {
        Cell::Load | Cell::Support => true,
        Cell::Value(v) => v > 0.0,
        Cell::Void => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathCosts {
    /// Minimal cost per load cell in row-major order; `cmax` if unsupported.
    pub per_load: Vec<f64>,
    /// Mean of `per_load`; `None` when the grid has no loads.
    pub mean: Option<f64>,
}

#[derive(PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimal cost from `load` to any support, or `None` if no support is reachable.
pub fn load_path_cost(
    g: &Grid,
    load: (usize, usize),
    gravity: GravityVector,
    cfg: &ForcePathConfig,
) -> Option<f64> {
    let cols = g.cols();
    let mut dist = vec![f64::INFINITY; g.rows() * cols];
    let start = load.0 * cols + load.1;
    dist[start] = 0.0;
    let mut heap = BinaryHeap::from([Entry {
        cost: 0.0,
        node: start,
    }]);
    while let Some(Entry { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        let here = (node / cols, node % cols);
        if node != start && g.get(here.0, here.1) == Cell::Support {
            return Some(cost);
        }
        for d in NEIGHBORS_8 {
            let (ni, nj) = (here.0 as isize + d.0, here.1 as isize + d.1);
            if !g.in_bounds(ni, nj) {
                continue;
            }
            let next = (ni as usize, nj as usize);
            if !is_path_node(g.get(next.0, next.1)) {
                continue;
            }
            let Some(w) = cfg.edge_cost(load, here, next, gravity) else {
                continue;
            };
            let cand = cost + w;
            let idx = next.0 * cols + next.1;
            if cand < dist[idx] {
                dist[idx] = cand;
                heap.push(Entry {
                    cost: cand,
                    node: idx,
                });
            }
        }
    }
    None
}

/// Per-load Dijkstra costs and their mean, with `cmax` for unsupported loads.
pub fn force_path_cost(
    g: &Grid,
    gravity: GravityVector,
    cfg: &ForcePathConfig,
    cmax: f64,
) -> PathCosts {
    let per_load: Vec<f64> = g
        .loads()
        .into_iter()
        .map(|l| load_path_cost(g, l, gravity, cfg).unwrap_or(cmax))
        .collect();
    let mean = if per_load.is_empty() {
        None
    } else {
        Some(per_load.iter().sum::<f64>() / per_load.len() as f64)
    };
    PathCosts { per_load, mean }
}

/// `C(gt) / C(pred)`, clipped to `[0, 1]` when `clip` is set. `None` if the
/// ground truth has no loads. A prediction without loads counts as `cmax`.
pub fn fpceff(
    pred: &Grid,
    gt: &Grid,
    gravity: GravityVector,
    cfg: &ForcePathConfig,
    cmax: f64,
    clip: bool,
) -> Option<f64> {
    let c_gt = force_path_cost(gt, gravity, cfg, cmax).mean?;
    let c_pred = force_path_cost(pred, gravity, cfg, cmax)
        .mean
        .unwrap_or(cmax);
    let ratio = c_gt / c_pred;
    Some(if clip { ratio.clamp(0.0, 1.0) } else { ratio })
}
