//! Per-cell difficulty weights for masked cells.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::grid::{Cell, Grid};

use super::force_path::NEIGHBORS_8;

/// Assigns a weight in `1..=3` to a masked cell from its ground-truth context.
pub trait DifficultyStrategy {
    fn weight(&self, gt: &Grid, cell: (usize, usize)) -> u8;
}

/// Number of distinct categories (empty, solid, marker) among the in-bounds
/// 8-neighbors, clamped to `1..=3`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DistinctCategories;

impl DifficultyStrategy for DistinctCategories {
    fn weight(&self, gt: &Grid, (i, j): (usize, usize)) -> u8 {
        let mut kinds = BTreeSet::new();
        for (di, dj) in NEIGHBORS_8 {
            let (ni, nj) = (i as isize + di, j as isize + dj);
            if !gt.in_bounds(ni, nj) {
                continue;
            }
            kinds.insert(match gt.get(ni as usize, nj as usize) {
                Cell::Load | Cell::Support => 2u8,
                Cell::Value(v) if v > 0.0 => 1,
                _ => 0,
            });
        }
        kinds.len().clamp(1, 3) as u8
    }
}

/// Every masked cell weighs 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Uniform;

impl DifficultyStrategy for Uniform {
    fn weight(&self, _gt: &Grid, _cell: (usize, usize)) -> u8 {
        1
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DwcsStrategy {
    #[default]
    DistinctCategories,
    Uniform,
}

impl DwcsStrategy {
    pub fn strategy(self) -> &'static dyn DifficultyStrategy {
        match self {
            DwcsStrategy::DistinctCategories => &DistinctCategories,
            DwcsStrategy::Uniform => &Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DifficultyMap {
    pub weights: HashMap<(usize, usize), u8>,
}

impl DifficultyMap {
    /// Mean weight over the mask, `None` for an empty mask.
    pub fn dwcs(&self) -> Option<f64> {
        if self.weights.is_empty() {
            None
        } else {
            Some(self.weights.values().map(|&w| w as f64).sum::<f64>() / self.weights.len() as f64)
        }
    }
}

pub fn difficulty_map(
    gt: &Grid,
    mask: &[(usize, usize)],
    strategy: &dyn DifficultyStrategy,
) -> DifficultyMap {
    DifficultyMap {
        weights: mask.iter().map(|&p| (p, strategy.weight(gt, p))).collect(),
    }
}
