//! Cell-wise reconstruction scores against the ground truth.

use std::collections::HashMap;

use thiserror::Error;

use crate::grid::{Cell, Grid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("prediction is {pred:?}, ground truth is {gt:?}")]
    ShapeMismatch {
        pred: (usize, usize),
        gt: (usize, usize),
    },
}

// Densities are one-decimal values parsed from text; anything closer than
// this is the same literal.
const VALUE_EPS: f64 = 1e-9;

pub fn cells_equal(a: Cell, b: Cell) -> bool {
    match (a, b) {
        (Cell::Value(x), Cell::Value(y)) => (x - y).abs() < VALUE_EPS,
        _ => a == b,
    }
}

pub fn exact_match(pred: &Grid, gt: &Grid) -> bool {
    pred.shape() == gt.shape()
        && pred
            .cells()
            .iter()
            .zip(gt.cells())
            .all(|(&a, &b)| cells_equal(a, b))
}

/// Unweighted ratios. A ratio is `None` when the ground-truth mass is zero
/// and the prediction is not a perfect match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratios {
    pub diff: Option<f64>,
    pub rel: Option<f64>,
    pub pen: Option<f64>,
    pub zero_mass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedRatios {
    pub diff: Option<f64>,
    pub rel: Option<f64>,
    pub zero_mass: bool,
}

#[derive(Default)]
struct Tally {
    mass: f64,
    mismatches: f64,
    rel: f64,
    pen: f64,
}

fn tally(
    pred: &Grid,
    gt: &Grid,
    penalty_weight: f64,
    weight: impl Fn(usize, usize) -> f64,
) -> Result<Tally, MetricError> {
    if pred.shape() != gt.shape() {
        return Err(MetricError::ShapeMismatch {
            pred: pred.shape(),
            gt: gt.shape(),
        });
    }
    let mut t = Tally::default();
    for ((i, j), b) in gt.iter() {
        let a = pred.get(i, j);
        let w = weight(i, j);
        if let Cell::Value(v) = b {
            t.mass += w * v;
        }
        if cells_equal(a, b) {
            continue;
        }
        t.mismatches += w;
        match (a, b) {
            (Cell::Value(x), Cell::Value(y)) => {
                t.rel += w * (x - y).abs();
                t.pen += w * (x - y).abs();
            }
            _ => {
                t.rel += w;
                t.pen += w * penalty_weight;
            }
        }
    }
    Ok(t)
}

fn ratio(err: f64, mass: f64, perfect: bool) -> Option<f64> {
    if mass > 0.0 {
        Some(1.0 - err / mass)
    } else if perfect {
        Some(1.0)
    } else {
        None
    }
}

/// Difference, relative and penalized ratios: `1 - error / mass`, where mass
/// is the summed ground-truth density and markers carry no mass. Not clipped.
pub fn diff_ratios(pred: &Grid, gt: &Grid, penalty_weight: f64) -> Result<Ratios, MetricError> {
    let t = tally(pred, gt, penalty_weight, |_, _| 1.0)?;
    let perfect = t.mismatches == 0.0;
    Ok(Ratios {
        diff: ratio(t.mismatches, t.mass, perfect),
        rel: ratio(t.rel, t.mass, perfect),
        pen: ratio(t.pen, t.mass, perfect),
        zero_mass: t.mass <= 0.0,
    })
}

/// Difference and relative ratios with every masked cell's error and mass
/// scaled by its weight; other cells weigh 1.
pub fn weighted_ratios(
    pred: &Grid,
    gt: &Grid,
    weights: &HashMap<(usize, usize), u8>,
) -> Result<WeightedRatios, MetricError> {
    let t = tally(pred, gt, 1.0, |i, j| {
        weights.get(&(i, j)).map_or(1.0, |&w| w as f64)
    })?;
    let perfect = t.mismatches == 0.0;
    Ok(WeightedRatios {
        diff: ratio(t.mismatches, t.mass, perfect),
        rel: ratio(t.rel, t.mass, perfect),
        zero_mass: t.mass <= 0.0,
    })
}

/// Shape matches the ground truth and every cell is a marker or a density
/// in `[0, 1]`. Marker positions are not compared.
pub fn valid_grid(pred: &Grid, gt: &Grid) -> bool {
    pred.shape() == gt.shape()
        && pred.cells().iter().all(|c| match *c {
            Cell::Value(v) => (0.0..=1.0).contains(&v),
            Cell::Load | Cell::Support => true,
            Cell::Void => false,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Difficulty;
    use proptest::prelude::*;

    fn easy(text: &str) -> Grid {
        Grid::parse(text, Difficulty::Easy).unwrap()
    }

    fn loose(text: &str) -> Grid {
        Grid::parse_unchecked(text).unwrap()
    }

    const COLUMN: &str = "0 L 0\n0 1 0\n0 S 0";

    #[test]
    fn exact_match_fixtures() {
        assert!(exact_match(&easy(COLUMN), &easy(COLUMN)));
        assert!(!exact_match(&easy("1 L 0\n1 1 0\n0 S 0"), &easy(COLUMN)));
        assert!(exact_match(&easy("0"), &easy("0")));
        assert!(!exact_match(&easy("0 0"), &easy("0\n0")));
    }

    #[test]
    fn relative_ratio_fixtures() {
        let r = diff_ratios(&easy(COLUMN), &easy("0 L 0\n1 1 1\n0 S 0"), 3.0).unwrap();
        assert!((r.rel.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let gt = loose("0 L 0\n0.8 1 0.8\n0 S 0");
        let r = diff_ratios(&loose("0 L 0\n0.4 0.5 0.4\n0 S 0"), &gt, 3.0).unwrap();
        assert!((r.rel.unwrap() - 0.5).abs() < 1e-12);
        let r = diff_ratios(&loose("0 L 0\n0.4 2.0 0.4\n0 S 0"), &gt, 3.0).unwrap();
        assert!((r.rel.unwrap() - 0.8 / 2.6).abs() < 1e-12);
    }

    #[test]
    fn half_correct_difference_ratio() {
        let r = diff_ratios(&easy(COLUMN), &easy("0 L 0\n1 1 0\n0 S 0"), 3.0).unwrap();
        assert_eq!(r.diff, Some(0.5));
    }

    #[test]
    fn zero_mass() {
        let gt = easy("L 0\n0 S");
        let same = diff_ratios(&gt, &gt, 3.0).unwrap();
        assert_eq!(same.diff, Some(1.0));
        assert!(same.zero_mass);
        let off = diff_ratios(&easy("L 1\n0 S"), &gt, 3.0).unwrap();
        assert_eq!((off.diff, off.rel, off.pen), (None, None, None));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        assert!(diff_ratios(&easy("0 0"), &easy("0\n0"), 3.0).is_err());
    }

    #[test]
    fn validity_fixtures() {
        let gt = easy(COLUMN);
        assert!(valid_grid(&easy("0 L 0\n0 1 0\n0 S 0"), &gt));
        assert!(!valid_grid(&loose("0 L 0\n0 2 0\n0 S 0"), &gt));
        assert!(!valid_grid(&loose("0 L 0\n0 -1 0\n0 S 0"), &gt));
        assert!(!valid_grid(&easy("0 L 0\n0 V 0\n0 S 0"), &gt));
        assert!(!valid_grid(&easy("0 L\n0 1\n0 S"), &gt));
    }

    #[test]
    fn weighted_ratios_scale_masked_errors() {
        let gt = easy("0 L 0\n1 1 1\n0 S 0");
        let pred = easy("0 L 0\n1 0 1\n0 S 0");
        let w1 = HashMap::from([((1, 1), 1u8)]);
        let w3 = HashMap::from([((1, 1), 3u8)]);
        let a = weighted_ratios(&pred, &gt, &w1).unwrap();
        let plain = diff_ratios(&pred, &gt, 3.0).unwrap();
        assert_eq!((a.diff, a.rel), (plain.diff, plain.rel));
        let b = weighted_ratios(&pred, &gt, &w3).unwrap();
        assert!((a.diff.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((b.diff.unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(weighted_ratios(&gt, &gt, &w3).unwrap().diff, Some(1.0));
        assert_eq!(weighted_ratios(&gt, &gt, &w3).unwrap().rel, Some(1.0));
    }

    fn arb_easy(rows: usize, cols: usize) -> impl Strategy<Value = Grid> {
        proptest::collection::vec(
            prop_oneof![
                Just(Cell::Load),
                Just(Cell::Support),
                Just(Cell::Value(0.0)),
                Just(Cell::Value(1.0))
            ],
            rows * cols,
        )
        .prop_map(move |cells| Grid::new(rows, cols, cells).unwrap())
    }

    proptest! {
        #[test]
        fn self_comparison_is_perfect(g in arb_easy(4, 5)) {
            prop_assert!(exact_match(&g, &g));
            let r = diff_ratios(&g, &g, 3.0).unwrap();
            prop_assert_eq!((r.diff, r.rel, r.pen), (Some(1.0), Some(1.0), Some(1.0)));
        }

        #[test]
        fn another_mismatch_never_helps(gt in arb_easy(4, 5), pred in arb_easy(4, 5), idx in 0usize..20) {
            let before = diff_ratios(&pred, &gt, 3.0).unwrap();
            let (i, j) = (idx / 5, idx % 5);
            prop_assume!(cells_equal(pred.get(i, j), gt.get(i, j)));
            let mut worse = pred.clone();
            worse.set(i, j, match gt.get(i, j) {
                Cell::Value(v) => Cell::Value(1.0 - v),
                _ => Cell::Value(1.0),
            });
            let after = diff_ratios(&worse, &gt, 3.0).unwrap();
            if let (Some(a), Some(b)) = (after.diff, before.diff) {
                prop_assert!(a <= b);
            }
        }

        #[test]
        fn penalty_only_lowers_with_categorical_errors(gt in arb_easy(3, 4), pred in arb_easy(3, 4)) {
            let r = diff_ratios(&pred, &gt, 3.0).unwrap();
            let categorical = pred.cells().iter().zip(gt.cells()).any(|(a, b)| {
                !cells_equal(*a, *b) && !(matches!(a, Cell::Value(_)) && matches!(b, Cell::Value(_)))
            });
            if let (Some(pen), Some(rel)) = (r.pen, r.rel) {
                if categorical {
                    prop_assert!(pen < rel);
                } else {
                    prop_assert_eq!(pen, rel);
                }
            }
        }
    }
}
