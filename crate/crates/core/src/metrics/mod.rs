//! Reconstruction, topology, difficulty and force-path metrics.

pub mod difficulty;
pub mod force_path;
pub mod reconstruction;
pub mod topology;

use serde::{Deserialize, Serialize};

use crate::exec::Execution;
use crate::task::{Completion, TaskInstance};

pub use difficulty::{
    difficulty_map, DifficultyMap, DifficultyStrategy, DistinctCategories, DwcsStrategy,
};
pub use force_path::{force_path_cost, fpceff, ForcePathConfig, PathCosts};
pub use reconstruction::{
    diff_ratios, exact_match, valid_grid, weighted_ratios, MetricError, Ratios, WeightedRatios,
};
pub use topology::{isolated_clusters, ls_connectivity, Connectivity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    /// Multiplier for L/S/V mismatches in the penalized ratio.
    pub penalty_weight: f64,
    /// Path cost assigned to a load that cannot reach a support.
    pub cmax: f64,
    pub clip_fpceff: bool,
    /// Densities above this count as solid for connectivity.
    pub connectivity_solid_threshold: f64,
    pub dwcs_strategy: DwcsStrategy,
    pub force_path: ForcePathConfig,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            penalty_weight: 3.0,
            cmax: 1e6,
            clip_fpceff: true,
            connectivity_solid_threshold: 0.0,
            dwcs_strategy: DwcsStrategy::default(),
            force_path: ForcePathConfig::default(),
        }
    }
}

/// Per-instance scores. Everything except `exact_match`, `valid_grid` and
/// `dwcs` is `None` when the completion is not a valid grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricReport {
    pub exact_match: bool,
    pub diff_ratio: Option<f64>,
    pub rel_diff_ratio: Option<f64>,
    pub pen_diff_ratio: Option<f64>,
    pub dwcs: Option<f64>,
    pub dw_diff_ratio: Option<f64>,
    pub dw_rel_diff_ratio: Option<f64>,
    pub valid_grid: bool,
    pub ls_conn: Option<bool>,
    pub dir_ls_conn: Option<bool>,
    pub islands: Option<usize>,
    pub fpceff: Option<f64>,
    pub path_cost_gt: Option<f64>,
    pub path_cost_pred: Option<f64>,
    /// Tags for degenerate cases, e.g. `zero_mass` or `parse_failure`.
    pub flags: Vec<String>,
}

pub fn evaluate(
    instance: &TaskInstance,
    completion: &Completion,
    cfg: &MetricConfig,
) -> MetricReport {
    let gt = &instance.ground_truth;
    let map = difficulty_map(gt, &instance.mask, cfg.dwcs_strategy.strategy());
    let mut report = MetricReport {
        dwcs: map.dwcs(),
        ..MetricReport::default()
    };
    if report.dwcs.is_none() {
        report.flags.push("empty_mask".into());
    }
    let pred = match completion {
        Completion::Parsed(g) if valid_grid(g, gt) => g,
        Completion::Parsed(_) => {
            report.flags.push("invalid_grid".into());
            return report;
        }
        Completion::ParseFailure(_) => {
            report.flags.push("parse_failure".into());
            return report;
        }
    };
    report.valid_grid = true;
    report.exact_match = exact_match(pred, gt);

    let ratios = diff_ratios(pred, gt, cfg.penalty_weight).expect("shape checked by valid_grid");
    let weighted = weighted_ratios(pred, gt, &map.weights).expect("shape checked by valid_grid");
    if ratios.zero_mass {
        report.flags.push("zero_mass".into());
    }
    report.diff_ratio = ratios.diff;
    report.rel_diff_ratio = ratios.rel;
    report.pen_diff_ratio = ratios.pen;
    report.dw_diff_ratio = weighted.diff;
    report.dw_rel_diff_ratio = weighted.rel;

    let g = instance.gravity;
    let t = cfg.connectivity_solid_threshold;
    let conn = ls_connectivity(pred, false, g, t);
    match conn {
        Connectivity::NoLoads => report.flags.push("pred_no_loads".into()),
        Connectivity::NoSupports => report.flags.push("pred_no_supports".into()),
        _ => {}
    }
    report.ls_conn = Some(conn.is_connected());
    report.dir_ls_conn = Some(ls_connectivity(pred, true, g, t).is_connected());
    report.islands = Some(isolated_clusters(pred));

    let fp = &cfg.force_path;
    report.path_cost_gt = force_path_cost(gt, g, fp, cfg.cmax).mean;
    report.path_cost_pred = force_path_cost(pred, g, fp, cfg.cmax).mean;
    report.fpceff = fpceff(pred, gt, g, fp, cfg.cmax, cfg.clip_fpceff);
    if report.fpceff.is_none() {
        report.flags.push("gt_no_loads".into());
    }
    report
}

/// `evaluate` over paired slices; output order matches input order.
pub fn evaluate_batch(
    instances: &[TaskInstance],
    completions: &[Completion],
    cfg: &MetricConfig,
    exec: Execution,
) -> Vec<MetricReport> {
    assert_eq!(
        instances.len(),
        completions.len(),
        "one completion per instance"
    );
    exec.map(instances, |i, inst| evaluate(inst, &completions[i], cfg))
}
