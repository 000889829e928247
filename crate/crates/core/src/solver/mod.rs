//! Density-based minimum-compliance topology optimization (SIMP) used to
//! regenerate ground-truth material layouts.

pub mod fem;
pub mod filter;
pub mod oc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Cell, Grid};
use crate::scenario::Scenario;

pub use fem::{assemble_and_solve, element_stiffness, FeProblem, Solution};
pub use filter::{filter_radius, sensitivity_filter};
pub use oc::{oc_update, OcParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("stiffness matrix is singular; supports do not restrain the structure")]
    SingularSystem,
    #[error("no lambda reaches volume fraction {target}; reachable range {reachable:?}")]
    BisectionFailure { target: f64, reachable: (f64, f64) },
    #[error("problem has no load cells")]
    NoLoads,
    #[error("problem has no support cells")]
    NoSupports,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub target_density: f64,
    pub penalization: f64,
    pub iterations: usize,
    /// Filter radius as a fraction of the longer mesh side (minimum one cell).
    pub smoothing: f64,
    pub min_density: f64,
    pub delete_threshold: f64,
    /// Body-force weight. Only zero is supported.
    pub self_weight: f64,
    pub move_limit: f64,
    pub young: f64,
    pub poisson: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            target_density: 0.1,
            penalization: 3.0,
            iterations: 10,
            smoothing: 0.1,
            min_density: 0.001,
            delete_threshold: 0.5,
            self_weight: 0.0,
            move_limit: 0.2,
            young: 1.0,
            poisson: 0.3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: &str| Err(SolverError::InvalidConfig(m.to_string()));
        if !(self.target_density > 0.0 && self.target_density <= 1.0) {
            return bad("target_density must be in (0, 1]");
        }
        if !(self.penalization >= 1.0) {
            return bad("penalization must be at least 1");
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1");
        }
        if !(self.min_density > 0.0 && self.min_density < self.delete_threshold) {
            return bad("min_density must be in (0, delete_threshold)");
        }
        if self.delete_threshold > 1.0 {
            return bad("delete_threshold must not exceed 1");
        }
        if self.target_density < self.min_density {
            return bad("target_density must not be below min_density");
        }
        if self.self_weight != 0.0 {
            return bad("self_weight other than 0 is not supported");
        }
        if !(self.move_limit > 0.0) || !(self.young > 0.0) || !(self.smoothing >= 0.0) {
            return bad("move_limit and young must be positive, smoothing non-negative");
        }
        if !(self.poisson > -1.0 && self.poisson < 0.5) {
            return bad("poisson must be in (-1, 0.5)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Optimized {
    /// One-decimal densities with L/S re-inscribed.
    pub hard: Grid,
    /// `hard` binarized at the delete threshold.
    pub easy: Grid,
    /// Final element densities, row-major. Marker elements are passive and
    /// stay at 1.
    pub densities: Vec<f64>,
    /// Mean density over the design (non-marker) elements.
    pub volume: f64,
    /// Compliance of the initial field followed by one entry per iteration.
    pub compliance: Vec<f64>,
}

/// Runs `cfg.iterations` SIMP iterations on the scenario's unrotated frame
/// and returns grids rotated into the scenario's frame.
pub fn optimize(scenario: &Scenario, cfg: &SolverConfig) -> Result<Optimized, SolverError> {
    cfg.validate()?;
    let (nely, nelx) = (scenario.rows, scenario.cols);
    let loads = scenario.load_cells();
    let supports = scenario.support_cells();
    let problem = FeProblem::new(nely, nelx, &loads, &supports, cfg.young, cfg.poisson)?;
    let radius = filter_radius(cfg.smoothing, nelx, nely);
    let params = OcParams {
        move_limit: cfg.move_limit,
        min_density: cfg.min_density,
    };

    let mut passive = vec![false; nelx * nely];
    for &(r, c) in loads.iter().chain(&supports) {
        passive[r * nelx + c] = true;
    }
    let design: Vec<usize> = (0..nelx * nely).filter(|&e| !passive[e]).collect();
    if design.is_empty() {
        return Err(SolverError::InvalidConfig(
            "no design elements outside the markers".into(),
        ));
    }
    let mut x: Vec<f64> = passive
        .iter()
        .map(|&p| if p { 1.0 } else { cfg.target_density })
        .collect();
    let mut sol = assemble_and_solve(&problem, &x, cfg.penalization)?;
    let mut history = vec![sol.compliance];

    for _ in 0..cfg.iterations {
        let dc: Vec<f64> = (0..nelx * nely)
            .map(|e| {
                let (r, c) = (e / nelx, e % nelx);
                -cfg.penalization
                    * x[e].powf(cfg.penalization - 1.0)
                    * cfg.young
                    * problem.element_energy(&sol.u, r, c)
            })
            .collect();
        let weights: Vec<f64> = x
            .iter()
            .zip(&passive)
            .map(|(&v, &p)| if p { 0.0 } else { v })
            .collect();
        let dc = sensitivity_filter(nelx, nely, &weights, &dc, radius);
        let xd: Vec<f64> = design.iter().map(|&e| x[e]).collect();
        let dcd: Vec<f64> = design.iter().map(|&e| dc[e]).collect();
        let mut candidate = x.clone();
        for (&e, v) in design
            .iter()
            .zip(oc_update(&xd, &dcd, cfg.target_density, params)?)
        {
            candidate[e] = v;
        }
        (x, sol) = accept_monotone(&problem, cfg.penalization, x, sol, candidate)?;
        history.push(sol.compliance);
    }

    let mut hard = Grid::filled(nely, nelx, Cell::Value(0.0));
    for (e, &v) in x.iter().enumerate() {
        hard.set(e / nelx, e % nelx, Cell::Value(round_one_decimal(v)));
    }
    for (r, c) in loads {
        hard.set(r, c, Cell::Load);
    }
    for (r, c) in supports {
        hard.set(r, c, Cell::Support);
    }
    let easy = hard
        .binarize(cfg.delete_threshold)
        .expect("solver grids hold no V cells");
    let k = scenario.rotation;
    let volume = design.iter().map(|&e| x[e]).sum::<f64>() / design.len() as f64;
    Ok(Optimized {
        volume,
        hard: hard.rotate90(k).expect("scenario rotation validated"),
        easy: easy.rotate90(k).expect("scenario rotation validated"),
        densities: x,
        compliance: history,
    })
}

/// Takes the OC candidate if it does not raise compliance, otherwise
/// backtracks along the segment towards the current iterate. Every point on
/// that segment keeps the volume, bounds and move limit of the endpoints.
fn accept_monotone(
    problem: &FeProblem,
    penal: f64,
    x: Vec<f64>,
    sol: Solution,
    candidate: Vec<f64>,
) -> Result<(Vec<f64>, Solution), SolverError> {
    let mut alpha = 1.0;
    for _ in 0..30 {
        let trial: Vec<f64> = x
            .iter()
            .zip(&candidate)
            .map(|(a, b)| a + alpha * (b - a))
            .collect();
        let trial_sol = assemble_and_solve(problem, &trial, penal)?;
        if trial_sol.compliance <= sol.compliance {
            return Ok((trial, trial_sol));
        }
        alpha *= 0.5;
    }
    Ok((x, sol))
}

/// Rounds half away from zero to one decimal.
pub fn round_one_decimal(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}
