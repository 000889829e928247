//! Optimality-criteria density update.

use super::SolverError;

#[derive(Debug, Clone, Copy)]
pub struct OcParams {
    pub move_limit: f64,
    pub min_density: f64,
}

/// Bisection precision on the mean density.
pub const VOLUME_TOL: f64 = 1e-9;

/// One OC step: `x_e * sqrt(-dc_e / lambda)` clamped to the move limit and
/// to `[min_density, 1]`, with `lambda` bisected so the mean hits `target`.
pub fn oc_update(
    x: &[f64],
    dc: &[f64],
    target: f64,
    params: OcParams,
) -> Result<Vec<f64>, SolverError> {
    assert_eq!(x.len(), dc.len());
    let n = x.len() as f64;
    let lower: Vec<f64> = x
        .iter()
        .map(|&v| (v - params.move_limit).max(params.min_density))
        .collect();
    let upper: Vec<f64> = x
        .iter()
        .map(|&v| (v + params.move_limit).min(1.0))
        .collect();
    let (lo_mean, hi_mean) = (lower.iter().sum::<f64>() / n, upper.iter().sum::<f64>() / n);
    if target < lo_mean - VOLUME_TOL || target > hi_mean + VOLUME_TOL {
        return Err(SolverError::BisectionFailure {
            target,
            reachable: (lo_mean, hi_mean),
        });
    }

    let step = |log_lambda: f64| -> Vec<f64> {
        let lambda = log_lambda.exp();
        x.iter()
            .zip(dc)
            .enumerate()
            .map(|(e, (&v, &d))| (v * ((-d).max(0.0) / lambda).sqrt()).clamp(lower[e], upper[e]))
            .collect()
    };
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;

    // Mean density is non-increasing in lambda; bisect in log space.
    let (mut lo, mut hi) = (-700.0_f64, 700.0_f64);
    let mut best = step(0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        best = step(mid);
        let m = mean(&best);
        if (m - target).abs() <= VOLUME_TOL {
            return Ok(best);
        }
        if m > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let m = mean(&best);
    if (m - target).abs() <= 1e-4 {
        Ok(best)
    } else {
        Err(SolverError::BisectionFailure {
            target,
            reachable: (lo_mean, hi_mean),
        })
    }
}
