//! Sensitivity smoothing over the element lattice.

/// Filter radius in cells for a `smoothing` fraction of the longer mesh side.
/// Non-positive smoothing disables the filter.
pub fn filter_radius(smoothing: f64, nelx: usize, nely: usize) -> f64 {
    if smoothing <= 0.0 {
        0.0
    } else {
        (smoothing * nelx.max(nely) as f64).max(1.0)
    }
}

/// Density-weighted neighborhood average of `dc`.
///
/// Element `k` contributes to element `e` with weight
/// `max(0, radius + 0.5 - dist(e, k)) * x[k]`, so radius 0 keeps only the
/// element itself and radius 1 matches the usual `rmin = 1.5` stencil. The
/// output is always a convex combination of inputs; elements with zero
/// weight in `x` are left out of every neighborhood.
pub fn sensitivity_filter(
    nelx: usize,
    nely: usize,
    x: &[f64],
    dc: &[f64],
    radius: f64,
) -> Vec<f64> {
    assert_eq!(x.len(), nelx * nely);
    assert_eq!(dc.len(), nelx * nely);
    if radius <= 0.0 {
        return dc.to_vec();
    }
    let reach = radius.floor() as isize + 1;
    let mut out = vec![0.0; dc.len()];
    for r in 0..nely as isize {
        for c in 0..nelx as isize {
            let (mut num, mut den) = (0.0, 0.0);
            for dr in -reach..=reach {
                for dcol in -reach..=reach {
                    let (rr, cc) = (r + dr, c + dcol);
                    if rr < 0 || cc < 0 || rr >= nely as isize || cc >= nelx as isize {
                        continue;
                    }
                    let dist = ((dr * dr + dcol * dcol) as f64).sqrt();
                    let h = radius + 0.5 - dist;
                    if h <= 0.0 {
                        continue;
                    }
                    let k = rr as usize * nelx + cc as usize;
                    num += h * x[k] * dc[k];
                    den += h * x[k];
                }
            }
            let e = r as usize * nelx + c as usize;
            out[e] = if den > 0.0 { num / den } else { dc[e] };
        }
    }
    out
}
