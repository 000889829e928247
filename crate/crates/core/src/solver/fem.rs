//! Bilinear plane-stress elements on a unit-square lattice and a banded
//! Cholesky solve of the reduced equilibrium system.
//!
//! Node `(r, c)` has id `r * (nelx + 1) + c`; its dofs are `2 * id` (x, to
//! the right) and `2 * id + 1` (y, downward). Element `(r, c)` uses nodes
//! top-left, top-right, bottom-right, bottom-left in that order.

use super::SolverError;

pub type ElementMatrix = [[f64; 8]; 8];

/// Element stiffness for unit Young's modulus and Poisson ratio `nu`,
/// integrated with 2x2 Gauss quadrature.
pub fn element_stiffness(nu: f64) -> ElementMatrix {
    let d = {
        let s = 1.0 / (1.0 - nu * nu);
        [
            [s, s * nu, 0.0],
            [s * nu, s, 0.0],
            [0.0, 0.0, s * (1.0 - nu) / 2.0],
        ]
    };
    let corners = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
    let g = 1.0 / 3f64.sqrt();
    let mut ke = [[0.0; 8]; 8];
    for &(xi, eta) in &[(-g, -g), (g, -g), (g, g), (-g, g)] {
        // Unit element: x = (xi + 1) / 2, so d/dx = 2 d/dxi and det J = 1/4.
        let mut b = [[0.0; 8]; 3];
        for (n, &(xn, yn)) in corners.iter().enumerate() {
            let dx = 2.0 * 0.25 * xn * (1.0 + eta * yn);
            let dy = 2.0 * 0.25 * yn * (1.0 + xi * xn);
            b[0][2 * n] = dx;
            b[1][2 * n + 1] = dy;
            b[2][2 * n] = dy;
            b[2][2 * n + 1] = dx;
        }
        for i in 0..8 {
            for j in 0..8 {
                let mut s = 0.0;
                for p in 0..3 {
                    for q in 0..3 {
                        s += b[p][i] * d[p][q] * b[q][j];
                    }
                }
                ke[i][j] += s * 0.25;
            }
        }
    }
    ke
}

/// Load and support layout of one finite-element run.
#[derive(Debug, Clone)]
pub struct FeProblem {
    pub nelx: usize,
    pub nely: usize,
    pub young: f64,
    pub ke: ElementMatrix,
    fixed: Vec<bool>,
    force: Vec<f64>,
}

impl FeProblem {
    /// `loads` and `supports` are `(row, col)` element cells. Each load cell
    /// carries a unit downward force split over its two top nodes; each
    /// support cell clamps all four of its nodes.
    pub fn new(
        nely: usize,
        nelx: usize,
        loads: &[(usize, usize)],
        supports: &[(usize, usize)],
        young: f64,
        nu: f64,
    ) -> Result<Self, SolverError> {
        if loads.is_empty() {
            return Err(SolverError::NoLoads);
        }
        if supports.is_empty() {
            return Err(SolverError::NoSupports);
        }
        let ndof = 2 * (nelx + 1) * (nely + 1);
        let mut fixed = vec![false; ndof];
        let mut force = vec![0.0; ndof];
        for &(r, c) in loads {
            let nodes = element_nodes(nelx, r, c);
            force[2 * nodes[0] + 1] += 0.5;
            force[2 * nodes[1] + 1] += 0.5;
        }
        for &(r, c) in supports {
            for n in element_nodes(nelx, r, c) {
                fixed[2 * n] = true;
                fixed[2 * n + 1] = true;
            }
        }
        Ok(FeProblem {
            nelx,
            nely,
            young,
            ke: element_stiffness(nu),
            fixed,
            force,
        })
    }

    pub fn ndof(&self) -> usize {
        self.force.len()
    }

    pub fn force(&self) -> &[f64] {
        &self.force
    }

    pub fn is_fixed(&self, dof: usize) -> bool {
        self.fixed[dof]
    }

    pub fn element_dofs(&self, r: usize, c: usize) -> [usize; 8] {
        let n = element_nodes(self.nelx, r, c);
        [
            2 * n[0],
            2 * n[0] + 1,
            2 * n[1],
            2 * n[1] + 1,
            2 * n[2],
            2 * n[2] + 1,
            2 * n[3],
            2 * n[3] + 1,
        ]
    }

    /// Element strain energy term `u_e^T KE u_e` at unit modulus.
    pub fn element_energy(&self, u: &[f64], r: usize, c: usize) -> f64 {
        let dofs = self.element_dofs(r, c);
        let mut s = 0.0;
        for i in 0..8 {
            let mut row = 0.0;
            for j in 0..8 {
                row += self.ke[i][j] * u[dofs[j]];
            }
            s += u[dofs[i]] * row;
        }
        s
    }
}

fn element_nodes(nelx: usize, r: usize, c: usize) -> [usize; 4] {
    let w = nelx + 1;
    [
        r * w + c,
        r * w + c + 1,
        (r + 1) * w + c + 1,
        (r + 1) * w + c,
    ]
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub u: Vec<f64>,
    pub compliance: f64,
}

/// Assembles `K(x) = sum x_e^p E0 KE` and solves `K u = f` with fixed dofs
/// eliminated. `densities` is row-major over elements.
pub fn assemble_and_solve(
    problem: &FeProblem,
    densities: &[f64],
    penal: f64,
) -> Result<Solution, SolverError> {
    let (nelx, nely) = (problem.nelx, problem.nely);
    assert_eq!(
        densities.len(),
        nelx * nely,
        "density field does not match the mesh"
    );
    let ndof = problem.ndof();
    let bw = 2 * (nelx + 2) + 1;
    let mut band = Banded::new(ndof, bw);
    for r in 0..nely {
        for c in 0..nelx {
            let e = problem.young * densities[r * nelx + c].powf(penal);
            let dofs = problem.element_dofs(r, c);
            for i in 0..8 {
                for j in 0..8 {
                    if dofs[j] <= dofs[i] {
                        band.add(dofs[i], dofs[j], e * problem.ke[i][j]);
                    }
                }
            }
        }
    }
    let mut rhs = problem.force.clone();
    for dof in 0..ndof {
        if problem.fixed[dof] {
            band.isolate(dof);
            rhs[dof] = 0.0;
        }
    }
    band.cholesky()?;
    let u = band.solve(rhs);
    let compliance = u.iter().zip(&problem.force).map(|(a, b)| a * b).sum();
    Ok(Solution { u, compliance })
}

/// Lower band of a symmetric matrix: `data[i * (bw + 1) + (i - j)] = A[i][j]`.
struct Banded {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Banded {
    fn new(n: usize, bw: usize) -> Self {
        Banded {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (i - j)
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    fn isolate(&mut self, dof: usize) {
        for j in dof.saturating_sub(self.bw)..dof {
            let k = self.idx(dof, j);
            self.data[k] = 0.0;
        }
        for i in dof + 1..(dof + self.bw + 1).min(self.n) {
            let k = self.idx(i, dof);
            self.data[k] = 0.0;
        }
        let k = self.idx(dof, dof);
        self.data[k] = 1.0;
    }

    fn cholesky(&mut self) -> Result<(), SolverError> {
        let max_diag = (0..self.n)
            .map(|i| self.data[self.idx(i, i)])
            .fold(0.0_f64, f64::max);
        let tol = 1e-12 * max_diag.max(1.0);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            for j in lo..=i {
                let mut s = self.data[self.idx(i, j)];
                for k in lo.max(j.saturating_sub(self.bw))..j {
                    s -= self.data[self.idx(i, k)] * self.data[self.idx(j, k)];
                }
                if i == j {
                    if !(s > tol) {
                        return Err(SolverError::SingularSystem);
                    }
                    let k = self.idx(i, i);
                    self.data[k] = s.sqrt();
                } else {
                    let k = self.idx(i, j);
                    self.data[k] = s / self.data[self.idx(j, j)];
                }
            }
        }
        Ok(())
    }

    fn solve(&self, mut b: Vec<f64>) -> Vec<f64> {
        for i in 0..self.n {
            let mut s = b[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= self.data[self.idx(i, k)] * b[k];
            }
            b[i] = s / self.data[self.idx(i, i)];
        }
        for i in (0..self.n).rev() {
            let mut s = b[i];
            for k in i + 1..(i + self.bw + 1).min(self.n) {
                s -= self.data[self.idx(k, i)] * b[k];
            }
            b[i] = s / self.data[self.idx(i, i)];
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Closed-form Q4 plane-stress stiffness for a unit square.
    fn closed_form(nu: f64) -> ElementMatrix {
        let k = [
            0.5 - nu / 6.0,
            0.125 + nu / 8.0,
            -0.25 - nu / 12.0,
            -0.125 + 3.0 * nu / 8.0,
            -0.25 + nu / 12.0,
            -0.125 - nu / 8.0,
            nu / 6.0,
            0.125 - 3.0 * nu / 8.0,
        ];
        let idx = [
            [0, 1, 2, 3, 4, 5, 6, 7],
            [1, 0, 7, 6, 5, 4, 3, 2],
            [2, 7, 0, 5, 6, 3, 4, 1],
            [3, 6, 5, 0, 7, 2, 1, 4],
            [4, 5, 6, 7, 0, 1, 2, 3],
            [5, 4, 3, 2, 1, 0, 7, 6],
            [6, 3, 4, 1, 2, 7, 0, 5],
            [7, 2, 1, 4, 3, 6, 5, 0],
        ];
        let s = 1.0 / (1.0 - nu * nu);
        let mut out = [[0.0; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                out[i][j] = s * k[idx[i][j]];
            }
        }
        out
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for nu in [0.0, 0.3, 0.45] {
            let a = element_stiffness(nu);
            let b = closed_form(nu);
            for i in 0..8 {
                for j in 0..8 {
                    assert!((a[i][j] - b[i][j]).abs() < 1e-12, "nu={nu} ({i},{j})");
                    assert!((a[i][j] - a[j][i]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rigid_body_modes_are_in_the_null_space() {
        let ke = element_stiffness(0.3);
        let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let tx: Vec<f64> = (0..8).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let ty: Vec<f64> = (0..8).map(|i| if i % 2 == 1 { 1.0 } else { 0.0 }).collect();
        let rot: Vec<f64> = corners.iter().flat_map(|&(x, y)| [-y, x]).collect();
        for mode in [tx, ty, rot] {
            for row in &ke {
                let f: f64 = row.iter().zip(&mode).map(|(a, b)| a * b).sum();
                assert!(f.abs() < 1e-12);
            }
        }
    }

    fn column_problem() -> FeProblem {
        let supports: Vec<_> = (0..10).map(|c| (9, c)).collect();
        FeProblem::new(10, 10, &[(0, 4), (0, 5)], &supports, 1.0, 0.3).unwrap()
    }

    #[test]
    fn full_density_compliance_is_positive_and_finite() {
        let p = column_problem();
        let sol = assemble_and_solve(&p, &vec![1.0; 100], 3.0).unwrap();
        assert!(sol.compliance > 0.0 && sol.compliance.is_finite());
    }

    #[test]
    fn solution_satisfies_equilibrium() {
        let p = column_problem();
        let x: Vec<f64> = (0..100)
            .map(|i| 0.2 + 0.7 * ((i * 37 % 11) as f64 / 10.0))
            .collect();
        let sol = assemble_and_solve(&p, &x, 3.0).unwrap();
        let mut ku = vec![0.0; p.ndof()];
        for r in 0..10 {
            for c in 0..10 {
                let e = x[r * 10 + c].powf(3.0);
                let dofs = p.element_dofs(r, c);
                for i in 0..8 {
                    for j in 0..8 {
                        ku[dofs[i]] += e * p.ke[i][j] * sol.u[dofs[j]];
                    }
                }
            }
        }
        for dof in 0..p.ndof() {
            if p.is_fixed(dof) {
                assert_eq!(sol.u[dof], 0.0);
            } else {
                assert!((ku[dof] - p.force()[dof]).abs() < 1e-9, "dof {dof}");
            }
        }
    }

    #[test]
    fn doubling_stiffness_halves_compliance() {
        let mut p = column_problem();
        let x = vec![0.5; 100];
        let c1 = assemble_and_solve(&p, &x, 3.0).unwrap().compliance;
        p.young = 2.0;
        let c2 = assemble_and_solve(&p, &x, 3.0).unwrap().compliance;
        assert!((c1 / c2 - 2.0).abs() < 1e-9 * 2.0);
    }

    #[test]
    fn mirror_problem_gives_mirror_displacements() {
        let supports: Vec<_> = (1..9).map(|c| (9, c)).collect();
        let p = FeProblem::new(
            10,
            10,
            &[(0, 3), (0, 4), (0, 5), (0, 6)],
            &supports,
            1.0,
            0.3,
        )
        .unwrap();
        let sol = assemble_and_solve(&p, &vec![0.4; 100], 3.0).unwrap();
        for r in 0..=10 {
            for c in 0..=10 {
                let a = r * 11 + c;
                let b = r * 11 + (10 - c);
                assert!((sol.u[2 * a] + sol.u[2 * b]).abs() < 1e-8);
                assert!((sol.u[2 * a + 1] - sol.u[2 * b + 1]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn unsupported_problem_is_singular() {
        // A support clamping one element cannot stop a detached far block from
        // moving when the mesh is split by zero-stiffness elements.
        let p = FeProblem::new(1, 3, &[(0, 2)], &[(0, 0)], 1.0, 0.3).unwrap();
        let x = [1.0, 0.0, 1.0];
        assert!(matches!(
            assemble_and_solve(&p, &x, 3.0),
            Err(SolverError::SingularSystem)
        ));
    }
}
