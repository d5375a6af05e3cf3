//! Preconditioned conjugate gradients for the symmetrized DEC systems.

use crate::error::{DecError, Result};
use crate::sparse::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Jacobi,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Stop once `‖Mx - b‖₂ ≤ tolerance · ‖b‖₂`.
    pub tolerance: f64,
    /// Defaults to `50·√n + 1000` when unset.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
    /// Remove the constant nullspace: `b` is projected so that `1ᵀb = 0`
    /// along `S·1`, and the solution is shifted to zero `S`-weighted mean.
    pub deflate_constants: bool,
    /// Diagonal of `S`; all ones when absent.
    pub constant_weights: Option<Vec<f64>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: None,
            preconditioner: Preconditioner::Jacobi,
            deflate_constants: false,
            constant_weights: None,
        }
    }
}

impl SolverConfig {
    pub fn max_iterations_for(&self, n: usize) -> usize {
        self.max_iterations
            .unwrap_or_else(|| (50.0 * (n as f64).sqrt()) as usize + 1000)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub x: Vec<f64>,
    /// Final true relative residual `‖Mx - b‖ / ‖b‖`.
    pub residual: f64,
    pub iterations: usize,
    /// Energy `½xᵀMx - bᵀx` after each iteration, starting from `x = 0`.
    pub energy: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn deflate_rhs(b: &mut [f64], w: &[f64]) {
    let shift = b.iter().sum::<f64>() / w.iter().sum::<f64>();
    b.iter_mut().zip(w).for_each(|(bi, wi)| *bi -= shift * wi);
}

fn deflate_solution(x: &mut [f64], w: &[f64]) {
    let mean = dot(w, x) / w.iter().sum::<f64>();
    x.iter_mut().for_each(|xi| *xi -= mean);
}

/// `out = b - Mx` with each row accumulated in compensated arithmetic,
/// so the result is accurate even when it is tiny next to `|M||x|`.
fn true_residual(m: &SparseMatrix, x: &[f64], b: &[f64], out: &mut [f64]) {
    let (offsets, cols, vals) = (m.row_offsets(), m.col_indices(), m.values());
    for (i, o) in out.iter_mut().enumerate() {
        let (mut sum, mut comp) = (b[i], 0.0);
        for j in offsets[i]..offsets[i + 1] {
            let prod = -vals[j] * x[cols[j]];
            let prod_err = (-vals[j]).mul_add(x[cols[j]], -prod);
            let t = sum + prod;
            let err = if sum.abs() >= prod.abs() { (sum - t) + prod } else { (prod - t) + sum };
            sum = t;
            comp += err + prod_err;
        }
        *o = sum + comp;
    }
}

/// Solve `M x = b` for symmetric positive (semi)definite `M`.
pub fn cg_solve(m: &SparseMatrix, b: &[f64], cfg: &SolverConfig) -> Result<SolveOutcome> {
    let n = m.rows();
    if m.cols() != n || b.len() != n {
        return Err(DecError::ShapeMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    let asym = m.asymmetry();
    if asym > 1e-12 {
        return Err(DecError::Asymmetric(asym));
    }

    let weights: Vec<f64> = match (&cfg.constant_weights, cfg.deflate_constants) {
        (Some(w), _) if w.len() != n => {
            return Err(DecError::ShapeMismatch("deflation weights length".into()))
        }
        (Some(w), _) => w.clone(),
        (None, _) => vec![1.0; n],
    };
    let mut rhs = b.to_vec();
    if cfg.deflate_constants {
        deflate_rhs(&mut rhs, &weights);
    }

    let bnorm = norm(&rhs);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(SolveOutcome {
            x,
            residual: 0.0,
            iterations: 0,
            energy: Vec::new(),
        });
    }

    let inv_diag: Vec<f64> = match cfg.preconditioner {
        Preconditioner::None => vec![1.0; n],
        Preconditioner::Jacobi => m.diag().iter().map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 }).collect(),
    };
    let max_it = cfg.max_iterations_for(n);
    let target = cfg.tolerance * bnorm;

    let mut r = rhs.clone();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut mp = vec![0.0; n];
    let mut energy = Vec::new();
    let mut best = f64::INFINITY;
    let mut iterations = 0;

    while iterations < max_it {
        m.spmv_into(&p, &mut mp);
        let curvature = dot(&p, &mp);
        if curvature <= 0.0 {
            break;
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        iterations += 1;
        energy.push(-0.5 * x.iter().zip(rhs.iter().zip(&r)).map(|(xi, (bi, ri))| xi * (bi + ri)).sum::<f64>());

        let restart = norm(&r) <= target;
        if restart {
            // the recursive residual drifts from b - Mx; replace it and
            // restart from the steepest-descent direction
            true_residual(m, &x, &rhs, &mut r);
            let rnorm = norm(&r);
            best = best.min(rnorm / bnorm);
            if rnorm <= target {
                break;
            }
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = if restart { 0.0 } else { rz_new / rz };
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    if cfg.deflate_constants {
        deflate_solution(&mut x, &weights);
    }
    true_residual(m, &x, &rhs, &mut r);
    let residual = norm(&r) / bnorm;
    if residual > cfg.tolerance {
        return Err(DecError::NoConvergence {
            iterations,
            residual: best.min(residual),
        });
    }
    Ok(SolveOutcome {
        x,
        residual,
        iterations,
        energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_converges_in_one_step() {
        let b = vec![1.0, -2.0, 3.5];
        let out = cg_solve(&SparseMatrix::identity(3), &b, &SolverConfig::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.x, b);
    }

    #[test]
    fn two_by_two() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 2.0)]).unwrap();
        let cfg = SolverConfig {
            preconditioner: Preconditioner::None,
            ..Default::default()
        };
        let out = cg_solve(&m, &[3.0, 3.0], &cfg).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-14 && (out.x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 2.0), (0, 1, 1.0), (1, 1, 2.0)]).unwrap();
        assert!(matches!(cg_solve(&m, &[1.0, 1.0], &SolverConfig::default()), Err(DecError::Asymmetric(_))));
    }

    fn path_laplacian(n: usize) -> SparseMatrix {
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.extend([(i, i, 1.0), (i + 1, i + 1, 1.0), (i, i + 1, -1.0), (i + 1, i, -1.0)]);
        }
        SparseMatrix::from_triplets(n, n, t).unwrap()
    }

    #[test]
    fn singular_system_with_deflation() {
        let n = 40;
        let m = path_laplacian(n);
        let w: Vec<f64> = (0..n).map(|i| 1.0 + (i % 3) as f64).collect();
        let b: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 - 1.0).collect();
        let cfg = SolverConfig {
            deflate_constants: true,
            constant_weights: Some(w.clone()),
            ..Default::default()
        };
        let out = cg_solve(&m, &b, &cfg).unwrap();
        assert!(out.residual <= 1e-12);
        let mean: f64 = out.x.iter().zip(&w).map(|(x, w)| x * w).sum();
        let scale = out.x.iter().zip(&w).map(|(x, w)| w * x * x).sum::<f64>().sqrt();
        assert!(mean.abs() <= 1e-10 * scale);
        // energy never increases
        assert!(out.energy.windows(2).all(|e| e[1] <= e[0] + 1e-12 * e[0].abs()));

        let zero = cg_solve(&m, &vec![0.0; n], &cfg).unwrap();
        assert!(zero.x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn reports_non_convergence() {
        let m = path_laplacian(200).add(&SparseMatrix::identity(200).scale(Some(&vec![1e-6; 200]), None).unwrap()).unwrap();
        let b: Vec<f64> = (0..200).map(|i| (i as f64).sin()).collect();
        let cfg = SolverConfig {
            max_iterations: Some(3),
            ..Default::default()
        };
        assert!(matches!(cg_solve(&m, &b, &cfg), Err(DecError::NoConvergence { iterations: 3, .. })));
    }
}
