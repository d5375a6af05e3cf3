//! DEC operators on cochains: diagonal Hodge stars, the codifferential,
//! the Hodge–Laplacian, weighted inner products, Whitney reconstruction
//! and the `Π - J` interpolation diagnostics.

use crate::complex::SimplicialComplex;
use crate::dual::DualComplex;
use crate::error::{DecError, Result};
use crate::forms::{self, PolyForm};
use crate::quadrature::QuadratureRule;
use crate::sparse::SparseMatrix;

/// A real value per `k`-simplex, in `Δ_k` index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    degree: usize,
    values: Vec<f64>,
}

impl Cochain {
    pub fn new(degree: usize, values: Vec<f64>) -> Self {
        Self { degree, values }
    }

    pub fn zeros(complex: &SimplicialComplex, degree: usize) -> Self {
        Self::new(degree, vec![0.0; complex.count(degree)])
    }

    pub fn constant(complex: &SimplicialComplex, degree: usize, c: f64) -> Self {
        Self::new(degree, vec![c; complex.count(degree)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree || self.len() != other.len() {
            return Err(DecError::ShapeMismatch("cochain difference".into()));
        }
        Ok(Cochain::new(
            self.degree,
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Apply a sparse operator mapping `k`-cochains to `degree`-cochains.
    pub fn apply(&self, op: &SparseMatrix, degree: usize) -> Result<Cochain> {
        Ok(Cochain::new(degree, op.spmv(&self.values)?))
    }
}

/// Values on the dual cells `*σ`, indexed by the primal `σ ∈ Δ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCochain {
    pub primal_degree: usize,
    pub values: Vec<f64>,
}

/// Diagonal Hodge star `a_σ = |*σ| / |σ|` on `k`-cochains.
#[derive(Clone, Debug)]
pub struct DiagonalHodge {
    degree: usize,
    entries: Vec<f64>,
}

impl DiagonalHodge {
    pub fn new(dual: &DualComplex, degree: usize) -> Self {
        Self {
            degree,
            entries: dual.ratio_a(degree).to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn matrix(&self) -> SparseMatrix {
        SparseMatrix::from_diagonal(&self.entries)
    }

    pub fn inverse_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_diagonal(&self.entries.iter().map(|a| 1.0 / a).collect::<Vec<_>>())
    }
}

fn check_len(dual: &DualComplex, k: usize, len: usize) -> Result<()> {
    if dual.ratio_a(k).len() != len {
        return Err(DecError::ShapeMismatch(format!(
            "{k}-cochain of length {len}, expected {}",
            dual.ratio_a(k).len()
        )));
    }
    Ok(())
}

/// `⟨★w, *σ⟩ = (|*σ|/|σ|) ⟨w, σ⟩`.
pub fn hodge_star_apply(dual: &DualComplex, w: &Cochain) -> Result<DualCochain> {
    check_len(dual, w.degree, w.len())?;
    Ok(DualCochain {
        primal_degree: w.degree,
        values: w.values.iter().zip(dual.ratio_a(w.degree)).map(|(v, a)| v * a).collect(),
    })
}

/// `⟨★⁻¹w, σ⟩ = (|σ|/|*σ|) ⟨w, *σ⟩`.
pub fn hodge_star_inverse_apply(dual: &DualComplex, w: &DualCochain) -> Result<Cochain> {
    check_len(dual, w.primal_degree, w.values.len())?;
    Ok(Cochain::new(
        w.primal_degree,
        w.values.iter().zip(dual.ratio_b(w.primal_degree)).map(|(v, b)| v * b).collect(),
    ))
}

/// Discrete codifferential `δ_k = S_{k-1}⁻¹ D_{k-1}ᵀ S_k`, a
/// `|Δ_{k-1}| × |Δ_k|` matrix.
pub fn codifferential_matrix(complex: &SimplicialComplex, dual: &DualComplex, k: usize) -> Result<SparseMatrix> {
    if k == 0 || k > complex.dim() {
        return Err(DecError::DegreeOutOfRange { k, n: complex.dim() });
    }
    complex
        .coboundary_matrix(k - 1)?
        .transpose()
        .scale(Some(dual.ratio_b(k - 1)), Some(dual.ratio_a(k)))
}

/// The same operator assembled row by row from the coface sets:
/// `(δw)_σ = (|σ|/|*σ|) Σ_{τ ∈ 𝒜(σ)} ± (|*τ|/|τ|) w_τ`.
pub fn codifferential_stencil(complex: &SimplicialComplex, dual: &DualComplex, k: usize) -> Result<SparseMatrix> {
    if k == 0 || k > complex.dim() {
        return Err(DecError::DegreeOutOfRange { k, n: complex.dim() });
    }
    let mut triplets = Vec::new();
    for s in 0..complex.count(k - 1) {
        let ratio = dual.primal_volumes(k - 1)[s] / dual.dual_volumes(k - 1)[s];
        for &(t, sign) in complex.coface_indices(k - 1, s) {
            let weight = dual.dual_volumes(k)[t] / dual.primal_volumes(k)[t];
            triplets.push((s, t, ratio * weight * f64::from(sign)));
        }
    }
    SparseMatrix::from_triplets(complex.count(k - 1), complex.count(k), triplets)
}

/// Discrete Hodge–Laplacian `L = D_{k-1} δ_k + δ_{k+1} D_k`.
pub fn hodge_laplacian_matrix(complex: &SimplicialComplex, dual: &DualComplex, k: usize) -> Result<SparseMatrix> {
    let n = complex.dim();
    if k > n {
        return Err(DecError::DegreeOutOfRange { k, n });
    }
    let mut l = SparseMatrix::zeros(complex.count(k), complex.count(k));
    if k > 0 {
        let term = complex.coboundary_matrix(k - 1)?.spgemm(&codifferential_matrix(complex, dual, k)?)?;
        l = l.add(&term)?;
    }
    if k < n {
        let term = codifferential_matrix(complex, dual, k + 1)?.spgemm(&complex.coboundary_matrix(k)?)?;
        l = l.add(&term)?;
    }
    Ok(l)
}

/// Symmetrized system `M = S_k L`, assembled as
/// `(D_{k-1}ᵀ S_k)ᵀ S_{k-1}⁻¹ (D_{k-1}ᵀ S_k) + D_kᵀ S_{k+1} D_k`.
pub fn system_matrix(complex: &SimplicialComplex, dual: &DualComplex, k: usize) -> Result<SparseMatrix> {
    let n = complex.dim();
    if k > n {
        return Err(DecError::DegreeOutOfRange { k, n });
    }
    let mut m = SparseMatrix::zeros(complex.count(k), complex.count(k));
    if k > 0 {
        let b = complex.coboundary_matrix(k - 1)?.transpose().scale(None, Some(dual.ratio_a(k)))?;
        let term = b.transpose().spgemm(&b.scale(Some(dual.ratio_b(k - 1)), None)?)?;
        m = m.add(&term)?;
    }
    if k < n {
        let d = complex.coboundary_matrix(k)?;
        let term = d.transpose().spgemm(&d.scale(Some(dual.ratio_a(k + 1)), None)?)?;
        m = m.add(&term)?;
    }
    Ok(m)
}

/// `⟦u, v⟧ = Σ_σ a_σ u_σ v_σ`.
pub fn discrete_inner(dual: &DualComplex, u: &Cochain, v: &Cochain) -> Result<f64> {
    if u.degree != v.degree || u.len() != v.len() {
        return Err(DecError::ShapeMismatch("inner product of mismatched cochains".into()));
    }
    check_len(dual, u.degree, u.len())?;
    Ok(dual
        .ratio_a(u.degree)
        .iter()
        .zip(u.values.iter().zip(&v.values))
        .map(|(a, (x, y))| a * x * y)
        .sum())
}

pub fn discrete_norm(dual: &DualComplex, u: &Cochain) -> Result<f64> {
    discrete_inner(dual, u, u).map(f64::sqrt)
}

/// `⦀w⦀_* = (Σ_σ b_σ w_{*σ}²)^{1/2}` for values on dual cells.
pub fn dual_discrete_norm(dual: &DualComplex, w: &DualCochain) -> Result<f64> {
    check_len(dual, w.primal_degree, w.values.len())?;
    Ok(dual
        .ratio_b(w.primal_degree)
        .iter()
        .zip(&w.values)
        .map(|(b, x)| b * x * x)
        .sum::<f64>()
        .sqrt())
}

struct LocalFrame {
    lambda: [f64; 3],
    grad: [[f64; 2]; 3],
}

fn local_frame(p: &[&[f64]], x: f64, y: f64) -> LocalFrame {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let mut lambda = [0.0; 3];
    let mut grad = [[0.0; 2]; 3];
    for i in 0..3 {
        let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        // λ_i = ((b - a) × (q - a)) / det
        grad[i] = [-(b[1] - a[1]) / det, (b[0] - a[0]) / det];
        lambda[i] = ((b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0])) / det;
    }
    LocalFrame { lambda, grad }
}

/// Value of the lowest-order Whitney form `W w` at a point of triangle
/// `Δ_2[tri]`, returned as form coefficients (1, 2 or 1 entries).
pub fn whitney_evaluate(complex: &SimplicialComplex, w: &Cochain, tri: usize, point: [f64; 2]) -> Result<Vec<f64>> {
    if complex.dim() != 2 || w.degree > 2 || w.len() != complex.count(w.degree) {
        return Err(DecError::ShapeMismatch("Whitney evaluation needs a planar complex".into()));
    }
    let p = complex.points(2, tri);
    let frame = local_frame(&p, point[0], point[1]);
    if frame.lambda.iter().any(|&l| l < -1e-12) {
        return Err(DecError::PointOutsideTriangle);
    }
    Ok(whitney_at(complex, w, tri, &frame))
}

fn whitney_at(complex: &SimplicialComplex, w: &Cochain, tri: usize, frame: &LocalFrame) -> Vec<f64> {
    let verts = complex.simplex(2, tri).vertices();
    match w.degree {
        0 => vec![(0..3).map(|i| w.values[verts[i]] * frame.lambda[i]).sum()],
        1 => {
            let mut out = vec![0.0, 0.0];
            // local edges in ascending order: (0,1), (0,2), (1,2)
            for &(i, j, face) in &[(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
                let e = complex.face_indices(2, tri)[face].0;
                let c = w.values[e];
                for (axis, o) in out.iter_mut().enumerate() {
                    *o += c * (frame.lambda[i] * frame.grad[j][axis] - frame.lambda[j] * frame.grad[i][axis]);
                }
            }
            out
        }
        _ => {
            let p = complex.points(2, tri);
            let signed = crate::geometry::signed_area(p[0], p[1], p[2]);
            vec![w.values[tri] / signed]
        }
    }
}

/// `‖W w‖_{L²(Ω)}` by element-wise quadrature.
pub fn l2_norm_whitney(complex: &SimplicialComplex, w: &Cochain) -> Result<f64> {
    if complex.dim() != 2 || w.len() != complex.count(w.degree) {
        return Err(DecError::ShapeMismatch("Whitney norm needs a planar complex".into()));
    }
    let rule = QuadratureRule::triangle(4);
    let mut total = 0.0;
    for t in 0..complex.count(2) {
        let p = complex.points(2, t);
        let jac = 2.0 * crate::geometry::signed_area(p[0], p[1], p[2]).abs();
        for (node, weight) in rule.iter() {
            let x = p[0][0] + node[0] * (p[1][0] - p[0][0]) + node[1] * (p[2][0] - p[0][0]);
            let y = p[0][1] + node[0] * (p[1][1] - p[0][1]) + node[1] * (p[2][1] - p[0][1]);
            let frame = local_frame(&p, x, y);
            let v = whitney_at(complex, w, t, &frame);
            total += jac * weight * v.iter().map(|c| c * c).sum::<f64>();
        }
    }
    Ok(total.sqrt())
}

/// `J ω = ★⁻¹ Π_* ⋆ω`: `(Jω)_σ = (|σ|/|*σ|) ∫_{*σ} ⋆ω`.
pub fn j_interpolant(complex: &SimplicialComplex, dual: &DualComplex, form: &PolyForm) -> Result<Cochain> {
    let k = form.degree();
    let dual_values = forms::de_rham_dual(complex, dual, &forms::hodge_star(form))?;
    hodge_star_inverse_apply(dual, &DualCochain { primal_degree: k, values: dual_values })
}

/// `(Π - J) ω` as a cochain.
pub fn pi_minus_j(complex: &SimplicialComplex, dual: &DualComplex, form: &PolyForm) -> Result<Cochain> {
    forms::de_rham(complex, form)?.sub(&j_interpolant(complex, dual, form)?)
}

/// Residual `⦀δ_h J ω - J δω⦀` of the commuting property, measured over
/// the interior `(k-1)`-simplices. Boundary dual cells are not closed by
/// dual faces, so the identity is only claimed in the interior.
pub fn commuting_j_check(complex: &SimplicialComplex, dual: &DualComplex, form: &PolyForm) -> Result<f64> {
    let k = form.degree();
    let delta = codifferential_matrix(complex, dual, k)?;
    let lhs = j_interpolant(complex, dual, form)?.apply(&delta, k - 1)?;
    let rhs = j_interpolant(complex, dual, &forms::codifferential(form)?)?;
    let diff = lhs.sub(&rhs)?;
    let interior = Cochain::new(
        k - 1,
        diff.values
            .iter()
            .enumerate()
            .map(|(i, v)| if complex.is_boundary(k - 1, i) { 0.0 } else { *v })
            .collect(),
    );
    discrete_norm(dual, &interior)
}
