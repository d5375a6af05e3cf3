//! Circumcentric dual of a well-centered simplicial complex.
//!
//! Every dual cell `*σ` is stored as the union of its flag simplices
//! `[c(σ), c(σ_{k+1}), …, c(σ_n)]` over chains `σ ⊂ σ_{k+1} ⊂ … ⊂ σ_n`.
//! Volumes are accumulated unsigned; on a well-centered mesh all flag
//! simplices of a cell share one orientation.

use crate::complex::{SimplicialComplex, Simplex};
use crate::error::{DecError, Result};
use crate::geometry;

pub use crate::geometry::{circumcenter, simplex_volume as primal_volume};

/// Barycentric coordinates of a circumcenter must exceed this to count as
/// strictly interior.
pub const WELL_CENTERED_TOL: f64 = 1e-10;

/// A flag `σ = σ_k ⊂ σ_{k+1} ⊂ … ⊂ σ_n`, stored as simplex indices at
/// consecutive dimensions starting from `k`.
pub type Flag = Vec<usize>;

#[derive(Clone, Debug)]
pub struct DualComplex {
    dim: usize,
    circumcenters: Vec<Vec<f64>>,
    primal_volume: Vec<Vec<f64>>,
    dual_volume: Vec<Vec<f64>>,
    ratio_a: Vec<Vec<f64>>,
    ratio_b: Vec<Vec<f64>>,
    pieces: Vec<Vec<Vec<Flag>>>,
    top_orientation: Vec<f64>,
}

/// The diamond cell of a simplex: all full circumcenter flags through it.
#[derive(Clone, Debug)]
pub struct DiamondCell {
    pub owner: Simplex,
    /// Each piece is an `n`-simplex given by its `n + 1` circumcenters,
    /// ordered `c(σ_0), …, c(σ_n)`.
    pub pieces: Vec<Vec<Vec<f64>>>,
}

impl DiamondCell {
    pub fn volume(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let pts: Vec<&[f64]> = p.iter().map(Vec::as_slice).collect();
                primal_volume(&pts)
            })
            .sum()
    }
}

/// Check that every simplex of dimension ≥ 1 strictly contains its
/// circumcenter. Returns the offending `(k, index)` pairs.
pub fn is_well_centered(complex: &SimplicialComplex) -> (bool, Vec<(usize, usize)>) {
    let mut offenders = Vec::new();
    for k in 1..=complex.dim() {
        for i in 0..complex.count(k) {
            let pts = complex.points(k, i);
            let ok = match geometry::circumcenter_barycentric(&pts) {
                Ok((_, bary)) => bary.iter().all(|&b| b > WELL_CENTERED_TOL),
                Err(_) => false,
            };
            if !ok {
                offenders.push((k, i));
            }
        }
    }
    (offenders.is_empty(), offenders)
}

fn upper_flags(complex: &SimplicialComplex, k: usize, i: usize) -> Vec<Flag> {
    if k == complex.dim() {
        return vec![vec![i]];
    }
    let mut out = Vec::new();
    for &(t, _) in complex.coface_indices(k, i) {
        for tail in upper_flags(complex, k + 1, t) {
            let mut f = Vec::with_capacity(tail.len() + 1);
            f.push(i);
            f.extend(tail);
            out.push(f);
        }
    }
    out
}

fn lower_flags(complex: &SimplicialComplex, k: usize, i: usize) -> Vec<Flag> {
    if k == 0 {
        return vec![vec![i]];
    }
    let mut out = Vec::new();
    for &(f, _) in complex.face_indices(k, i) {
        for mut head in lower_flags(complex, k - 1, f) {
            head.push(i);
            out.push(head);
        }
    }
    out
}

impl DualComplex {
    /// Build the circumcentric dual; fails if the mesh is not well-centered.
    pub fn build(complex: &SimplicialComplex) -> Result<Self> {
        let (ok, offenders) = is_well_centered(complex);
        if !ok {
            return Err(DecError::NotWellCentered(offenders));
        }
        let n = complex.dim();

        let mut circumcenters = Vec::with_capacity(n + 1);
        let mut primal = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut centers = Vec::with_capacity(complex.count(k) * n);
            let mut vols = Vec::with_capacity(complex.count(k));
            for i in 0..complex.count(k) {
                let pts = complex.points(k, i);
                centers.extend(geometry::circumcenter(&pts)?);
                vols.push(geometry::simplex_volume(&pts));
            }
            circumcenters.push(centers);
            primal.push(vols);
        }

        let mut dual = Self {
            dim: n,
            circumcenters,
            primal_volume: primal,
            dual_volume: Vec::new(),
            ratio_a: Vec::new(),
            ratio_b: Vec::new(),
            pieces: Vec::new(),
            top_orientation: Vec::new(),
        };

        for k in 0..=n {
            let flags: Vec<Vec<Flag>> = (0..complex.count(k)).map(|i| upper_flags(complex, k, i)).collect();
            let vols: Vec<f64> = flags
                .iter()
                .map(|fs| fs.iter().map(|f| dual.flag_volume(k, f)).sum())
                .collect();
            dual.pieces.push(flags);
            dual.dual_volume.push(vols);
        }
        for k in 0..=n {
            let a: Vec<f64> = dual.dual_volume[k]
                .iter()
                .zip(&dual.primal_volume[k])
                .map(|(d, p)| d / p)
                .collect();
            let b: Vec<f64> = dual.primal_volume[k]
                .iter()
                .zip(&dual.dual_volume[k])
                .map(|(p, d)| p / d)
                .collect();
            dual.ratio_a.push(a);
            dual.ratio_b.push(b);
        }
        dual.top_orientation = (0..complex.count(n))
            .map(|t| orientation_sign(&complex.points(n, t)))
            .collect();
        Ok(dual)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Circumcenter of `Δ_k[i]`.
    pub fn circumcenter(&self, k: usize, i: usize) -> &[f64] {
        &self.circumcenters[k][i * self.dim..(i + 1) * self.dim]
    }

    /// `|σ|` for every σ in `Δ_k`.
    pub fn primal_volumes(&self, k: usize) -> &[f64] {
        &self.primal_volume[k]
    }

    /// `|*σ|` for every σ in `Δ_k`.
    pub fn dual_volumes(&self, k: usize) -> &[f64] {
        &self.dual_volume[k]
    }

    /// `a_σ = |*σ| / |σ|`.
    pub fn ratio_a(&self, k: usize) -> &[f64] {
        &self.ratio_a[k]
    }

    /// `b_σ = |σ| / |*σ|`.
    pub fn ratio_b(&self, k: usize) -> &[f64] {
        &self.ratio_b[k]
    }

    /// Flags whose circumcenter simplices make up `*σ` for `σ = Δ_k[i]`.
    pub fn dual_cell_pieces(&self, k: usize, i: usize) -> &[Flag] {
        &self.pieces[k][i]
    }

    /// Circumcenters along a flag starting at dimension `k`.
    pub fn flag_points(&self, k: usize, flag: &[usize]) -> Vec<&[f64]> {
        flag.iter().enumerate().map(|(j, &s)| self.circumcenter(k + j, s)).collect()
    }

    fn flag_volume(&self, k: usize, flag: &[usize]) -> f64 {
        geometry::simplex_volume(&self.flag_points(k, flag))
    }

    /// Orientation (±1) of each top simplex's ascending vertex order
    /// relative to the ambient orientation. The dual point of a top simplex
    /// carries this sign.
    pub fn top_orientation(&self) -> &[f64] {
        &self.top_orientation
    }

    /// Total measure of the domain, `Σ_T |T|`.
    pub fn domain_volume(&self) -> f64 {
        self.primal_volume[self.dim].iter().sum()
    }

    /// Volume-weighted centroid of `*σ` for `σ = Δ_k[i]`.
    pub fn dual_centroid(&self, k: usize, i: usize) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim];
        let mut total = 0.0;
        for flag in &self.pieces[k][i] {
            let pts = self.flag_points(k, flag);
            let w = geometry::simplex_volume(&pts);
            let c = geometry::centroid(&pts);
            for (a, ci) in acc.iter_mut().zip(&c) {
                *a += w * ci;
            }
            total += w;
        }
        acc.iter_mut().for_each(|a| *a /= total);
        acc
    }
}

/// Sign of the determinant of the edge vectors of a full-dimensional simplex.
fn orientation_sign(points: &[&[f64]]) -> f64 {
    let n = points.len() - 1;
    let m = nalgebra::DMatrix::from_fn(n, n, |r, c| points[c + 1][r] - points[0][r]);
    if m.determinant() >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub fn build_dual(complex: &SimplicialComplex) -> Result<DualComplex> {
    DualComplex::build(complex)
}

/// Diamond cells of every simplex in `Δ_k`.
pub fn diamond_cells(complex: &SimplicialComplex, dual: &DualComplex, k: usize) -> Vec<DiamondCell> {
    (0..complex.count(k))
        .map(|i| {
            let lower = lower_flags(complex, k, i);
            let upper = &dual.pieces[k][i];
            let mut pieces = Vec::with_capacity(lower.len() * upper.len());
            for lo in &lower {
                for up in upper {
                    let mut pts: Vec<Vec<f64>> =
                        lo.iter().enumerate().map(|(j, &s)| dual.circumcenter(j, s).to_vec()).collect();
                    pts.extend(up[1..].iter().enumerate().map(|(j, &s)| dual.circumcenter(k + 1 + j, s).to_vec()));
                    pieces.push(pts);
                }
            }
            DiamondCell {
                owner: complex.simplex(k, i).clone(),
                pieces,
            }
        })
        .collect()
}

/// Compare the centroid of each interior σ ∈ Δ_k with the centroid of `*σ`.
/// Returns whether the largest Euclidean deviation is within `tol`, and
/// that deviation (0 when there are no interior simplices).
pub fn check_centroid_condition(
    complex: &SimplicialComplex,
    dual: &DualComplex,
    k: usize,
    tol: f64,
) -> (bool, f64) {
    let mut worst: f64 = 0.0;
    for i in 0..complex.count(k) {
        if complex.is_boundary(k, i) {
            continue;
        }
        let primal = geometry::centroid(&complex.points(k, i));
        let dual_c = dual.dual_centroid(k, i);
        worst = worst.max(geometry::distance(&primal, &dual_c));
    }
    (worst <= tol, worst)
}
