//! Primal simplicial complex and its oriented incidence structure.
//!
//! Simplices are identified by their ascending vertex tuple, which also
//! fixes the default orientation. Signs of faces and cofaces are derived
//! from the position of the omitted vertex, `(-1)^j`.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{DecError, Result};
use crate::geometry;
use crate::sparse::SparseMatrix;

/// An unoriented simplex given by strictly ascending vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Build from arbitrary vertex ids (sorted on the way in).
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        Self(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Face obtained by dropping the `j`-th vertex.
    pub fn face(&self, j: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(j);
        Simplex(v)
    }
}

impl From<&[usize]> for Simplex {
    fn from(v: &[usize]) -> Self {
        Simplex::new(v.to_vec())
    }
}

/// A neighbouring simplex together with the incidence coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedIncidence {
    pub neighbor: Simplex,
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    dim: usize,
    coords: Vec<f64>,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    boundary: Vec<Vec<bool>>,
    // faces[k][i]: (index in Δ_{k-1}, sign) for i in Δ_k, k >= 1
    faces: Vec<Vec<Vec<(usize, i8)>>>,
    // cofaces[k][i]: (index in Δ_{k+1}, sign) for i in Δ_k, k < n
    cofaces: Vec<Vec<Vec<(usize, i8)>>>,
}

impl SimplicialComplex {
    /// Build the full complex from top-dimensional cells.
    ///
    /// `coords` holds one `n`-vector per vertex, `cells` holds `n + 1`
    /// vertex ids per cell in any order.
    pub fn build(coords: &[Vec<f64>], cells: &[Vec<usize>]) -> Result<Self> {
        let dim = coords.first().map_or(0, Vec::len);
        if coords.iter().any(|c| c.len() != dim) {
            return Err(DecError::ShapeMismatch("vertex coordinates of mixed dimension".into()));
        }
        let flat: Vec<f64> = coords.iter().flatten().copied().collect();
        let count = coords.len();

        let mut top: Vec<Simplex> = Vec::with_capacity(cells.len());
        for cell in cells {
            if cell.len() != dim + 1 {
                return Err(DecError::BadCellArity(cell.clone()));
            }
            if let Some(&id) = cell.iter().find(|&&id| id >= count) {
                return Err(DecError::BadVertexId { id, count });
            }
            let s = Simplex::new(cell.clone());
            if s.0.windows(2).any(|w| w[0] == w[1]) {
                return Err(DecError::DegenerateCell(cell.clone()));
            }
            let pts: Vec<&[f64]> = s.0.iter().map(|&v| &flat[v * dim..(v + 1) * dim]).collect();
            let vol = geometry::simplex_volume(&pts);
            let diam = geometry::diameter(&pts);
            if !(vol > 1e-12 * diam.powi(dim as i32)) {
                return Err(DecError::DegenerateCell(cell.clone()));
            }
            top.push(s);
        }
        top.sort();
        if let Some(w) = top.windows(2).find(|w| w[0] == w[1]) {
            return Err(DecError::DuplicateCell(w[0].0.clone()));
        }

        let mut simplices: Vec<Vec<Simplex>> = vec![Vec::new(); dim + 1];
        for k in 0..dim {
            let mut all: Vec<Simplex> = top
                .iter()
                .flat_map(|t| t.0.iter().copied().combinations(k + 1).map(Simplex))
                .collect();
            all.sort();
            all.dedup();
            simplices[k] = all;
        }
        simplices[dim] = top;
        // isolated vertices are not part of the complex but keep their ids
        if dim > 0 {
            simplices[0] = (0..count).map(|v| Simplex(vec![v])).collect();
        }

        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|level| level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();

        let mut faces: Vec<Vec<Vec<(usize, i8)>>> = vec![Vec::new(); dim + 1];
        let mut cofaces: Vec<Vec<Vec<(usize, i8)>>> =
            simplices.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for k in 1..=dim {
            faces[k] = simplices[k]
                .iter()
                .enumerate()
                .map(|(ti, tau)| {
                    (0..=k)
                        .map(|j| {
                            let sign = if j % 2 == 0 { 1 } else { -1 };
                            let fi = index[k - 1][&tau.face(j)];
                            cofaces[k - 1][fi].push((ti, sign));
                            (fi, sign)
                        })
                        .collect()
                })
                .collect();
        }

        let mut boundary: Vec<Vec<bool>> = simplices.iter().map(|l| vec![false; l.len()]).collect();
        if dim > 0 {
            for (i, cf) in cofaces[dim - 1].iter().enumerate() {
                match cf.len() {
                    1 => boundary[dim - 1][i] = true,
                    2 => {}
                    n => {
                        return Err(DecError::NonManifoldFace {
                            face: simplices[dim - 1][i].0.clone(),
                            cofaces: n,
                        })
                    }
                }
            }
            for k in (0..dim - 1).rev() {
                for i in 0..simplices[k + 1].len() {
                    if boundary[k + 1][i] {
                        for &(fi, _) in &faces[k + 1][i] {
                            boundary[k][fi] = true;
                        }
                    }
                }
            }
        }

        Ok(Self {
            dim,
            coords: flat,
            simplices,
            index,
            boundary,
            faces,
            cofaces,
        })
    }

    /// Ambient (and top simplex) dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.simplices[0].len()
    }

    /// `|Δ_k|`.
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        &self.simplices[k]
    }

    pub fn simplex(&self, k: usize, i: usize) -> &Simplex {
        &self.simplices[k][i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn vertex(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    pub fn vertex_coords(&self) -> Vec<Vec<f64>> {
        self.coords.chunks(self.dim.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// Coordinates of the vertices of `Δ_k[i]`, ascending order.
    pub fn points(&self, k: usize, i: usize) -> Vec<&[f64]> {
        self.simplices[k][i].0.iter().map(|&v| self.vertex(v)).collect()
    }

    /// Top-dimensional cells as vertex tuples.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        self.simplices[self.dim].iter().map(|s| s.0.clone()).collect()
    }

    pub fn is_boundary(&self, k: usize, i: usize) -> bool {
        self.boundary[k][i]
    }

    pub fn boundary_flags(&self, k: usize) -> &[bool] {
        &self.boundary[k]
    }

    /// Indexed faces of `Δ_k[i]` with their signs in `∂`.
    pub fn face_indices(&self, k: usize, i: usize) -> &[(usize, i8)] {
        &self.faces[k][i]
    }

    /// Indexed cofaces of `Δ_k[i]` with the coefficient of `Δ_k[i]` in their boundary.
    pub fn coface_indices(&self, k: usize, i: usize) -> &[(usize, i8)] {
        &self.cofaces[k][i]
    }

    /// Largest edge length, the mesh size `h`.
    pub fn mesh_size(&self) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        (0..self.count(1))
            .map(|e| geometry::distance(self.vertex(self.simplices[1][e].0[0]), self.vertex(self.simplices[1][e].0[1])))
            .fold(0.0, f64::max)
    }

    fn locate(&self, s: &Simplex) -> Result<usize> {
        self.index_of(s).ok_or_else(|| DecError::UnknownSimplex(s.0.clone()))
    }

    /// `𝒜(σ)`: the `(k+1)`-simplices containing σ, signed by the
    /// coefficient of σ in their boundary.
    pub fn cofaces(&self, sigma: &Simplex) -> Result<Vec<SignedIncidence>> {
        let i = self.locate(sigma)?;
        let k = sigma.dim();
        Ok(self.cofaces[k][i]
            .iter()
            .map(|&(t, sign)| SignedIncidence {
                neighbor: self.simplices[k + 1][t].clone(),
                sign,
            })
            .collect())
    }

    /// `ℬ(τ)`: the faces of τ signed as in its boundary.
    pub fn faces(&self, tau: &Simplex) -> Result<Vec<SignedIncidence>> {
        let i = self.locate(tau)?;
        let k = tau.dim();
        if k == 0 {
            return Ok(Vec::new());
        }
        Ok(self.faces[k][i]
            .iter()
            .map(|&(f, sign)| SignedIncidence {
                neighbor: self.simplices[k - 1][f].clone(),
                sign,
            })
            .collect())
    }

    /// Coboundary `d^k` as a `|Δ_{k+1}| × |Δ_k|` matrix with entries ±1.
    pub fn coboundary_matrix(&self, k: usize) -> Result<SparseMatrix> {
        if k >= self.dim {
            return Err(DecError::DegreeOutOfRange { k, n: self.dim });
        }
        SparseMatrix::from_triplets(
            self.count(k + 1),
            self.count(k),
            self.faces[k + 1]
                .iter()
                .enumerate()
                .flat_map(|(t, fs)| fs.iter().map(move |&(f, s)| (t, f, f64::from(s)))),
        )
    }
}
