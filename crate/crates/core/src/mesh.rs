//! Meshes of the model domain and the plain-text mesh format.
//!
//! The symmetric family splits the unit equilateral triangle into `4^m`
//! equilateral triangles of side `2^-m`. The perturbed family displaces
//! interior vertices of the symmetric mesh by a disk-uniform random vector,
//! rejecting (with the radius halved) any move that breaks
//! well-centeredness of the incident triangles.
//!
//! Randomness comes from SplitMix64 seeded directly with the user seed.
//! Interior vertices are visited in index order; each attempt draws two
//! 64-bit words `a, b`, maps them to `u = (a >> 11) · 2⁻⁵³` and
//! `v = (b >> 11) · 2⁻⁵³`, and moves the vertex by
//! `r·sqrt(u)·(cos 2πv, sin 2πv)` where `r = α h / 2^attempt`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::complex::SimplicialComplex;
use crate::dual::{is_well_centered, WELL_CENTERED_TOL};
use crate::error::{DecError, Result};
use crate::geometry;

/// Retries allowed per vertex after the first rejected draw.
pub const MAX_RETRIES: usize = 20;

pub const DEFAULT_ALPHA: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFamily {
    Symmetric,
    Perturbed,
}

impl std::str::FromStr for MeshFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "symmetric" => Ok(Self::Symmetric),
            "perturbed" => Ok(Self::Perturbed),
            other => Err(format!("unknown mesh family `{other}`")),
        }
    }
}

impl std::fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Symmetric => "symmetric",
            Self::Perturbed => "perturbed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshFamilySpec {
    pub family: MeshFamily,
    /// `h = 2^-level`.
    pub level: usize,
    pub seed: u64,
    /// Perturbation radius as a fraction of `h`.
    pub alpha: f64,
}

impl MeshFamilySpec {
    pub fn symmetric(level: usize) -> Self {
        Self {
            family: MeshFamily::Symmetric,
            level,
            seed: 0,
            alpha: 0.0,
        }
    }

    pub fn perturbed(level: usize, seed: u64, alpha: f64) -> Self {
        Self {
            family: MeshFamily::Perturbed,
            level,
            seed,
            alpha,
        }
    }

    pub fn h(&self) -> f64 {
        0.5f64.powi(self.level as i32)
    }

    pub fn generate(&self) -> Result<SimplicialComplex> {
        if self.level == 0 {
            return Err(DecError::InvalidArgument("mesh level must be at least 1".into()));
        }
        match self.family {
            MeshFamily::Symmetric => symmetric_mesh(self.level),
            MeshFamily::Perturbed => perturbed_mesh(self.level, self.seed, self.alpha),
        }
    }
}

struct Lattice {
    coords: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    on_boundary: Vec<bool>,
}

fn lattice(m: usize) -> Lattice {
    let n = 1usize << m;
    let h = 1.0 / n as f64;
    let s3 = 3f64.sqrt();
    // rows of constant y, each row left to right: (y, x) lexicographic
    let mut row_start = Vec::with_capacity(n + 2);
    let mut coords = Vec::new();
    let mut on_boundary = Vec::new();
    for j in 0..=n {
        row_start.push(coords.len());
        for i in 0..=n - j {
            coords.push(vec![(j as f64 * 0.5 + i as f64) * h, j as f64 * h * s3 / 2.0]);
            on_boundary.push(j == 0 || i == 0 || i == n - j);
        }
    }
    let id = |j: usize, i: usize| row_start[j] + i;
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n - j {
            cells.push(vec![id(j, i), id(j, i + 1), id(j + 1, i)]);
            if i + 1 < n - j {
                cells.push(vec![id(j, i + 1), id(j + 1, i), id(j + 1, i + 1)]);
            }
        }
    }
    Lattice {
        coords,
        cells,
        on_boundary,
    }
}

/// Uniform equilateral refinement of the model domain with `h = 2^-m`.
pub fn symmetric_mesh(m: usize) -> Result<SimplicialComplex> {
    let lat = lattice(m);
    SimplicialComplex::build(&lat.coords, &lat.cells)
}

fn triangle_is_well_centered(coords: &[Vec<f64>], cell: &[usize]) -> bool {
    let pts: Vec<&[f64]> = cell.iter().map(|&v| coords[v].as_slice()).collect();
    match geometry::circumcenter_barycentric(&pts) {
        Ok((_, bary)) => bary.iter().all(|&b| b > WELL_CENTERED_TOL),
        Err(_) => false,
    }
}

fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Randomly perturbed symmetric mesh; deterministic in `(m, seed, alpha)`.
pub fn perturbed_mesh(m: usize, seed: u64, alpha: f64) -> Result<SimplicialComplex> {
    if !(0.0..0.5).contains(&alpha) {
        return Err(DecError::InvalidArgument(format!("perturbation amplitude {alpha} outside [0, 0.5)")));
    }
    let mut lat = lattice(m);
    let h = 0.5f64.powi(m as i32);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); lat.coords.len()];
    for (c, cell) in lat.cells.iter().enumerate() {
        for &v in cell {
            incident[v].push(c);
        }
    }

    let mut rng = SplitMix64::seed_from_u64(seed);
    for v in 0..lat.coords.len() {
        if lat.on_boundary[v] {
            continue;
        }
        let origin = lat.coords[v].clone();
        let mut radius = alpha * h;
        let mut accepted = false;
        for _ in 0..=MAX_RETRIES {
            let r = radius * unit_interval(rng.next_u64()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * unit_interval(rng.next_u64());
            lat.coords[v] = vec![origin[0] + r * theta.cos(), origin[1] + r * theta.sin()];
            if incident[v].iter().all(|&c| triangle_is_well_centered(&lat.coords, &lat.cells[c])) {
                accepted = true;
                break;
            }
            radius *= 0.5;
        }
        if !accepted {
            return Err(DecError::PerturbationFailed(v));
        }
    }

    let complex = SimplicialComplex::build(&lat.coords, &lat.cells)?;
    let (ok, offenders) = is_well_centered(&complex);
    if !ok {
        return Err(DecError::NotWellCentered(offenders));
    }
    Ok(complex)
}

/// Serialize in the text format: header `n V C`, `V` coordinate lines,
/// `C` cell lines. Coordinates use 17 significant digits.
pub fn mesh_to_string(complex: &SimplicialComplex) -> String {
    let n = complex.dim();
    let cells = complex.cells();
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", n, complex.num_vertices(), cells.len());
    for v in 0..complex.num_vertices() {
        let line: Vec<String> = complex.vertex(v).iter().map(|x| format!("{:.16e}", x)).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    for cell in cells {
        let line: Vec<String> = cell.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn write_mesh(complex: &SimplicialComplex, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, mesh_to_string(complex))?;
    Ok(())
}

/// Parse the text format. `#` starts a comment; tokens are whitespace
/// separated.
pub fn parse_mesh(text: &str) -> Result<SimplicialComplex> {
    let tokens: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .collect();
    let header = |i: usize, what: &str| -> Result<usize> {
        tokens
            .get(i)
            .ok_or_else(|| DecError::MalformedMesh(format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|e| DecError::MalformedMesh(format!("bad {what}: {e}")))
    };
    let n = header(0, "dimension")?;
    let nv = header(1, "vertex count")?;
    let nc = header(2, "cell count")?;
    if n == 0 {
        return Err(DecError::MalformedMesh("dimension must be positive".into()));
    }
    let body = &tokens[3..];
    let expected = nv * n + nc * (n + 1);
    if body.len() != expected {
        return Err(DecError::MalformedMesh(format!(
            "expected {expected} values after the header, found {}",
            body.len()
        )));
    }
    let mut coords = Vec::with_capacity(nv);
    for v in 0..nv {
        let c = body[v * n..(v + 1) * n]
            .iter()
            .map(|t| t.parse::<f64>().map_err(|e| DecError::MalformedMesh(format!("bad coordinate `{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        coords.push(c);
    }
    let offset = nv * n;
    let mut cells = Vec::with_capacity(nc);
    for c in 0..nc {
        let ids = body[offset + c * (n + 1)..offset + (c + 1) * (n + 1)]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|e| DecError::MalformedMesh(format!("bad vertex id `{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&id) = ids.iter().find(|&&id| id >= nv) {
            return Err(DecError::MalformedMesh(format!("cell {c} references vertex {id} of {nv}")));
        }
        cells.push(ids);
    }
    SimplicialComplex::build(&coords, &cells)
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<SimplicialComplex> {
    parse_mesh(&fs::read_to_string(path)?)
}
