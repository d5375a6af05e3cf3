//! Python bindings: meshes, circumcentric duals, DEC operators, the CG
//! solver and the convergence driver.

use std::collections::BTreeMap;
use std::sync::Arc;

use dec_core::experiment::{self, ConvergenceConfig, LevelError, ReportFormat};
use dec_core::mesh::{self, DEFAULT_ALPHA};
use dec_core::operators::{self, DiagonalHodge};
use dec_core::{DecError, DualComplex, ManufacturedProblem, MeshFamily, SimplicialComplex, SolverConfig, SparseMatrix};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: DecError) -> PyErr {
    match e {
        DecError::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn check_degree(k: usize, n: usize) -> PyResult<()> {
    if k > n {
        Err(err(DecError::DegreeOutOfRange { k, n }))
    } else {
        Ok(())
    }
}

/// Compressed sparse matrix, exposed read-only.
#[pyclass(name = "SparseMatrix", frozen)]
struct PySparse(SparseMatrix);

#[pymethods]
impl PySparse {
    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.0.nnz()
    }

    /// List of `(row, col, value)`.
    fn triplets(&self) -> Vec<(usize, usize, f64)> {
        self.0.triplets().collect()
    }

    fn to_dense(&self) -> Vec<Vec<f64>> {
        self.0.to_dense()
    }

    fn matvec(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.0.spmv(&x).map_err(err)
    }

    fn transpose(&self) -> PySparse {
        PySparse(self.0.transpose())
    }

    fn matmul(&self, other: &PySparse) -> PyResult<PySparse> {
        self.0.spgemm(&other.0).map(PySparse).map_err(err)
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.0.shape();
        format!("SparseMatrix({r}x{c}, nnz={})", self.0.nnz())
    }
}

/// Simplicial complex of a triangulation.
#[pyclass(name = "Mesh", frozen)]
struct PyMesh(Arc<SimplicialComplex>);

#[pymethods]
impl PyMesh {
    #[new]
    fn new(coords: Vec<Vec<f64>>, cells: Vec<Vec<usize>>) -> PyResult<Self> {
        SimplicialComplex::build(&coords, &cells).map(|k| Self(Arc::new(k))).map_err(err)
    }

    #[staticmethod]
    fn symmetric(level: usize) -> PyResult<Self> {
        mesh::symmetric_mesh(level).map(|k| Self(Arc::new(k))).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (level, seed, alpha = DEFAULT_ALPHA))]
    fn perturbed(level: usize, seed: u64, alpha: f64) -> PyResult<Self> {
        mesh::perturbed_mesh(level, seed, alpha).map(|k| Self(Arc::new(k))).map_err(err)
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        mesh::read_mesh(path).map(|k| Self(Arc::new(k))).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        mesh::parse_mesh(text).map(|k| Self(Arc::new(k))).map_err(err)
    }

    fn write(&self, path: &str) -> PyResult<()> {
        mesh::write_mesh(&self.0, path).map_err(err)
    }

    fn to_text(&self) -> String {
        mesh::mesh_to_string(&self.0)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn count(&self, k: usize) -> PyResult<usize> {
        check_degree(k, self.0.dim())?;
        Ok(self.0.count(k))
    }

    fn vertices(&self) -> Vec<Vec<f64>> {
        self.0.vertex_coords()
    }

    /// Vertex tuples of every `k`-simplex in index order.
    fn simplices(&self, k: usize) -> PyResult<Vec<Vec<usize>>> {
        check_degree(k, self.0.dim())?;
        Ok(self.0.simplices(k).iter().map(|s| s.vertices().to_vec()).collect())
    }

    fn boundary_flags(&self, k: usize) -> PyResult<Vec<bool>> {
        check_degree(k, self.0.dim())?;
        Ok(self.0.boundary_flags(k).to_vec())
    }

    #[getter]
    fn mesh_size(&self) -> f64 {
        self.0.mesh_size()
    }

    /// Coboundary `D_k` as a signed incidence matrix.
    fn coboundary(&self, k: usize) -> PyResult<PySparse> {
        self.0.coboundary_matrix(k).map(PySparse).map_err(err)
    }

    /// Whether every simplex contains its circumcenter, with offenders.
    fn well_centered(&self) -> (bool, Vec<(usize, usize)>) {
        dec_core::dual::is_well_centered(&self.0)
    }

    /// Primal de Rham map of the manufactured solution (`"u"`), source
    /// (`"f"`) or its codifferential (`"rho"`).
    #[pyo3(signature = (k, which = "u"))]
    fn manufactured_cochain(&self, k: usize, which: &str) -> PyResult<Vec<f64>> {
        let p = ManufacturedProblem::new(k).map_err(err)?;
        let form = match which {
            "u" => p.u,
            "f" => p.f,
            "rho" => p.rho().ok_or_else(|| PyValueError::new_err("rho needs k >= 1"))?,
            _ => return Err(PyValueError::new_err(format!("unknown field `{which}`"))),
        };
        dec_core::de_rham(&self.0, &form).map(|c| c.into_values()).map_err(err)
    }

    fn __repr__(&self) -> String {
        let counts: Vec<String> = (0..=self.0.dim()).map(|k| self.0.count(k).to_string()).collect();
        format!("Mesh(dim={}, counts=[{}])", self.0.dim(), counts.join(", "))
    }
}

/// Circumcentric dual of a well-centered mesh, with the operators built on it.
#[pyclass(name = "Dual", frozen)]
struct PyDual {
    complex: Arc<SimplicialComplex>,
    dual: Arc<DualComplex>,
}

#[pymethods]
impl PyDual {
    #[new]
    fn new(mesh: &PyMesh) -> PyResult<Self> {
        let dual = DualComplex::build(&mesh.0).map_err(err)?;
        Ok(Self {
            complex: mesh.0.clone(),
            dual: Arc::new(dual),
        })
    }

    fn primal_volumes(&self, k: usize) -> PyResult<Vec<f64>> {
        check_degree(k, self.dual.dim())?;
        Ok(self.dual.primal_volumes(k).to_vec())
    }

    fn dual_volumes(&self, k: usize) -> PyResult<Vec<f64>> {
        check_degree(k, self.dual.dim())?;
        Ok(self.dual.dual_volumes(k).to_vec())
    }

    /// Diagonal Hodge star entries `|*σ| / |σ|`.
    fn hodge_star(&self, k: usize) -> PyResult<Vec<f64>> {
        check_degree(k, self.dual.dim())?;
        Ok(DiagonalHodge::new(&self.dual, k).entries().to_vec())
    }

    fn circumcenter(&self, k: usize, i: usize) -> PyResult<Vec<f64>> {
        check_degree(k, self.dual.dim())?;
        if i >= self.complex.count(k) {
            return Err(PyValueError::new_err(format!("no {k}-simplex {i}")));
        }
        Ok(self.dual.circumcenter(k, i).to_vec())
    }

    fn codifferential(&self, k: usize) -> PyResult<PySparse> {
        operators::codifferential_matrix(&self.complex, &self.dual, k).map(PySparse).map_err(err)
    }

    fn laplacian(&self, k: usize) -> PyResult<PySparse> {
        operators::hodge_laplacian_matrix(&self.complex, &self.dual, k).map(PySparse).map_err(err)
    }

    /// Symmetric system `S_k L`.
    fn system_matrix(&self, k: usize) -> PyResult<PySparse> {
        operators::system_matrix(&self.complex, &self.dual, k).map(PySparse).map_err(err)
    }

    /// `(passed, largest deviation)` over interior `k`-simplices.
    #[pyo3(signature = (k, tol = 1e-12))]
    fn centroid_condition(&self, k: usize, tol: f64) -> PyResult<(bool, f64)> {
        check_degree(k, self.dual.dim())?;
        Ok(dec_core::check_centroid_condition(&self.complex, &self.dual, k, tol))
    }

    /// Solve the manufactured `k`-form problem; returns `u_h`, `rho_h`,
    /// solver statistics and the discrete error norms.
    #[pyo3(signature = (k, tol = 1e-12))]
    fn solve_manufactured(&self, py: Python<'_>, k: usize, tol: f64) -> PyResult<Py<PyAny>> {
        let problem = ManufacturedProblem::new(k).map_err(err)?;
        let cfg = SolverConfig {
            tolerance: tol,
            ..SolverConfig::default()
        };
        let (complex, dual) = (self.complex.clone(), self.dual.clone());
        let (sol, norms) = py
            .detach(move || -> dec_core::Result<_> {
                let sol = experiment::solve_problem(&complex, &dual, &problem, &cfg)?;
                let norms = experiment::compute_errors(&complex, &dual, &problem, &sol.u, sol.rho.as_ref())?;
                Ok((sol, norms))
            })
            .map_err(err)?;
        let out = pyo3::types::PyDict::new(py);
        out.set_item("u", sol.u.values().to_vec())?;
        out.set_item("rho", sol.rho.map(|r| r.into_values()))?;
        out.set_item("iterations", sol.iterations)?;
        out.set_item("residual", sol.residual)?;
        let errors: BTreeMap<&str, f64> = norms.iter().map(|(n, v)| (n.label(), *v)).collect();
        out.set_item("errors", errors)?;
        Ok(out.into_any().unbind())
    }

    /// Diagnostic checks as `(name, passed or None, value, tolerance)`.
    fn diagnostics(&self, k: usize) -> PyResult<Vec<(String, Option<bool>, f64, f64)>> {
        let d = experiment::diagnostics(&self.complex, &self.dual, k).map_err(err)?;
        Ok(d.checks.into_iter().map(|c| (c.name, c.passed, c.value, c.tolerance)).collect())
    }

    fn report_csv(&self) -> String {
        experiment::dual_report_csv(&self.complex, &self.dual)
    }
}

/// Conjugate gradients on a symmetric system; returns `(x, residual, iterations)`.
#[pyfunction]
#[pyo3(signature = (matrix, b, tol = 1e-12, max_iter = None, jacobi = true, deflate_weights = None))]
fn cg_solve(
    py: Python<'_>,
    matrix: &PySparse,
    b: Vec<f64>,
    tol: f64,
    max_iter: Option<usize>,
    jacobi: bool,
    deflate_weights: Option<Vec<f64>>,
) -> PyResult<(Vec<f64>, f64, usize)> {
    let cfg = SolverConfig {
        tolerance: tol,
        max_iterations: max_iter,
        preconditioner: if jacobi {
            dec_core::Preconditioner::Jacobi
        } else {
            dec_core::Preconditioner::None
        },
        deflate_constants: deflate_weights.is_some(),
        constant_weights: deflate_weights,
    };
    let m = &matrix.0;
    let out = py.detach(|| dec_core::cg_solve(m, &b, &cfg)).map_err(err)?;
    Ok((out.x, out.residual, out.iterations))
}

/// Convergence table over mesh levels.
#[pyclass(name = "ConvergenceReport", frozen)]
struct PyReport(experiment::ConvergenceReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn levels(&self) -> Vec<usize> {
        self.0.levels.clone()
    }

    /// Norm values per level, keyed by norm label.
    fn norms(&self) -> BTreeMap<&'static str, Vec<f64>> {
        self.0
            .norms()
            .iter()
            .map(|n| (n.label(), self.0.records.iter().map(|r| r.norms[n]).collect()))
            .collect()
    }

    fn rates(&self) -> BTreeMap<&'static str, Vec<f64>> {
        self.0.rates.iter().map(|(n, r)| (n.label(), r.clone())).collect()
    }

    fn iterations(&self) -> Vec<usize> {
        self.0.records.iter().map(|r| r.iterations).collect()
    }

    #[pyo3(signature = (format = "markdown"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let f: ReportFormat = format.parse().map_err(PyValueError::new_err)?;
        Ok(experiment::render_report(&self.0, f))
    }
}

#[pyfunction]
#[pyo3(signature = (k, family = "symmetric", levels = vec![2, 3, 4, 5], seed = 1, alpha = DEFAULT_ALPHA, tol = 1e-12))]
fn convergence(py: Python<'_>, k: usize, family: &str, levels: Vec<usize>, seed: u64, alpha: f64, tol: f64) -> PyResult<PyReport> {
    let family: MeshFamily = family.parse().map_err(PyValueError::new_err)?;
    let mut cfg = ConvergenceConfig::new(k, family, levels);
    cfg.seed = seed;
    cfg.alpha = alpha;
    cfg.solver.tolerance = tol;
    py.detach(|| experiment::run_convergence(&cfg))
        .map(PyReport)
        .map_err(|e| match e {
            LevelError::Mesh(e) => PyValueError::new_err(format!("mesh generation failed: {e}")),
            LevelError::Solve(e) => PyRuntimeError::new_err(format!("solve failed: {e}")),
        })
}

/// Invariant suite for smooth forms: `(name, passed, value, tolerance)`.
#[pyfunction]
fn selftest_forms() -> PyResult<Vec<(String, bool, f64, f64)>> {
    let checks = experiment::forms_selftest().map_err(err)?;
    Ok(checks.into_iter().map(|c| (c.name, c.passed == Some(true), c.value, c.tolerance)).collect())
}

#[pymodule]
fn dec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySparse>()?;
    m.add_class::<PyMesh>()?;
    m.add_class::<PyDual>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(cg_solve, m)?)?;
    m.add_function(wrap_pyfunction!(convergence, m)?)?;
    m.add_function(wrap_pyfunction!(selftest_forms, m)?)?;
    m.add("DEFAULT_ALPHA", DEFAULT_ALPHA)?;
    Ok(())
}
