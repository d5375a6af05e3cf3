//! Discrete exterior calculus on well-centered simplicial meshes.
//!
//! Primal complexes, circumcentric duals, diagonal Hodge stars and the
//! discrete Hodge-Laplacian, together with polynomial differential forms
//! for manufactured-solution convergence studies.

pub mod complex;
pub mod dual;
pub mod error;
pub mod experiment;
pub mod forms;
pub mod geometry;
pub mod mesh;
pub mod operators;
pub mod poly;
pub mod quadrature;
pub mod solver;
pub mod sparse;

pub use complex::{Simplex, SimplicialComplex};
pub use dual::{build_dual, check_centroid_condition, DualComplex};
pub use error::{DecError, Result};
pub use forms::{de_rham, de_rham_dual, PolyForm};
pub use mesh::{MeshFamily, MeshFamilySpec};
pub use operators::{Cochain, DiagonalHodge, DualCochain};
pub use poly::Poly2;
pub use quadrature::QuadratureRule;
pub use solver::{cg_solve, Preconditioner, SolveOutcome, SolverConfig};
pub use sparse::SparseMatrix;
pub use experiment::{ConvergenceConfig, ConvergenceReport, ErrorRecord, ManufacturedProblem, NormKind, ReportFormat};
