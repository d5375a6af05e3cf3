use thiserror::Error;

/// Errors raised across the DEC pipeline.
#[derive(Debug, Error)]
pub enum DecError {
    #[error("vertex id {id} out of range (mesh has {count} vertices)")]
    BadVertexId { id: usize, count: usize },

    #[error("cell {0:?} has the wrong number of vertices")]
    BadCellArity(Vec<usize>),

    #[error("duplicate cell {0:?}")]
    DuplicateCell(Vec<usize>),

    #[error("degenerate cell {0:?} (zero volume)")]
    DegenerateCell(Vec<usize>),

    #[error("non-manifold face {face:?} shared by {cofaces} cells")]
    NonManifoldFace { face: Vec<usize>, cofaces: usize },

    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<usize>),

    #[error("degree {k} out of range for this operation (ambient dimension {n})")]
    DegreeOutOfRange { k: usize, n: usize },

    #[error("degenerate point set: circumcenter system is singular")]
    DegeneratePoints,

    #[error("mesh is not well-centered ({} offending simplices)", .0.len())]
    NotWellCentered(Vec<(usize, usize)>),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("quadrature rule exact to degree {have} cannot integrate degree {need}")]
    QuadratureDegree { have: usize, need: usize },

    #[error("point lies outside the triangle")]
    PointOutsideTriangle,

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("solver did not converge in {iterations} iterations (best relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("could not keep the mesh well-centered while perturbing vertex {0}")]
    PerturbationFailed(usize),

    #[error("malformed mesh file: {0}")]
    MalformedMesh(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DecError>;
