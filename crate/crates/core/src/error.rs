use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("unsupported dimension: {0}")]
    Dimension(String),
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("matrix is singular to tolerance (min singular value {min_singular_value:.3e})")]
    Singular { min_singular_value: f64 },
    #[error("compatibility violated: {0}")]
    Compatibility(String),
    #[error("eigenvalue degeneracy: {0}")]
    Degeneracy(String),
    #[error("rank profile jumps between adjacent points {a} and {b}")]
    Discontinuity { a: usize, b: usize },
    #[error("cutoff coverage failed: {0}")]
    Coverage(String),
    #[error("partition of unity invalid: {0}")]
    Partition(String),
    #[error("loop passes through zero at sample {index}")]
    SingularLoop { index: usize },
    #[error("loop undersampled: phase jump {jump:.3} rad at sample {index}")]
    Refinement { index: usize, jump: f64 },
    #[error("frame degeneracy: link modulus {modulus:.3e} on plaquette {plaquette}")]
    FrameDegeneracy { plaquette: usize, modulus: f64 },
    #[error("Clifford structure violated: {0}")]
    CliffordStructure(String),
    #[error("potential not invertible: {0}")]
    Invertibility(String),
    #[error("clutching decomposition failed: {0}")]
    Decomposition(String),
    #[error("invalid discretization: {0}")]
    Discretization(String),
    #[error(
        "eigensolver did not converge after {matvecs} applications (worst residual {residual:.3e})"
    )]
    Convergence { matvecs: usize, residual: f64 },
    #[error("zero-mode count indeterminate: {0}")]
    IndeterminateCount(String),
    #[error("index unstable across resolutions: {0}")]
    Instability(String),
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scenario validation failed: {0}")]
    Validation(String),
    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
