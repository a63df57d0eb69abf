use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported quadrature degree {degree} for {shape} (max {max})")]
    UnsupportedQuadrature {
        shape: &'static str,
        degree: usize,
        max: usize,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh generation exceeded the cap of {cap} elements")]
    MeshCapExceeded { cap: usize },

    #[error("solver failure ({context}): {reason} [n = {n}, nnz = {nnz}]")]
    Solver {
        context: String,
        reason: String,
        n: usize,
        nnz: usize,
    },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("exact solution required: {0}")]
    MissingExactSolution(&'static str),

    #[error("norm evaluations disagree: energy {energy:e} vs pairing {pairing:e}")]
    NormMismatch { energy: f64, pairing: f64 },

    #[error("wavelet level {0} out of range")]
    WaveletLevel(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Adds method context to a solver failure.
    pub fn with_context(self, ctx: &str) -> Self {
        match self {
            Error::Solver {
                context,
                reason,
                n,
                nnz,
            } => Error::Solver {
                context: if context.is_empty() {
                    ctx.to_string()
                } else {
                    format!("{ctx}: {context}")
                },
                reason,
                n,
                nnz,
            },
            other => other,
        }
    }
}
