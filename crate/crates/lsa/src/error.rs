use thiserror::Error;

#[derive(Debug, Error)]
pub enum LsaError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("tensor entry at {0:?} is not finite")]
    NonFiniteEntry(Vec<usize>),

    #[error("algebra is not left-symmetric (residual {residual:.3e} > tolerance {tol:.3e})")]
    NotLeftSymmetric { residual: f64, tol: f64 },

    #[error("matrix asymmetry {asym:.3e} exceeds tolerance {tol:.3e}")]
    NotSymmetric { asym: f64, tol: f64 },

    #[error("antisymmetry defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotAntisymmetric { defect: f64, tol: f64 },

    #[error("bilinear form is degenerate (|det| = {det:.3e})")]
    Degenerate { det: f64 },

    #[error("linear map is singular (|det| = {det:.3e})")]
    SingularMap { det: f64 },

    #[error("form is not a 2-cocycle (residual {residual:.3e} > tolerance {tol:.3e})")]
    NotTwoCocycle { residual: f64, tol: f64 },

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("unknown solution family `{0}`")]
    UnknownFamily(String),

    #[error("unknown branch `{branch}` for family `{family}`")]
    UnknownBranch { family: String, branch: String },

    #[error("missing parameter `{0}`")]
    MissingParameter(String),

    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("invalid input in field `{field}`: {message}")]
    InvalidInput { field: String, message: String },
}
