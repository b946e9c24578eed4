use thiserror::Error;

/// Errors raised by the algebra, calculus and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ambient dimension {0} is outside the supported range 1..=12")]
    UnsupportedDimension(usize),

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),

    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },

    #[error("multivector is not homogeneous of a single grade")]
    NotHomogeneous,

    #[error("blade norm {0} is not 1 within tolerance")]
    NotUnit(f64),

    #[error(
        "multivector is not simple: kernel of v -> v^A has dimension {kernel}, expected {grade}"
    )]
    NotSimple { kernel: usize, grade: usize },

    #[error("rank deficient: smallest singular value {0:e} below threshold")]
    RankDeficient(f64),

    #[error("parameter point {u:?} lies outside the chart domain")]
    OutsideDomain { u: Vec<f64> },

    #[error("vector is not tangent (least-squares residual {0:e})")]
    NotTangent(f64),

    #[error("codimension {got} not supported here, expected {expected}")]
    CodimensionMismatch { expected: usize, got: usize },

    #[error("pairing <T, I> = {0:e} is not positive on the stencil")]
    NonPositivePairing(f64),

    #[error("unknown manifold '{name}'; valid names: {valid}")]
    UnknownManifold { name: String, valid: String },

    #[error("unknown check '{name}'; valid ids: {valid}")]
    UnknownCheck { name: String, valid: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("check '{check}' does not apply: {reason}")]
    NotApplicable { check: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("report format error: {0}")]
    Format(String),
}

pub type Result<T, E = GeoError> = std::result::Result<T, E>;

impl From<std::io::Error> for GeoError {
    fn from(e: std::io::Error) -> Self {
        GeoError::Io(e.to_string())
    }
}
