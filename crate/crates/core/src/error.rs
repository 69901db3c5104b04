use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("transform is singular or too ill-conditioned (condition estimate {condition:e})")]
    SingularTransform { condition: f64 },

    #[error("scalar z_{index} is zero")]
    ZeroScalar { index: usize },

    #[error("vectors do not form a frame (lower bound {lower:e}, upper bound {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    AsymmetricInput { asymmetry: f64 },

    #[error("xi must be nonzero")]
    ZeroXi,

    #[error("frame is not real: field tag or imaginary parts are nonzero")]
    NotRealFrame,

    #[error("{m} vectors exceed the exhaustive partition limit of {limit}")]
    TooLarge { m: usize, limit: usize },

    #[error("frame is not certified phase retrievable (a0 = {a0:e})")]
    NotRetrievableInput { a0: f64 },

    #[error("shape mismatch: expected (n={n}, m={m}), got (n={other_n}, m={other_m})")]
    ShapeMismatch {
        n: usize,
        m: usize,
        other_n: usize,
        other_m: usize,
    },

    #[error("dimension {0} is not supported (need n >= 2)")]
    BadDimension(usize),

    #[error("angle a = {a} is in the exceptional set (pi * {p}/{q})")]
    DeniedAngle { a: f64, p: u32, q: u32 },

    #[error("angle a = {0} makes sin(a) vanish")]
    DegenerateAngle(f64),

    #[error("bad cardinality: n = {n}, m = {m}")]
    BadCardinality { n: usize, m: usize },

    #[error("no frame obtained after {0} retries")]
    DegenerateAfterRetries(usize),

    #[error("path needs m >= 2n, got n = {n}, m = {m}")]
    CardinalityTooSmall { n: usize, m: usize },

    #[error("index selection failed: {0}")]
    SelectionFailed(&'static str),

    #[error("path parameter t = {0} outside [-1, 1]")]
    PathParameter(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
