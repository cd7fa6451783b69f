use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "edge `{edge}`: expected a {expected_rows}x{expected_cols} matrix, found {rows}x{cols}"
    )]
    ShapeMismatch {
        edge: String,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix given for unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("no matrix given for edge `{0}`")]
    MissingMatrix(String),

    #[error("edge `{edge}`: {reason}")]
    BadEndpoint { edge: String, reason: String },

    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("doubled representation is not self-dual: {0}")]
    NotSelfDual(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("component at vertex {vertex} is singular or not square")]
    SingularComponent { vertex: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("smallest singular value ratio {ratio:e} falls inside the ambiguity band")]
    ToleranceAmbiguous { ratio: f64 },

    #[error("similarity is not block diagonal: block ({row}, {col}) carries mass {mass:e}")]
    NotBlockDiagonal { row: usize, col: usize, mass: f64 },

    #[error("copy blocks {copy} and {next} disagree by {diff:e}", next = copy + 1)]
    CopiesDisagree { copy: usize, diff: f64 },

    #[error("Schur iteration did not converge")]
    NoConvergence,

    #[error("matrix is singular")]
    SingularInput,

    #[error("eigenvalue {re}{im:+}i lies on the rotated branch cut")]
    BranchCutHit { re: f64, im: f64 },

    #[error("no branch angle clears every eigenvalue (best clearance {best:e})")]
    NoCommonBranch { best: f64 },

    #[error("eigenvalues are too clustered for interpolation (gap {gap:e})")]
    SpectrumTooClustered { gap: f64 },

    #[error("square root is inaccurate: residual {residual:e}, commutation {commutation:e}")]
    SqrtInaccurate { residual: f64, commutation: f64 },

    #[error("correction did not produce an isomorphism: residual {residual:e}")]
    CorrectionFailed { residual: f64 },

    #[error("representations are not isomorphic or too far apart: {0}")]
    NotIsomorphicOrTooFar(String),

    #[error("route `{route}` cannot handle this graph: {reason}")]
    RouteMismatch { route: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
