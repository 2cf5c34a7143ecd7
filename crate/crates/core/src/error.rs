use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared edge `{0}`")]
    UndeclaredEdge(String),

    #[error("undeclared vertex `{0}`")]
    UndeclaredVertex(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("the map does not fix the base vertex `{0}`")]
    BaseNotFixed(String),

    #[error("edge `{0}` has an empty image")]
    EmptyImage(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("path is not composable: {0}")]
    NonComposable(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lattice basis is singular")]
    SingularLattice,

    #[error("simple cycle enumeration exceeded the cap of {0} cycles")]
    CycleCap(usize),

    #[error("point is not a vertex of the shadow")]
    NotAShadowVertex,

    #[error("vertex {0} is not stable")]
    UnstableVertex(usize),

    #[error("matrix of size {size} exceeds the configured bound {bound}")]
    MatrixTooLarge { size: usize, bound: usize },

    #[error("requested quotient is infinite")]
    InfiniteQuotient,

    #[error("lift inconsistency: {0}")]
    LiftInconsistency(String),

    #[error("polynomial is not monic")]
    NonMonic,

    #[error("character is not compatible with the cover: {0}")]
    IncompatibleCharacter(String),

    #[error("polytope is degenerate: {0}")]
    DegeneratePolytope(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("resource cap reached: {0}")]
    ResourceCap(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
