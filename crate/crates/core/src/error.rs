use thiserror::Error;

pub type Result<T> = std::result::Result<T, OmError>;

#[derive(Debug, Error)]
pub enum OmError {
    #[error("invalid ground set: {0}")]
    InvalidGround(String),

    #[error("malformed tuple: {0}")]
    MalformedTuple(String),

    #[error("degenerate tuple {0:?}: repeated element, no literal exists")]
    DegenerateTuple(Vec<u8>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a uniform chirotope: {0}")]
    NotUniform(String),

    #[error("malformed column: {0}")]
    MalformedColumn(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("matrix parse error: {0}")]
    MatrixParse(String),

    #[error("inconsistent edge orientation between vertices {0} and {1}")]
    InconsistentEdge(String, String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("dimacs parse error at line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("solver output parse error at line {line}: {text:?}")]
    SolverOutput { line: usize, text: String },

    #[error("invalid state: {0}")]
    State(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
