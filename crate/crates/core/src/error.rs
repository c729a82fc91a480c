use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: loop at vertex {vertex} has zero index")]
    ZeroIndexLoop { line: usize, vertex: usize },

    #[error("line {line}: index has {found} components, expected {expected}")]
    IndexArity {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    Disconnected(usize),

    #[error("line {line}: duplicate `{directive}` declaration")]
    Duplicate { line: usize, directive: String },

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("requested length {requested} exceeds cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("index {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),

    #[error("no cycle with index {index:?} of length at most {cap}")]
    NoCycleWithIndex { index: Vec<i64>, cap: usize },

    #[error("closed forms exist only for n <= 3, got n = {0}")]
    OrderTooLarge(usize),

    #[error("potential has {found} values, graph has {expected} vertices")]
    PotentialSize { expected: usize, found: usize },

    #[error("Fourier identities require a real potential")]
    ComplexPotential,

    #[error("unknown or malformed builtin `{0}`")]
    InvalidBuiltin(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
