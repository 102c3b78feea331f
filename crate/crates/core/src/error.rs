use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed graph file: {0}")]
    Malformed(String),

    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is not admissible: {0}")]
    Inadmissible(String),

    #[error("first Betti number is {0}; at least 2 is required")]
    BettiTooSmall(usize),

    #[error("Betti numbers differ ({0} vs {1})")]
    BettiMismatch(usize, usize),

    #[error("bound exceeded: {0}")]
    Bound(String),

    #[error("orientation has {got} entries but the graph has {expected} edges")]
    Orientation { expected: usize, got: usize },

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("zeta cross-check mismatch: edge form {edge_form:?} vs vertex form {vertex_form:?}")]
    ZetaMismatch {
        edge_form: Vec<String>,
        vertex_form: Vec<String>,
    },

    #[error("invalid tree path: {0}")]
    InvalidPath(String),

    #[error("generator letter {letter} is out of range for rank {rank}")]
    InvalidLetter { letter: i32, rank: usize },

    #[error("cylinder of depth {have} is too shallow; depth {need} is required")]
    InsufficientDepth { need: usize, have: usize },

    #[error("image is not a union of depth-{0} cylinders; increase the output depth")]
    OutDepthTooShallow(usize),

    #[error("word of length {len} exceeds the configured bound {bound}")]
    WordTooLong { len: usize, bound: usize },

    #[error("resolution depth {need} exceeds the configured bound {bound}")]
    DepthOverflow { need: usize, bound: usize },

    #[error("invalid generator pairing: {0}")]
    InvalidPairing(String),

    #[error("coefficient vector has {got} entries; the depth-{depth} partition has {expected}")]
    CoefficientLength {
        depth: usize,
        expected: usize,
        got: usize,
    },

    #[error("dagger element may not contain the inverse letter in word {0:?}")]
    NotDagger(Vec<i32>),
}

pub type Result<T> = std::result::Result<T, Error>;
