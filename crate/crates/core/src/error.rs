use indpath_bounds::BoundsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("missing path edge ({0}, {1}): vertex order is not a Hamiltonian path")]
    NotTraced(usize, usize),
    #[error("range [{a}, {b}] is not inside [1, {n}]")]
    OutOfRange { a: usize, b: usize, n: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pattern is not a constellation")]
    NotConstellation,
    #[error("stars have different arities: {0:?}")]
    MixedArity(Vec<usize>),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
