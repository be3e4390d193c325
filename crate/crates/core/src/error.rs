use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    /// An operation whose result is undefined on empty input.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("edge ({0}, {1}) already present in the base graph")]
    EdgeOverlap(usize, usize),

    #[error("benchmark generation infeasible: {0}")]
    Infeasible(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("external detector failed: {0}")]
    Detector(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
