use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("invalid player index {0}")]
    InvalidPlayer(usize),
    #[error("graph has no designated altruist")]
    NoAltruist,
    #[error("graph contains a directed cycle")]
    NotAcyclic,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("search node limit of {0} exceeded")]
    NodeLimit(u64),
    #[error("invalid player profile: {0}")]
    InvalidProfile(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
