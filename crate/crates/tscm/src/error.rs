use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("node {id:?} appears in the edge list but not in the attribute table")]
    MissingAttributes { id: String },

    #[error("unknown node id {id:?}")]
    UnknownNode { id: String },

    #[error("subspace has {got} weights but the network has {expected} attributes")]
    SubspaceLength { expected: usize, got: usize },

    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),

    #[error("need at least two exemplar nodes, got {got}")]
    TooFewExemplars { got: usize },

    #[error("sample node {node} has no neighbors")]
    IsolatedSample { node: usize },

    #[error("sample node {node} was given more than once")]
    DuplicateSample { node: usize },

    #[error("need at least {need} sample nodes, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("no usable candidate subspace for sample node {node}")]
    NoCandidateSubspace { node: usize },

    #[error("network has no edges")]
    EdgelessNetwork,

    #[error("community has no members")]
    EmptyCommunity,

    #[error("community volume is zero so fitness is undefined")]
    UndefinedFitness,

    #[error("invalid expansion action: {0}")]
    InvalidAction(String),

    #[error("expansion exceeded the action cap of {cap} steps")]
    ActionCapExceeded { cap: usize },

    #[error("beta must lie in [0, 1], got {0}")]
    InvalidBeta(f64),

    #[error("infeasible benchmark configuration: {0}")]
    InfeasibleConfig(String),

    #[error("ground-truth community is empty")]
    EmptyTruth,

    #[error("node index {node} out of range for a network of {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
