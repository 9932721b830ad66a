use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("link id {link} out of range (graph has {link_count} links)")]
    InvalidLink { link: usize, link_count: usize },

    #[error("node id {node} out of range (graph has {node_count} nodes)")]
    InvalidNode { node: usize, node_count: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("links {0} and {1} share a node; not a matching")]
    NotAMatching(usize, usize),

    #[error("invalid augmentation: {0}")]
    InvalidAugmentation(String),

    #[error("graph has {links} links, above the enumeration cap of {cap}")]
    CapExceeded { links: usize, cap: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("queue on link {link} would become negative")]
    NegativeQueue { link: usize },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
