use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no connected graph after {attempts} draws (n={n}, p={p}); p is too small for n")]
    Disconnected { n: usize, p: f64, attempts: usize },

    #[error("cut references vertex {vertex} but the graph has {n} vertices")]
    CutOutOfRange { vertex: usize, n: usize },

    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),

    #[error("internal LP error: {0}")]
    LpInternal(String),

    #[error("edge cost {cost} on ({u},{v}) is negative: x or occupations are inconsistent")]
    NegativeEdgeCost { u: usize, v: usize, cost: f64 },

    #[error("instance has {n} vertices, limit is {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("time budget of {0:.1}s exceeded")]
    TimeBudget(f64),

    #[error("cluster sample lists have mismatched shot counts ({expected} vs {found})")]
    ShotMismatch { expected: usize, found: usize },

    #[error("sample set is empty")]
    EmptySamples,

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
