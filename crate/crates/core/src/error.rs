use thiserror::Error;

use crate::mechanisms::TeamId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain (round 0, odd kick count, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A recorded first kicker contradicts the mechanism.
    #[error("inconsistent history: round {round} was opened by {found}, but the mechanism dictates {expected}")]
    Inconsistent {
        round: u32,
        expected: TeamId,
        found: TeamId,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("invalid scoring model: {0}")]
    InvalidModel(String),

    #[error("unsupported scoring model: {0}")]
    UnsupportedModel(String),

    #[error("{rounds} rounds exceeds the enumeration ceiling of {max}")]
    Resource { rounds: u32, max: u32 },

    /// p + q - 2pq = 0: the sudden-death stage never resolves.
    #[error("degenerate sudden death: p={p}, q={q} never resolves")]
    DegenerateSuddenDeath { p: String, q: String },

    #[error("singularity: {0}")]
    Singularity(String),
}
