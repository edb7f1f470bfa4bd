use thiserror::Error;

use crate::circuit::NodeRef;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element {0} outside the ground set [1..{1}]")]
    ElementOutOfRange(u32, u32),

    #[error("ground set size {0} must be in [1..64]")]
    GroundSize(u32),

    #[error("subset {subset} is not contained in the ground set")]
    ForeignElement { subset: String },

    #[error("rank {rank} out of range for {total} subsets")]
    RankOutOfRange { rank: usize, total: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("n < p+q: zero matrix not representable")]
    NotRepresentable,

    #[error("matrix row {0} is zero: not representable without an identity element")]
    ZeroRow(String),

    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("malformed circuit: {0}")]
    Malformed(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("circuit is not reduced: {0} has no consumers")]
    NotReduced(NodeRef),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("search refused: {0}")]
    SearchRefused(String),

    #[error("bound invariant violated at (p,q,n)=({p},{q},{n}): {what}")]
    BoundInvariant {
        p: usize,
        q: usize,
        n: usize,
        what: String,
    },
}
