use thiserror::Error;

/// Errors raised by the library.
///
/// Input and precondition errors are distinguished from internal defects:
/// the latter (`Internal`, `RouteDisagreement`) indicate that a provable
/// identity failed, which can only be a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotBijective { index: usize, degree: usize },

    #[error("group order exceeds the configured bound {bound} ({what})")]
    GroupTooLarge { bound: usize, what: String },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("lattices are defined over different groups")]
    GroupMismatch,

    #[error("action is not a group homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("action matrix for element {0} is not unimodular")]
    NotUnimodular(usize),

    #[error("matrix is not equivariant for element {0}")]
    NotEquivariant(usize),

    #[error("sublattice is not stable under the group action")]
    NotStable,

    #[error("sublattice is not pure (saturate it first)")]
    NotPure,

    #[error("columns are linearly dependent")]
    DependentColumns,

    #[error("map is not surjective")]
    NotSurjective,

    #[error("subgroup is not cyclic")]
    NotCyclic,

    #[error("invalid extension: {0}")]
    InvalidExtension(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("computed routes disagree:\n{0}")]
    RouteDisagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
