use thiserror::Error;

/// Failures raised by constructions and validations throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefined(String),
    #[error("not a chain complex: d∘d ≠ 0 in degree {degree}")]
    NotAComplex { degree: i32 },
    #[error("not a chain map: d∘f ≠ f∘d in degree {degree}")]
    NotAChainMap { degree: i32 },
    #[error("group in degree {degree} is not free")]
    NotFree { degree: i32 },
    #[error("complex is not acyclic (homology in degree {degree})")]
    NotAcyclic { degree: i32 },
    #[error("map is not an acyclic fibration: {0}")]
    NotAcyclicFibration(String),
    #[error("complex is not contractible (degree {degree})")]
    NotContractible { degree: i32 },
    #[error("group is infinite (free rank {free_rank}); I and I² are only materialized for finite groups")]
    InfiniteGroup { free_rank: usize },
    #[error("lifting square does not have an injective left map and surjective right map: {0}")]
    NotMonoNotEpi(String),
    #[error("map is not a splitting: {0}")]
    NotASplitting(String),
    #[error("lifting square is outside both model-axiom configurations: {0}")]
    NotLiftable(String),
    #[error("map is not a cofibration: {0}")]
    NotCofibration(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error("materialized rank {rank} exceeds the limit {limit}")]
    RankLimit { rank: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
