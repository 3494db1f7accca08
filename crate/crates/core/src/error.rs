use thiserror::Error;

/// Errors raised by the ordinal, topology, norm and extraction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero coefficient at position {pos}")]
    ZeroCoefficient { pos: usize },
    #[error("exponents must be strictly decreasing (position {pos})")]
    NonDecreasingExponents { pos: usize },
    #[error("{0} is undefined for the ordinal 0")]
    ZeroOrdinal(&'static str),
    #[error("cannot subtract {lhs} from the smaller ordinal {rhs}")]
    SubtractionUnderflow { lhs: String, rhs: String },
    #[error("ordinal {0} is finite; an ordinal >= w is required")]
    FiniteOrdinal(String),
    #[error("point {point} lies outside the ambient space [0,{ambient}]")]
    OutsideAmbient { point: String, ambient: String },
    #[error("ambient spaces differ: [0,{0}] vs [0,{1}]")]
    AmbientMismatch(String, String),
    #[error("space is finite (CB index {0}); an infinite space is required")]
    FiniteSpace(String),
    #[error("space is empty")]
    EmptySpace,
    #[error("block count {0} is too large to evaluate")]
    BlockCountTooLarge(String),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("delta must be positive")]
    NonPositiveDelta,
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("convex coefficients invalid: {0}")]
    InvalidConvexCombination(String),
    #[error("set is infinite and cannot be enumerated")]
    InfiniteSet,
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("node {0} is not in the tree")]
    UnknownNode(String),
    #[error("k = {k} exceeds the tree rank {rank}")]
    RankExceeded { k: usize, rank: usize },
    #[error("extraction needs o(K) = 0, got o(K) = {0}")]
    UnsupportedDepth(String),
    #[error("weakly null contract violated below node {path:?}: no child within {budget} probes is small at {point}")]
    ContractViolation {
        path: Vec<usize>,
        point: String,
        budget: usize,
    },
    #[error("family value at node {path:?} has sup norm {norm} > 1")]
    BoundViolation { path: Vec<usize>, norm: String },
    #[error("certificate check failed: {0}")]
    InvalidCertificate(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
