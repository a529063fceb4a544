use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("closure has order {order}, which is not a power of {p}")]
    NotAPGroup { order: usize, p: u64 },
    #[error("group order exceeds the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("subgroup is not cyclic")]
    NotCyclic,
    #[error("residue is zero mod p")]
    ZeroResidue,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("conjugation action undefined: element does not normalize the subgroup")]
    ActionUndefined,
    #[error("map is not a homomorphism")]
    NotAHomomorphism,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("non-integral result: {0}")]
    NonIntegralResult(String),
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("twisted product does not descend to the base ring")]
    GaloisDescentFailure,
    #[error("integrality violated: {0}")]
    IntegralityViolation(String),
    #[error("M3 congruence fails at subgroup {0}")]
    M3Violation(usize),
    #[error("input has non-integral coefficients")]
    NonIntegralInput,
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
