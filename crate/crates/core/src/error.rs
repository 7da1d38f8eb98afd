use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Slope-type invariants are undefined at rank zero. The degree is
    /// carried so callers can still order torsion classes.
    #[error("rank-zero vector: slope undefined (d = {degree})")]
    RankZero { degree: BigInt },

    /// `twice_value` is `2 * chi`, odd when the parity condition fails.
    #[error("invalid Mukai vector: {reason} (2*chi = {twice_value})")]
    InvalidMukaiVector { reason: String, twice_value: BigInt },

    #[error("invalid mutation: {0}")]
    InvalidMutation(String),

    #[error("ambiguous mutation: mutating a zero pair only permutes it")]
    AmbiguousMutation,

    #[error("not a numerically exceptional pair: {0}")]
    NotExceptionalPair(String),

    #[error("invalid window [{lo}, {hi}]: need lo <= 0 and hi >= 3")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("h = {0} is out of range for this operation")]
    InvalidH(BigInt),

    #[error("limit slopes only exist for h > 2 (h = {0})")]
    NoLimits(BigInt),

    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),

    #[error("theorem out of scope: h = {0} (both comparison theorems need h > 2)")]
    TheoremOutOfScope(BigInt),

    #[error("invalid collection: {0}")]
    InvalidCollection(String),

    #[error("collection is not numerically full: {0}")]
    NotFull(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("bad prime {0}: {1}")]
    BadPrime(u64, String),

    #[error("invalid Kronecker module: {0}")]
    InvalidModule(String),

    #[error("enumeration of {needed} modules exceeds the budget of {budget}")]
    TooLarge { needed: String, budget: u64 },
}
