use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("weight entries {entries:?} do not lie in the lattice: {reason}")]
    InvalidWeight { entries: Vec<i64>, reason: String },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("a standard weight needs distinct indices, got i = j = {0}")]
    EqualIndices(usize),

    #[error("weights live in different lattices")]
    MixedLattices,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {p} does not match modulus {modulus}")]
    PrimeMismatch { p: u64, modulus: u64 },

    #[error("integer overflow in normal-form arithmetic")]
    Overflow,

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("group closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("weight set is not invariant under the group")]
    NotInvariant,

    #[error("group is not a p-group; center reduction is unavailable")]
    NotPGroup,

    #[error("search space has {size} elements, above the limit of {limit}")]
    Infeasible { size: u128, limit: u128 },

    #[error("node budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
