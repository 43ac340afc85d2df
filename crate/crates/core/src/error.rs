use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for a structure of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),

    #[error("relation is not transitive: ({0},{1}) and ({1},{2}) present but ({0},{2}) missing")]
    NotTransitive(usize, usize, usize),

    #[error("relation is not antisymmetric: {0} and {1} are mutually related")]
    NotAntisymmetric(usize, usize),

    #[error("map is not order-preserving: {0} <= {1} but images are unrelated")]
    NotMonotone(usize, usize),

    #[error("map is not semi-constant on the order component containing {0}")]
    NotSemiConstant(usize),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("lattice is not distributive at ({0},{1},{2})")]
    NotDistributive(usize, usize, usize),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("isomorphism check failed: {0}")]
    IsoFailure(String),

    #[error("bad indices: need 0 <= m <= n, got n={n}, m={m}")]
    BadIndices { n: usize, m: usize },

    #[error("algebra is not in V_{0}: hom-sets into K_0..K_{0} do not separate points")]
    NotInVariety(usize),

    #[error("algebra is not in ISP(K_{0}): homs into K_{0} do not separate points")]
    NotInQuasivariety(usize),

    #[error("invalid dual object: {0}")]
    InvalidDualObject(String),

    #[error("size {size} exceeds the configured limit {limit}")]
    SizeOverflow { size: u128, limit: u128 },

    #[error("invalid default sequence: {0}")]
    InvalidSequence(String),

    #[error("tuple is not in the universe of the product bilattice")]
    NotInUniverse,

    #[error("closure failure: {0}")]
    ClosureFailure(String),

    #[error("the one-element algebra has no monolith")]
    TrivialAlgebra,

    #[error("no optimality witness found: {0}")]
    NoWitness(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
