use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("operator is not flagged hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(&'static str),

    #[error("eigenvalue {0:e} is below the roundoff clamp of -1e-10")]
    NegativeEigenvalue(f64),

    #[error("infinite relative entropy: {leakage:e} of sigma's weight lies outside rho's support")]
    InfiniteRelativeEntropy { leakage: f64 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: i64 },

    #[error("Schmidt weight {0} outside [0, 1]")]
    InvalidSchmidt(f64),

    #[error("size guard: {qubits} qubits requested, limit is {limit}")]
    SizeGuard { qubits: usize, limit: usize },

    #[error("jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid permutation of {0} symbols")]
    InvalidPermutation(usize),

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
}
