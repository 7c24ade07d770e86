use thiserror::Error;

/// Errors reported by the library.
///
/// Randomized root isolation never surfaces here: a failed isolation is
/// encoded in [`crate::RootSet::complete`] and [`crate::CountResult::exact`]
/// so that a run always terminates with a usable lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision exponent k must be at least 1")]
    InvalidPrecision,
    #[error("coefficient list must be non-empty")]
    EmptyCoefficients,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("operation requires a polynomial of degree at least 1")]
    ConstantPolynomial,
    #[error("valuation drop {drop} out of range for precision {k}")]
    ValuationOutOfRange { drop: u32, k: u32 },
    #[error("coefficient is not divisible by p^{power}")]
    InexactDivision { power: u32 },
    #[error("scaling exponent {exponent} outside 2..=k-1 for precision {k}")]
    ExponentOutOfRange { exponent: u32, k: u32 },
    #[error("modulus {modulus} exceeds the brute-force guard {guard}")]
    GuardExceeded { modulus: String, guard: u64 },
    #[error("the recursion tree is undefined for a polynomial vanishing mod p^k")]
    TreeUndefined,
}
