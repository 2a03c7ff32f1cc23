use thiserror::Error;

/// Errors raised by the exact kernel, the permutation oracle and the quadrature routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The enclosure of an irrational value could not be narrowed enough to
    /// decide its floor or sign before the precision cap was reached.
    #[error("precision exhausted: needed more than {cap} series terms for e")]
    PrecisionExhausted { cap: usize },

    /// A brute-force enumeration was requested above the configured limit.
    #[error("enumeration of {n}! permutations exceeds the cap n <= {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exact sum that must be an integer was not. Indicates a bug.
    #[error("expected an integral value, got {0}")]
    NonIntegral(String),

    #[error("quadrature did not converge after {evaluations} integrand evaluations")]
    NonConvergence { evaluations: usize },

    /// A derangement table entry broke D(n) = (n-1)(D(n-1) + D(n-2)).
    #[error("derangement table inconsistent at n = {0}")]
    TableInconsistent(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
