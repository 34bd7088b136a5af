//! Heights, isogenies, lattices and modular polynomials for Drinfeld
//! F_q[t]-modules in generic characteristic, in exact arithmetic.

pub mod arith;
pub mod harness;
pub mod heights;
pub mod skew;
pub mod bounds;
pub mod drinfeld;
pub mod isogeny;
pub mod lattice;
pub mod modpoly;
pub mod random;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use arith::ArithError;

/// Exact rational numbers used for every height and log-absolute value.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact "p/q" rendering used in reports ("3" for integers).
pub fn fraction_string(x: &Rational) -> String {
    x.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("log of zero is undefined")]
    LogOfZero,
    #[error("all-zero tuple has no height")]
    ZeroTuple,
    #[error("polynomial is not primitive over A")]
    NotPrimitive,
    #[error("polynomial is reducible over F")]
    Reducible,
    #[error("division by the zero twisted polynomial")]
    ZeroDivisor,
    #[error("no {0}-th root of the leading coefficient in the coefficient field")]
    RootExtractionFailure(u64),
    #[error("rank must satisfy 2 <= r <= {max}, got {0}", max = MAX_RANK)]
    BadRank(usize),
    #[error("leading coefficient g_r must be nonzero")]
    ZeroLeading,
    #[error("twisting by zero")]
    ZeroTwist,
    #[error("not stable at {0}: local height {1} is not an integer")]
    StableReductionRequired(String, String),
    #[error("isogeny must have nonzero constant term (generic characteristic rules out inseparable isogenies)")]
    Inseparable,
    #[error("kernel of f is not stable under the module: remainder {0}")]
    KernelNotStable(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("singular matrix")]
    Singular,
    #[error("lattice is not contained: {0}")]
    NotContained(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Largest supported rank.
pub const MAX_RANK: usize = 6;

pub type Result<T, E = Error> = std::result::Result<T, E>;
