//! Exact arithmetic: F_q, A = F_q[t], F = F_q(t), finite extensions of F,
//! factorization over F_q and resultants over arbitrary rings.

mod ring;

pub mod ext;
pub mod factor;
pub mod fq;
pub mod mpoly;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod ratfunc;
pub mod upoly;

pub use ext::{ExtElem, ExtRing};
pub use factor::{enumerate_irreducibles, factor, factor_with_seed, is_irreducible, Factorization};
pub use fq::{FiniteField, Fq};
pub use mpoly::MPoly;
pub use poly::PolyA;
pub use ratfunc::{FExtension, RatFunc};
pub use ring::{Field, FrobeniusRing, Ring};
pub use upoly::{resultant, UPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("q = {0} exceeds the table limit of {max}", max = fq::MAX_Q)]
    FieldTooLarge(u32),
    #[error("{0}: zero input")]
    ZeroInput(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor has a non-unit leading coefficient")]
    NonUnitLeading,
    #[error("inexact division in coefficient ring")]
    InexactDivision,
    #[error("modulus {0} is not irreducible over F")]
    Reducible(String),
    #[error("could not certify irreducibility of {0}")]
    Uncertified(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
