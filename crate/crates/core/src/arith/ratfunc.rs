//! The rational function field F = F_q(t).

use std::fmt;
use std::hash::{Hash, Hasher};

use super::fq::{FiniteField, Fq};
use super::poly::PolyA;
use super::{ArithError, Field, FrobeniusRing, Ring};
use crate::impl_ring_ops;

/// num/den in lowest terms with den monic; zero is 0/1. Equality is
/// structural because the form is canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: PolyA,
    den: PolyA,
}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl RatFunc {
    pub fn new(num: PolyA, den: PolyA) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: PolyA, den: PolyA) -> Self {
        if num.is_zero() {
            return RatFunc { den: PolyA::one(num.field()), num };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let (lc, den) = den.monic_parts();
        let num = num.scale(num.field().inv(lc));
        RatFunc { num, den }
    }

    pub fn from_poly(p: PolyA) -> Self {
        let den = PolyA::one(p.field());
        RatFunc { num: p, den }
    }
    pub fn zero(field: &FiniteField) -> Self {
        Self::from_poly(PolyA::zero(field))
    }
    pub fn one(field: &FiniteField) -> Self {
        Self::from_poly(PolyA::one(field))
    }
    pub fn t(field: &FiniteField) -> Self {
        Self::from_poly(PolyA::t(field))
    }
    pub fn from_fq(c: &Fq) -> Self {
        Self::from_poly(PolyA::from_fq(c))
    }

    pub fn field(&self) -> &FiniteField {
        self.num.field()
    }
    pub fn num(&self) -> &PolyA {
        &self.num
    }
    pub fn den(&self) -> &PolyA {
        &self.den
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }
    pub fn as_poly(&self) -> Option<&PolyA> {
        self.is_poly().then_some(&self.num)
    }

    /// deg(num) − deg(den) = log_q |x|_∞, for x ≠ 0.
    pub fn degree(&self) -> Option<i64> {
        (!self.num.is_zero()).then(|| self.num.deg_i64() - self.den.deg_i64())
    }

    /// v_P(x) for a monic irreducible P, by repeated exact division.
    pub fn valuation(&self, p: &PolyA) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(multiplicity(&self.num, p) as i64 - multiplicity(&self.den, p) as i64)
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.num.is_zero()).then(|| Self::canonical(self.den.clone(), self.num.clone()))
    }

    /// Integer powers, negative allowed for nonzero elements.
    pub fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            Ring::pow(self, e as u64)
        } else {
            Ring::pow(&self.inv().expect("negative power of zero"), e.unsigned_abs())
        }
    }
}

/// Largest k with p^k | a (a ≠ 0, p nonconstant).
pub fn multiplicity(a: &PolyA, p: &PolyA) -> u32 {
    let mut k = 0;
    let mut cur = a.clone();
    while let Some(next) = cur.div_exact(p) {
        cur = next;
        k += 1;
    }
    k
}

fn needs_parens(p: &PolyA) -> bool {
    p.coeffs().iter().filter(|&&c| c != 0).count() > 1
        || p.coeffs().iter().any(|&c| c != 0 && p.field().index_is_compound(c))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &PolyA| if needs_parens(p) { format!("({p})") } else { p.to_string() };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ring for RatFunc {
    fn zero_like(&self) -> Self {
        Self::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Self::one(self.field())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = rhs.den.div_exact(&g).unwrap();
        let b = self.den.div_exact(&g).unwrap();
        Self::canonical(&(&self.num * &a) + &(&rhs.num * &b), &self.den * &a)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return self.zero_like();
        }
        // cross-cancel first to keep intermediate degrees small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n = &self.num.div_exact(&g1).unwrap() * &rhs.num.div_exact(&g2).unwrap();
        let d = &self.den.div_exact(&g2).unwrap() * &rhs.den.div_exact(&g1).unwrap();
        let (lc, d) = d.monic_parts();
        RatFunc { num: n.scale(self.field().inv(lc)), den: d }
    }
    fn neg_ref(&self) -> Self {
        RatFunc { num: self.num.neg_ref(), den: self.den.clone() }
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

impl Field for RatFunc {}

impl FrobeniusRing for RatFunc {
    fn q(&self) -> u64 {
        self.field().q() as u64
    }
    fn frobenius(&self) -> Self {
        // (a/b)^q = a(t^q)/b(t^q), still coprime with monic denominator
        RatFunc { num: self.num.qth_power(), den: self.den.qth_power() }
    }
    fn qth_root(&self) -> Option<Self> {
        Some(RatFunc { num: self.num.qth_root_poly()?, den: self.den.qth_root_poly()? })
    }
}

/// Fields containing F = F_q(t): F itself and its finite extensions.
pub trait FExtension: Field + FrobeniusRing {
    fn embed(&self, x: &RatFunc) -> Self;

    fn base_field(&self) -> FiniteField;

    fn t_like(&self) -> Self {
        self.embed(&RatFunc::t(&self.base_field()))
    }
    fn from_a(&self, a: &PolyA) -> Self {
        self.embed(&RatFunc::from_poly(a.clone()))
    }
}

impl FExtension for RatFunc {
    fn embed(&self, x: &RatFunc) -> Self {
        x.clone()
    }
    fn base_field(&self) -> FiniteField {
        self.field().clone()
    }
}

impl_ring_ops!(RatFunc);
