//! Places of F = F_q(t), normalized log-absolute values (base q), Weil
//! heights of tuples and heights of algebraic elements.
//!
//! Over F every place has n_v = 1: finite places P with |x|_P =
//! q^{−deg P·v_P(x)} and the infinite place with |x|_∞ = q^{deg x}.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::arith::factor::factor;
use crate::arith::roots::roots_in_f;
use crate::arith::{ExtElem, ExtRing, PolyA, RatFunc, Ring, UPoly};
use crate::{rat, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// Keyed by a monic irreducible polynomial.
    Finite(PolyA),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap(),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// log_q |x|_v.
pub fn log_abs(x: &RatFunc, v: &Place) -> Result<Rational> {
    let deg = match v {
        Place::Infinity => x.degree().ok_or(Error::LogOfZero)?,
        Place::Finite(p) => -(p.deg_i64()) * x.valuation(p).ok_or(Error::LogOfZero)?,
    };
    Ok(rat(deg, 1))
}

/// The finite places where x has nonzero valuation.
pub fn support(x: &RatFunc) -> Result<BTreeSet<PolyA>> {
    if x.is_zero() {
        return Err(Error::LogOfZero);
    }
    let mut out = BTreeSet::new();
    for part in [x.num(), x.den()] {
        if !part.is_constant() {
            out.extend(factor(part)?.factors.into_iter().map(|(p, _)| p));
        }
    }
    Ok(out)
}

/// Σ_v max_i log|x_i|_v over the places where some coordinate is not a
/// unit, plus ∞. Zero coordinates are skipped.
pub fn weil_height(tuple: &[RatFunc]) -> Result<Rational> {
    let nonzero: Vec<&RatFunc> = tuple.iter().filter(|x| !x.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::ZeroTuple);
    }
    let mut places: BTreeSet<PolyA> = BTreeSet::new();
    for x in &nonzero {
        places.extend(support(x)?);
    }
    let mut total = Rational::zero();
    for v in places.into_iter().map(Place::Finite).chain([Place::Infinity]) {
        let mut best: Option<Rational> = None;
        for x in &nonzero {
            let l = log_abs(x, &v)?;
            if best.as_ref().is_none_or(|b| l > *b) {
                best = Some(l);
            }
        }
        total += best.unwrap();
    }
    Ok(total)
}

/// A nonzero element of F kept as unit · ∏ P^{e_P}, so that large powers
/// (J-invariants) never need to be expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub unit: u32,
    pub exps: BTreeMap<PolyA, i64>,
}

impl Factored {
    pub fn new(x: &RatFunc) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        let mut exps = BTreeMap::new();
        let mut unit = 1;
        for (part, sign) in [(x.num(), 1i64), (x.den(), -1)] {
            let fac = factor(part)?;
            if sign == 1 {
                unit = fac.unit;
            }
            for (p, e) in fac.factors {
                *exps.entry(p).or_insert(0) += sign * e as i64;
            }
        }
        Ok(Factored { unit, exps })
    }

    pub fn powi(&self, k: i64, field: &crate::arith::FiniteField) -> Self {
        let unit = if k >= 0 { field.pow(self.unit, k as u64) } else { field.inv(field.pow(self.unit, k.unsigned_abs())) };
        Factored { unit, exps: self.exps.iter().map(|(p, e)| (p.clone(), e * k)).collect() }
    }

    pub fn mul(&self, other: &Self, field: &crate::arith::FiniteField) -> Self {
        let mut exps = self.exps.clone();
        for (p, e) in &other.exps {
            *exps.entry(p.clone()).or_insert(0) += e;
        }
        exps.retain(|_, e| *e != 0);
        Factored { unit: field.mul(self.unit, other.unit), exps }
    }

    pub fn log_abs(&self, v: &Place) -> Rational {
        match v {
            Place::Infinity => rat(self.exps.iter().map(|(p, e)| e * p.deg_i64()).sum(), 1),
            Place::Finite(p) => rat(-p.deg_i64() * self.exps.get(p).copied().unwrap_or(0), 1),
        }
    }

    pub fn expand(&self, field: &crate::arith::FiniteField) -> RatFunc {
        let mut x = RatFunc::from_poly(PolyA::constant(field, self.unit));
        for (p, e) in &self.exps {
            x = &x * &RatFunc::from_poly(p.clone()).powi(*e);
        }
        x
    }
}

/// Weil height of a tuple given in factored form (None for zero entries).
pub fn weil_height_factored(tuple: &[Option<Factored>]) -> Result<Rational> {
    let nonzero: Vec<&Factored> = tuple.iter().flatten().collect();
    if nonzero.is_empty() {
        return Err(Error::ZeroTuple);
    }
    let places: BTreeSet<&PolyA> = nonzero.iter().flat_map(|x| x.exps.keys()).collect();
    let mut total = Rational::zero();
    for v in places.into_iter().map(|p| Place::Finite(p.clone())).chain([Place::Infinity]) {
        total += nonzero.iter().map(|x| x.log_abs(&v)).max().unwrap();
    }
    Ok(total)
}

/// Height of a root of a primitive irreducible polynomial over A:
/// (1/n)·max_i deg a_i. At every place the Gauss norm is multiplicative, so
/// this is the Weil height of any root.
pub fn algebraic_height(minpoly: &UPoly<PolyA>) -> Result<Rational> {
    let n = minpoly.degree().ok_or(Error::ZeroTuple)?;
    if n == 0 {
        return Err(Error::Invalid("minimal polynomial must have degree >= 1".into()));
    }
    let field = minpoly.coeff_zero().field().clone();
    let content = minpoly.coeffs().iter().fold(PolyA::zero(&field), |g, c| g.gcd(c));
    if !content.is_constant() {
        return Err(Error::NotPrimitive);
    }
    let over_f = minpoly.map(&RatFunc::zero(&field), |c| RatFunc::from_poly(c.clone()));
    if n > 1 {
        if n <= 3 {
            if !roots_in_f(&over_f).is_empty() {
                return Err(Error::Reducible);
            }
        } else {
            match ExtRing::field(over_f) {
                Ok(_) => {}
                Err(crate::ArithError::Reducible(_)) => return Err(Error::Reducible),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let top = minpoly.coeffs().iter().map(|c| c.deg_i64()).max().unwrap();
    Ok(rat(top, n as i64))
}

/// Weil height of an element of a finite extension of F, via its minimal
/// polynomial over F.
pub fn ext_height(x: &ExtElem) -> Result<Rational> {
    if let Some(b) = x.as_base() {
        return if b.is_zero() { Ok(Rational::zero()) } else { weil_height(&[RatFunc::one(b.field()), b.clone()]) };
    }
    let mp = x.minpoly();
    let prim = crate::arith::roots::primitive_part(&mp);
    let deg = prim.iter().map(|c| c.deg_i64()).max().unwrap();
    let n = mp.degree().unwrap() as i64;
    Ok(rat(deg, n))
}
