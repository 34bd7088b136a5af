//! Twisted polynomials R{τ} with τ·c = c^q·τ. Multiplication is composition
//! of the additive polynomials Σ a_i X^{q^i}.

use std::fmt;

use crate::arith::parse::parse_expr;
use crate::arith::{FrobeniusRing, Ring};
use crate::{ArithError, Error, Result};

#[derive(Clone)]
pub struct SkewPoly<R: FrobeniusRing> {
    zero: R,
    c: Vec<R>,
}

impl<R: FrobeniusRing> PartialEq for SkewPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

/// Frobenius images x, x^q, x^{q^2}, … of a coefficient vector, computed
/// incrementally.
struct FrobTower<R: FrobeniusRing> {
    levels: Vec<Vec<R>>,
}

impl<R: FrobeniusRing> FrobTower<R> {
    fn new(base: &[R]) -> Self {
        FrobTower { levels: vec![base.to_vec()] }
    }
    fn level(&mut self, k: usize) -> &[R] {
        while self.levels.len() <= k {
            let next = self.levels.last().unwrap().iter().map(|x| x.frobenius()).collect();
            self.levels.push(next);
        }
        &self.levels[k]
    }
}

impl<R: FrobeniusRing> SkewPoly<R> {
    pub fn new(zero: &R, mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        SkewPoly { zero: zero.zero_like(), c }
    }
    pub fn zero(zero: &R) -> Self {
        Self::new(zero, Vec::new())
    }
    pub fn constant(c: R) -> Self {
        let z = c.zero_like();
        Self::new(&z, vec![c])
    }
    pub fn one(zero: &R) -> Self {
        Self::constant(zero.one_like())
    }
    /// c·τ^k.
    pub fn monomial(c: R, k: usize) -> Self {
        let z = c.zero_like();
        let mut v = vec![z.clone(); k];
        v.push(c);
        Self::new(&z, v)
    }
    pub fn tau(zero: &R) -> Self {
        Self::monomial(zero.one_like(), 1)
    }

    pub fn coeff_zero(&self) -> &R {
        &self.zero
    }
    pub fn coeffs(&self) -> &[R] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }
    /// τ-degree; None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn lead(&self) -> R {
        self.c.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        Self::new(&self.zero, (0..n).map(|i| self.coeff(i).add_ref(&rhs.coeff(i))).collect())
    }
    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        Self::new(&self.zero, (0..n).map(|i| self.coeff(i).sub_ref(&rhs.coeff(i))).collect())
    }
    pub fn neg(&self) -> Self {
        Self::new(&self.zero, self.c.iter().map(|x| x.neg_ref()).collect())
    }
    /// c·self (scalar on the left).
    pub fn scale_left(&self, s: &R) -> Self {
        Self::new(&self.zero, self.c.iter().map(|x| s.mul_ref(x)).collect())
    }

    /// (ab)_k = Σ_{i+j=k} a_i b_j^{q^i}.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.zero);
        }
        let mut out = vec![self.zero.clone(); self.c.len() + rhs.c.len() - 1];
        let mut tower = FrobTower::new(&rhs.c);
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in tower.level(i).iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Self::new(&self.zero, out)
    }

    /// (quot, rem) with self = quot·b + rem and deg rem < deg b. Needs only
    /// inverses and Frobenius powers, so it always succeeds over a field.
    pub fn right_divmod(&self, b: &Self) -> Result<(Self, Self)> {
        let db = b.degree().ok_or(Error::ZeroDivisor)?;
        let mut r = self.clone();
        let Some(da) = r.degree().filter(|&d| d >= db) else {
            return Ok((Self::zero(&self.zero), r));
        };
        let mut quot = vec![self.zero.clone(); da - db + 1];
        let mut tower = FrobTower::new(&b.c);
        while let Some(dr) = r.degree().filter(|&d| d >= db) {
            let k = dr - db;
            let bk = tower.level(k);
            let c = r.lead().exact_div(&bk[db]).ok_or(Error::Arith(ArithError::DivisionByZero))?;
            let mut nc = r.c.clone();
            for (j, bj) in bk.iter().enumerate() {
                nc[k + j] = nc[k + j].sub_ref(&c.mul_ref(bj));
            }
            // leading term cancels by construction
            nc.truncate(dr);
            r = Self::new(&self.zero, nc);
            quot[k] = c;
        }
        Ok((Self::new(&self.zero, quot), r))
    }

    /// (quot, rem) with self = b·quot + rem, deg rem < deg b. Requires
    /// q^m-th roots (m = deg b) of the quotients of leading coefficients.
    pub fn left_divmod(&self, b: &Self) -> Result<(Self, Self)> {
        let db = b.degree().ok_or(Error::ZeroDivisor)?;
        let mut r = self.clone();
        let mut quot: Vec<R> = Vec::new();
        let q = self.zero.q();
        while let Some(dr) = r.degree().filter(|&d| d >= db) {
            let k = dr - db;
            let mut c = r.lead().exact_div(&b.lead()).ok_or(Error::Arith(ArithError::DivisionByZero))?;
            for _ in 0..db {
                c = c.qth_root().ok_or(Error::RootExtractionFailure(q.pow(db as u32)))?;
            }
            let term = Self::monomial(c.clone(), k);
            let mut nc = r.sub(&b.mul(&term)).c;
            nc.truncate(dr);
            r = Self::new(&self.zero, nc);
            if quot.len() <= k {
                quot.resize(k + 1, self.zero.clone());
            }
            quot[k] = c;
        }
        Ok((Self::new(&self.zero, quot), r))
    }

    /// Σ a_i x^{q^i}.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.zero.clone();
        let mut xp = x.clone();
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                xp = xp.frobenius();
            }
            acc = acc.add_ref(&a.mul_ref(&xp));
        }
        acc
    }

    pub fn map<S: FrobeniusRing>(&self, zero: &S, f: impl Fn(&R) -> S) -> SkewPoly<S> {
        SkewPoly::new(zero, self.c.iter().map(f).collect())
    }
}

/// Parses the `c0*T^0 + c1*T^1 + …` syntax; `coeff_vars` are the names
/// usable inside coefficients (e.g. `t`, `u`), `T` is τ.
pub fn parse_skew<R: FrobeniusRing>(s: &str, zero: &R, coeff_vars: &[(&str, R)]) -> Result<SkewPoly<R>> {
    let expr = parse_expr(s)?;
    let one = SkewPoly::one(zero);
    let tau = SkewPoly::tau(zero);
    let v = expr.eval(&one, &|name| {
        if name == "T" {
            return Some(tau.clone());
        }
        coeff_vars.iter().find(|(n, _)| *n == name).map(|(_, c)| SkewPoly::constant(c.clone()))
    })?;
    Ok(v)
}

fn simple(s: &str) -> bool {
    !s.contains(['+', '-', '/', ' ', '*'])
}

impl<R: FrobeniusRing> fmt::Display for SkewPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(format!("T^{i}"));
                continue;
            }
            let cs = c.to_string();
            if simple(&cs) {
                parts.push(format!("{cs}*T^{i}"));
            } else {
                parts.push(format!("({cs})*T^{i}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: FrobeniusRing> fmt::Debug for SkewPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<R: FrobeniusRing> Ring for SkewPoly<R> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.zero)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.zero)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn try_inv(&self) -> Option<Self> {
        (self.c.len() == 1).then(|| self.c[0].try_inv().map(Self::constant)).flatten()
    }
    /// Exact right quotient.
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        match self.right_divmod(rhs) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }
}

impl<R: FrobeniusRing> std::ops::Add for SkewPoly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        SkewPoly::add(&self, &rhs)
    }
}
impl<'a, R: FrobeniusRing> std::ops::Add<&'a SkewPoly<R>> for &'a SkewPoly<R> {
    type Output = SkewPoly<R>;
    fn add(self, rhs: &'a SkewPoly<R>) -> SkewPoly<R> {
        SkewPoly::add(self, rhs)
    }
}
impl<'a, R: FrobeniusRing> std::ops::Sub<&'a SkewPoly<R>> for &'a SkewPoly<R> {
    type Output = SkewPoly<R>;
    fn sub(self, rhs: &'a SkewPoly<R>) -> SkewPoly<R> {
        SkewPoly::sub(self, rhs)
    }
}
impl<'a, R: FrobeniusRing> std::ops::Mul<&'a SkewPoly<R>> for &'a SkewPoly<R> {
    type Output = SkewPoly<R>;
    fn mul(self, rhs: &'a SkewPoly<R>) -> SkewPoly<R> {
        SkewPoly::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FiniteField, RatFunc};

    fn f2() -> FiniteField {
        FiniteField::new(2).unwrap()
    }

    fn sk(s: &str) -> SkewPoly<RatFunc> {
        let f = f2();
        parse_skew(s, &RatFunc::zero(&f), &[("t", RatFunc::t(&f))]).unwrap()
    }

    #[test]
    fn commutation_rule() {
        let f = FiniteField::new(3).unwrap();
        let z = RatFunc::zero(&f);
        let c = RatFunc::t(&f);
        let lhs = SkewPoly::tau(&z).mul(&SkewPoly::constant(c.clone()));
        assert_eq!(lhs, SkewPoly::monomial(c.frobenius(), 1));
        assert_ne!(lhs, SkewPoly::constant(c).mul(&SkewPoly::tau(&z)));
    }

    #[test]
    fn product_and_division() {
        let a = sk("T + 1");
        let b = sk("T + t");
        let ab = a.mul(&b);
        assert_eq!(ab, sk("T^2 + (t^2+1)*T + t"));
        assert_eq!(ab.right_divmod(&b).unwrap(), (a.clone(), sk("0")));
        assert_eq!(ab.left_divmod(&a).unwrap(), (b.clone(), sk("0")));
        assert_eq!(b.right_divmod(&ab).unwrap(), (sk("0"), b.clone()));
        assert_eq!(ab.right_divmod(&ab).unwrap(), (sk("1"), sk("0")));
        assert_eq!(sk("1").mul(&b), b);
        assert!(matches!(a.right_divmod(&sk("0")), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn left_division_needs_roots() {
        assert_eq!(sk("T").left_divmod(&sk("T")).unwrap(), (sk("1"), sk("0")));
        assert!(matches!(sk("t*T").left_divmod(&sk("T")), Err(Error::RootExtractionFailure(2))));
    }

    #[test]
    fn display_roundtrip() {
        let p = sk("t*T^0 + (t+1)*T^1 + T^2");
        assert_eq!(p.to_string(), "t*T^0 + (t+1)*T^1 + T^2");
        assert_eq!(sk(&p.to_string()), p);
    }

    #[test]
    fn evaluation_is_composition() {
        let a = sk("T^2 + t*T + 1");
        let b = sk("(t+1)*T + t^3");
        let x = RatFunc::new(crate::arith::parse::parse_poly(&f2(), "t^2+1").unwrap(), crate::arith::PolyA::t(&f2()))
            .unwrap();
        assert_eq!(a.mul(&b).eval(&x), a.eval(&b.eval(&x)));
    }
}
