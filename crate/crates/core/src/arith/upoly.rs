//! Dense univariate polynomials over an arbitrary [`Ring`], with the
//! subresultant remainder sequence for resultants.

use std::fmt;

use super::{ArithError, Ring};

/// Σ c_i v^i over R. `zero` fixes the coefficient ring even for the zero
/// polynomial; `var` is only used for printing.
#[derive(Clone)]
pub struct UPoly<R: Ring> {
    zero: R,
    c: Vec<R>,
    var: &'static str,
}

impl<R: Ring> PartialEq for UPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl<R: Ring> UPoly<R> {
    pub fn new(zero: &R, mut c: Vec<R>, var: &'static str) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { zero: zero.zero_like(), c, var }
    }
    pub fn zero(zero: &R, var: &'static str) -> Self {
        Self::new(zero, Vec::new(), var)
    }
    pub fn constant(c: R, var: &'static str) -> Self {
        let z = c.zero_like();
        Self::new(&z, vec![c], var)
    }
    /// The variable itself.
    pub fn var(one: &R, var: &'static str) -> Self {
        Self::new(one, vec![one.zero_like(), one.one_like()], var)
    }
    pub fn monomial(c: R, k: usize, var: &'static str) -> Self {
        let z = c.zero_like();
        let mut v = vec![z.clone(); k];
        v.push(c);
        Self::new(&z, v, var)
    }

    pub fn with_var(mut self, var: &'static str) -> Self {
        self.var = var;
        self
    }
    pub fn var_name(&self) -> &'static str {
        self.var
    }
    pub fn coeff_zero(&self) -> &R {
        &self.zero
    }
    pub fn coeffs(&self) -> &[R] {
        &self.c
    }
    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }
    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }
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
        let c = (0..n).map(|i| self.coeff(i).add_ref(&rhs.coeff(i))).collect();
        Self::new(&self.zero, c, self.var)
    }
    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| self.coeff(i).sub_ref(&rhs.coeff(i))).collect();
        Self::new(&self.zero, c, self.var)
    }
    pub fn neg(&self) -> Self {
        Self::new(&self.zero, self.c.iter().map(|x| x.neg_ref()).collect(), self.var)
    }
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.zero, self.var);
        }
        let mut out = vec![self.zero.clone(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(&self.zero, out, self.var)
    }
    pub fn scale(&self, s: &R) -> Self {
        Self::new(&self.zero, self.c.iter().map(|x| x.mul_ref(s)).collect(), self.var)
    }
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(self.zero.one_like(), self.var);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides each coefficient exactly by `s`.
    pub fn exact_div_scalar(&self, s: &R) -> Option<Self> {
        let c: Option<Vec<R>> = self.c.iter().map(|x| x.exact_div(s)).collect();
        Some(Self::new(&self.zero, c?, self.var))
    }

    /// Division with remainder by a divisor whose leading coefficient is a unit.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), ArithError> {
        let inv = d.lead().try_inv().ok_or(ArithError::NonUnitLeading)?;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return Ok((Self::zero(&self.zero, self.var), self.clone()));
        }
        let mut r = self.c.clone();
        let mut quot = vec![self.zero.clone(); r.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let c = top.mul_ref(&inv);
            for (i, di) in d.c.iter().enumerate() {
                r[k + i] = r[k + i].sub_ref(&c.mul_ref(di));
            }
            quot[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(&self.zero, quot, self.var), Self::new(&self.zero, r, self.var)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, ArithError> {
        Ok(self.divrem(d)?.1)
    }

    /// Pseudo-remainder: lc(d)^(deg self − deg d + 1)·self mod d, computed
    /// without divisions.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.c.len() - 1;
        let lc = d.lead();
        let mut r = self.clone();
        let mut steps = (self.c.len() as i64 - dd as i64).max(0);
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            let top = r.lead();
            let scaled = r.scale(&lc);
            let sub = Self::monomial(top, shift, self.var).mul(d);
            r = scaled.sub(&sub);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&lc.pow(steps as u64));
        }
        r
    }

    pub fn eval(&self, x: &R) -> R {
        self.c.iter().rev().fold(self.zero.clone(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn map<S: Ring>(&self, zero: &S, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(zero, self.c.iter().map(f).collect(), self.var)
    }

    /// Composition self(g).
    pub fn compose(&self, g: &Self) -> Self {
        self.c
            .iter()
            .rev()
            .fold(Self::zero(&self.zero, self.var), |acc, c| acc.mul(g).add(&Self::constant(c.clone(), self.var)))
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("gcd requires a field");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = a.lead().try_inv().expect("gcd requires a field");
        a.scale(&inv)
    }
}

/// res(f, g) = lc(f)^deg g ∏_{f(α)=0} g(α), by the subresultant PRS.
///
/// Works over any ring where the quotients the algorithm forms are exact
/// (any integral domain with [`Ring::exact_div`]).
pub fn resultant<R: Ring>(f: &UPoly<R>, g: &UPoly<R>) -> Result<R, ArithError> {
    if f.is_zero() && g.is_zero() {
        return Err(ArithError::ZeroInput("resultant"));
    }
    let zero = f.coeff_zero().clone();
    if f.is_zero() || g.is_zero() {
        return Ok(zero);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut negate = false;
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            negate = true;
        }
    }
    let one = zero.one_like();
    if b.degree() == Some(0) {
        let r = b.lead().pow(a.degree().unwrap() as u64);
        return Ok(if negate { r.neg_ref() } else { r });
    }
    let mut gg = one.clone();
    let mut h = one.clone();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u64;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let div = gg.mul_ref(&h.pow(delta));
        b = r.exact_div_scalar(&div).ok_or(ArithError::InexactDivision)?;
        gg = a.lead();
        h = if delta == 0 {
            h
        } else {
            gg.pow(delta).exact_div(&h.pow(delta - 1)).ok_or(ArithError::InexactDivision)?
        };
        match b.degree() {
            None => return Ok(zero),
            Some(0) => {
                let da = a.degree().unwrap() as u64;
                let num = b.lead().pow(da);
                let res = num.exact_div(&h.pow(da - 1)).ok_or(ArithError::InexactDivision)?;
                return Ok(if negate { res.neg_ref() } else { res });
            }
            Some(_) => {}
        }
    }
}

impl<R: Ring> fmt::Display for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            let simple = !cs.contains(['+', '-', '/', ' ']);
            parts.push(match (c.is_one(), mono.is_empty()) {
                (_, true) => {
                    if simple { cs } else { format!("({cs})") }
                }
                (true, false) => mono,
                (false, false) => {
                    if simple { format!("{cs}*{mono}") } else { format!("({cs})*{mono}") }
                }
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Ring> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FiniteField, PolyA, RatFunc};

    fn f2() -> FiniteField {
        FiniteField::new(2).unwrap()
    }

    #[test]
    fn linear_resultants() {
        let f = FiniteField::new(3).unwrap();
        let a = PolyA::new(&f, vec![1, 2]);
        let b = PolyA::new(&f, vec![2, 0, 1]);
        let one = PolyA::one(&f);
        // res(y - a, y - b) = a - b
        let ya = UPoly::new(&one, vec![a.neg_ref(), one.clone()], "y");
        let yb = UPoly::new(&one, vec![b.neg_ref(), one.clone()], "y");
        assert_eq!(resultant(&ya, &yb).unwrap(), &a - &b);
    }

    #[test]
    fn sign_convention() {
        // res(y^2 - t, y) = -t
        let f = FiniteField::new(3).unwrap();
        let t = PolyA::t(&f);
        let one = PolyA::one(&f);
        let zero = PolyA::zero(&f);
        let p = UPoly::new(&one, vec![t.neg_ref(), zero.clone(), one.clone()], "y");
        let y = UPoly::var(&one, "y");
        assert_eq!(resultant(&p, &y).unwrap(), t.neg_ref());
        // res(y, y^2 - t) = (-1)^(1·2)(-t)
        assert_eq!(resultant(&y, &p).unwrap(), t.neg_ref());
    }

    #[test]
    fn cubic_against_linear() {
        // q=2: res(y^3 + y + t, y + c) = c^3 + c + t (char 2)
        let f = f2();
        let t = PolyA::t(&f);
        let one = PolyA::one(&f);
        let zero = PolyA::zero(&f);
        let c = PolyA::new(&f, vec![1, 1, 1]);
        let cubic = UPoly::new(&one, vec![t.clone(), one.clone(), zero, one.clone()], "y");
        let lin = UPoly::new(&one, vec![c.clone(), one.clone()], "y");
        let expect = &(&c.pow_u64(3) + &c) + &t;
        assert_eq!(resultant(&cubic, &lin).unwrap(), expect);
    }

    #[test]
    fn both_zero_rejected() {
        let one = RatFunc::one(&f2());
        let z = UPoly::zero(&one, "y");
        assert!(resultant(&z, &z).is_err());
    }

    #[test]
    fn pseudo_remainder_identity() {
        let f = FiniteField::new(3).unwrap();
        let one = PolyA::one(&f);
        let a = UPoly::new(&one, vec![PolyA::t(&f), one.clone(), PolyA::new(&f, vec![1, 1]), one.clone()], "y");
        let d = UPoly::new(&one, vec![one.clone(), PolyA::new(&f, vec![0, 2])], "y");
        let r = a.pseudo_rem(&d);
        // lc(d)^3 a - r is divisible by d over F
        let to_f = |p: &UPoly<PolyA>| p.map(&RatFunc::one(&f), |c| RatFunc::from_poly(c.clone()));
        let lc3 = RatFunc::from_poly(PolyA::new(&f, vec![0, 2]).pow_u64(3));
        let lhs = to_f(&a).scale(&lc3).sub(&to_f(&r));
        assert!(lhs.rem(&to_f(&d)).unwrap().is_zero());
        assert!(r.degree() < d.degree());
    }
}
