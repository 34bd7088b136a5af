//! Dense univariate polynomials over F_q: the ring A = F_q[t].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::fq::{FiniteField, Fq};
use super::{FrobeniusRing, Ring};
use crate::impl_ring_ops;

/// An element of A = F_q[t], coefficients stored low to high with no
/// trailing zeros.
#[derive(Clone)]
pub struct PolyA {
    field: FiniteField,
    c: Vec<u32>,
}

impl PolyA {
    pub fn new(field: &FiniteField, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        PolyA { field: field.clone(), c: coeffs }
    }
    pub fn zero(field: &FiniteField) -> Self {
        PolyA { field: field.clone(), c: Vec::new() }
    }
    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, 1)
    }
    pub fn t(field: &FiniteField) -> Self {
        PolyA { field: field.clone(), c: vec![0, 1] }
    }
    pub fn constant(field: &FiniteField, c: u32) -> Self {
        Self::new(field, vec![c])
    }
    pub fn from_fq(c: &Fq) -> Self {
        Self::constant(c.field(), c.index())
    }
    /// c·t^k
    pub fn monomial(field: &FiniteField, c: u32, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }
    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree with deg 0 = −1 (only used where the zero polynomial is
    /// handled separately by the caller).
    pub fn deg_i64(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn scale(&self, s: u32) -> Self {
        if s == 0 {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        PolyA { field: f.clone(), c: self.c.iter().map(|&x| f.mul(x, s)).collect() }
    }

    /// Multiplies by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        PolyA { field: self.field.clone(), c }
    }

    /// Returns (leading coefficient, monic associate). Zero maps to (0, 0).
    pub fn monic_parts(&self) -> (u32, Self) {
        if self.is_zero() {
            return (0, self.clone());
        }
        let lc = self.lead();
        (lc, self.scale(self.field.inv(lc)))
    }
    pub fn monic(&self) -> Self {
        self.monic_parts().1
    }

    fn add_sub(&self, rhs: &Self, sub: bool) -> Self {
        let f = &self.field;
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeff(i);
            let b = rhs.coeff(i);
            out.push(if sub { f.sub(a, b) } else { f.add(a, b) });
        }
        Self::new(f, out)
    }

    fn mul_poly(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = &self.field;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut r = self.c.clone();
        let mut quot = vec![0u32; r.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = r[k + dd];
            if top == 0 {
                continue;
            }
            let c = f.mul(top, inv);
            quot[k] = c;
            for (i, &di) in d.c.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, di));
            }
        }
        r.truncate(dd);
        (Self::new(f, quot), Self::new(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient, or None when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, u) with s·self + u·other = g and g monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut u0, mut u1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&qt * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let u = &u0 - &(&qt * &u1);
            u0 = std::mem::replace(&mut u1, u);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let inv = f.inv(r0.lead());
        (r0.scale(inv), s0.scale(inv), u0.scale(inv))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        (self * other).div_exact(&self.gcd(other)).unwrap().monic()
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        Ring::pow(self, e)
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        acc
    }

    /// Evaluates at an element index of F_q.
    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_i64(i as i64).index(), a))
            .collect();
        Self::new(f, c)
    }

    /// Applies the Frobenius x ↦ x^q coefficientwise-and-in-t, i.e. a(t) ↦ a(t)^q = a(t^q).
    pub fn qth_power(&self) -> Self {
        let q = self.field.q() as usize;
        let mut c = vec![0; if self.is_zero() { 0 } else { (self.c.len() - 1) * q + 1 }];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * q] = a;
        }
        Self::new(&self.field, c)
    }

    /// The q-th root when every exponent is a multiple of q.
    pub fn qth_root_poly(&self) -> Option<Self> {
        let q = self.field.q() as usize;
        if self.c.iter().enumerate().any(|(i, &a)| a != 0 && i % q != 0) {
            return None;
        }
        Some(Self::new(&self.field, self.c.iter().step_by(q).copied().collect()))
    }

    /// p-th root (the characteristic) when every exponent is a multiple of p.
    pub(crate) fn pth_root_poly(&self) -> Option<Self> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.c.iter().enumerate().any(|(i, &a)| a != 0 && i % p != 0) {
            return None;
        }
        // c^(1/p) = c^(q/p) in F_q.
        let e = (f.q() / f.characteristic()) as u64;
        Some(Self::new(f, self.c.iter().step_by(p).map(|&a| f.pow(a, e)).collect()))
    }

    /// Content-free test over F_q: nothing to do beyond being nonzero.
    pub fn lead_fq(&self) -> Fq {
        self.field.elem(self.lead())
    }

    /// All monic polynomials of exact degree d, in lexicographic order of
    /// the lower coefficients (c_0 varies fastest).
    pub fn monics_of_degree(field: &FiniteField, d: usize) -> impl Iterator<Item = PolyA> + '_ {
        let q = field.q() as u64;
        let count = q.checked_pow(d as u32).expect("enumeration too large");
        (0..count).map(move |mut idx| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((idx % q) as u32);
                idx /= q;
            }
            c.push(1);
            PolyA::new(field, c)
        })
    }
}

impl PartialEq for PolyA {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}
impl Eq for PolyA {}

impl Hash for PolyA {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.c.hash(state);
    }
}

/// Orders by degree, then by coefficients from the top down.
impl Ord for PolyA {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}
impl PartialOrd for PolyA {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = self.field.format_index(c);
            let cs = if self.field.index_is_compound(c) { format!("({cs})") } else { cs };
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            match (c == 1, mono.is_empty()) {
                (_, true) => write!(f, "{cs}")?,
                (true, false) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{cs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ring for PolyA {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add_sub(rhs, false)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_sub(rhs, true)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_poly(rhs)
    }
    fn neg_ref(&self) -> Self {
        let f = &self.field;
        PolyA { field: f.clone(), c: self.c.iter().map(|&x| f.neg(x)).collect() }
    }
    fn try_inv(&self) -> Option<Self> {
        (self.c.len() == 1).then(|| Self::constant(&self.field, self.field.inv(self.c[0])))
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        self.div_exact(rhs)
    }
}

impl FrobeniusRing for PolyA {
    fn q(&self) -> u64 {
        self.field.q() as u64
    }
    fn frobenius(&self) -> Self {
        self.qth_power()
    }
    fn qth_root(&self) -> Option<Self> {
        self.qth_root_poly()
    }
}

impl_ring_ops!(PolyA);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u32, c: &[u32]) -> PolyA {
        PolyA::new(&FiniteField::new(q).unwrap(), c.to_vec())
    }

    #[test]
    fn degree_and_trim() {
        assert_eq!(p(2, &[1, 0, 0]).degree(), Some(0));
        assert_eq!(p(2, &[0, 0]).degree(), None);
        let a = p(3, &[1, 2, 1]);
        let b = p(3, &[2, 1]);
        assert_eq!((&a * &b).degree(), Some(3));
    }

    #[test]
    fn division_roundtrip() {
        let a = p(3, &[1, 2, 0, 1, 2, 1]);
        let b = p(3, &[2, 0, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_and_xgcd() {
        let f = FiniteField::new(2).unwrap();
        let t = PolyA::t(&f);
        let one = PolyA::one(&f);
        let a = &t * &(&t + &one);
        let b = &(&t + &one) * &(&(&t * &t) + &(&t + &one));
        assert_eq!(a.gcd(&b), &t + &one);
        let (g, s, u) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&u * &b), g);
    }

    #[test]
    fn display() {
        assert_eq!(p(3, &[1, 2, 0, 1]).to_string(), "t^3+2*t+1");
        assert_eq!(p(2, &[]).to_string(), "0");
        assert_eq!(p(4, &[3, 1]).to_string(), "t+(u+1)");
        assert_eq!(p(4, &[0, 2]).to_string(), "u*t");
    }

    #[test]
    fn frobenius_is_additive() {
        let a = p(3, &[1, 2, 0, 1]);
        let b = p(3, &[2, 2, 1]);
        assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
        assert_eq!(a.frobenius(), a.pow(3));
        assert_eq!(a.frobenius().qth_root(), Some(a));
    }
}
