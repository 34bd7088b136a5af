//! The finite field F_q, q = p^e, with table-driven arithmetic.
//!
//! An element is stored as the integer Σ c_i p^i, where (c_0, …, c_{e-1})
//! are its coordinates in the power basis of a fixed modulus over F_p. The
//! modulus is the smallest monic irreducible polynomial of degree e when
//! coefficient vectors are read as base-p integers with c_0 least
//! significant.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::{ArithError, FrobeniusRing, Ring};
use crate::impl_ring_ops;

/// Upper limit on q; the add/mul tables have q² entries.
pub const MAX_Q: u32 = 256;

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Handle to the tables of F_q. Cheap to clone.
#[derive(Clone)]
pub struct FiniteField(Arc<Tables>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.q == other.0.q
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Splits q into (p, e) with q = p^e, if q is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    if !is_prime(p) {
        return None;
    }
    let mut n = q;
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    (n == 1).then_some((p, e))
}

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

// Polynomial remainder over F_p, coefficient vectors low-to-high.
fn prime_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * lead_inv % p;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn irreducible_over_prime(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    if e <= 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=e/2
    for d in 1..=e / 2 {
        for low in 0..p.pow(d as u32) {
            let mut div = digits(low, p, d as u32);
            div.push(1);
            if prime_poly_rem(m, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn find_modulus(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    for low in 0..p.pow(e) {
        let mut m = digits(low, p, e);
        m.push(1);
        if m[0] != 0 && irreducible_over_prime(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build(q: u32) -> Result<Tables, ArithError> {
    let (p, e) = prime_power(q).ok_or(ArithError::NotPrimePower(q))?;
    if q > MAX_Q {
        return Err(ArithError::FieldTooLarge(q));
    }
    let modulus = find_modulus(p, e);
    let n = q as usize;
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    let mut neg = vec![0; n];
    for a in 0..q {
        let da = digits(a, p, e);
        neg[a as usize] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p);
        for b in 0..q {
            let db = digits(b, p, e);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a as usize * n + b as usize] = undigits(&s, p);
            let mut prod = vec![0u32; (2 * e - 1) as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let r = if e == 1 { prod } else { prime_poly_rem(&prod, &modulus, p) };
            let mut r = r;
            r.resize(e as usize, 0);
            mul[a as usize * n + b as usize] = undigits(&r, p);
        }
    }
    let mut inv = vec![0; n];
    for a in 1..q {
        inv[a as usize] = (1..q).find(|&b| mul[a as usize * n + b as usize] == 1).unwrap();
    }
    Ok(Tables { p, e, q, modulus, add, mul, neg, inv })
}

impl FiniteField {
    /// The field with q elements. Instances are cached per q.
    pub fn new(q: u32) -> Result<Self, ArithError> {
        static CACHE: OnceLock<Mutex<HashMap<u32, FiniteField>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(f) = guard.get(&q) {
            return Ok(f.clone());
        }
        let field = FiniteField(Arc::new(build(q)?));
        guard.insert(q, field.clone());
        Ok(field)
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.e
    }
    /// Coefficients (low to high) of the modulus defining F_q over F_p.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.0.add[(a * self.0.q + b) as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.0.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.mul[(a * self.0.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }
    /// Inverse of a nonzero element index.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.0.inv[a as usize]
    }
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elem(&self, v: u32) -> Fq {
        assert!(v < self.0.q, "element index out of range");
        Fq { field: self.clone(), v }
    }
    pub fn zero(&self) -> Fq {
        self.elem(0)
    }
    pub fn one(&self) -> Fq {
        self.elem(1)
    }
    /// Image of an integer under Z → F_p ⊂ F_q.
    pub fn from_i64(&self, n: i64) -> Fq {
        let p = self.0.p as i64;
        self.elem(n.rem_euclid(p) as u32)
    }
    /// The power-basis variable u (index p); only meaningful for e > 1.
    pub fn u(&self) -> Option<Fq> {
        (self.0.e > 1).then(|| self.elem(self.0.p))
    }
    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.0.q).map(move |v| self.elem(v))
    }

    /// Renders an element index: an integer for prime fields, otherwise a
    /// polynomial in `u`.
    pub fn format_index(&self, v: u32) -> String {
        let t = &self.0;
        if t.e == 1 {
            return v.to_string();
        }
        if v == 0 {
            return "0".into();
        }
        let d = digits(v, t.p, t.e);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "u".into(),
                _ => format!("u^{i}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        terms.join("+")
    }

    pub(crate) fn index_is_compound(&self, v: u32) -> bool {
        self.0.e > 1 && digits(v, self.0.p, self.0.e).iter().filter(|&&c| c != 0).count() > 1
    }
}

/// An element of F_q together with its field.
#[derive(Clone)]
pub struct Fq {
    field: FiniteField,
    v: u32,
}

impl Fq {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    /// The integer index Σ c_i p^i of this element.
    pub fn index(&self) -> u32 {
        self.v
    }
    /// Coordinates over F_p in the power basis of the modulus.
    pub fn coordinates(&self) -> Vec<u32> {
        digits(self.v, self.field.0.p, self.field.0.e)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.field == other.field
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_index(self.v))
    }
}
impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_index(self.v))
    }
}

impl Ring for Fq {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Fq { field: self.field.clone(), v: self.field.add(self.v, rhs.v) }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Fq { field: self.field.clone(), v: self.field.sub(self.v, rhs.v) }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Fq { field: self.field.clone(), v: self.field.mul(self.v, rhs.v) }
    }
    fn neg_ref(&self) -> Self {
        Fq { field: self.field.clone(), v: self.field.neg(self.v) }
    }
    fn try_inv(&self) -> Option<Self> {
        (self.v != 0).then(|| Fq { field: self.field.clone(), v: self.field.inv(self.v) })
    }
}

impl FrobeniusRing for Fq {
    fn q(&self) -> u64 {
        self.field.q() as u64
    }
    fn frobenius(&self) -> Self {
        self.clone()
    }
    fn qth_root(&self) -> Option<Self> {
        Some(self.clone())
    }
}

impl super::Field for Fq {}

impl_ring_ops!(Fq);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert!(FiniteField::new(12).is_err());
        assert!(FiniteField::new(512).is_err());
    }

    #[test]
    fn smallest_moduli() {
        assert_eq!(FiniteField::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        // x^2 + 1 is irreducible over F_3 and comes first.
        assert_eq!(FiniteField::new(9).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2, 3, 4, 5, 8, 9] {
            let k = FiniteField::new(q).unwrap();
            for a in k.elements() {
                assert_eq!(a.pow(q as u64), a, "x^q = x");
                if !a.is_zero() {
                    assert!((&a * &a.try_inv().unwrap()).is_one());
                }
                for b in k.elements() {
                    assert_eq!(&a + &b, &b + &a);
                    assert_eq!(&a * &b, &b * &a);
                    for c in k.elements() {
                        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                    }
                }
            }
        }
    }

    #[test]
    fn formatting() {
        let k = FiniteField::new(4).unwrap();
        assert_eq!(k.format_index(0), "0");
        assert_eq!(k.format_index(2), "u");
        assert_eq!(k.format_index(3), "u+1");
        let k3 = FiniteField::new(3).unwrap();
        assert_eq!(k3.from_i64(-1).to_string(), "2");
    }
}
