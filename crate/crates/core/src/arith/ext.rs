//! Quotient rings L = F[x]/(m) over F = F_q(t). When m is certified
//! irreducible, L is a finite separable extension field of F.

use std::fmt;
use std::sync::Arc;

use super::factor::is_irreducible;
use super::poly::PolyA;
use super::fq::FiniteField;
use super::ratfunc::{FExtension, RatFunc};
use super::roots::{primitive_part, roots_in_f};
use super::upoly::UPoly;
use super::{ArithError, Field, FrobeniusRing, Ring};
use crate::impl_ring_ops;

#[derive(Debug)]
struct ExtData {
    modulus: UPoly<RatFunc>,
    is_field: bool,
}

/// Handle on F[x]/(m). Cloning is cheap.
#[derive(Clone, Debug)]
pub struct ExtRing(Arc<ExtData>);

impl PartialEq for ExtRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}

impl ExtRing {
    /// F[x]/(m) for monic m of degree ≥ 1, without any irreducibility check.
    pub fn quotient(m: UPoly<RatFunc>) -> Result<Self, ArithError> {
        let m = make_monic(m)?;
        Ok(ExtRing(Arc::new(ExtData { modulus: m, is_field: false })))
    }

    /// F[x]/(m) after certifying that m is irreducible over F.
    pub fn field(m: UPoly<RatFunc>) -> Result<Self, ArithError> {
        let m = make_monic(m)?;
        certify_irreducible(&m)?;
        Ok(ExtRing(Arc::new(ExtData { modulus: m, is_field: true })))
    }

    pub fn modulus(&self) -> &UPoly<RatFunc> {
        &self.0.modulus
    }
    pub fn degree(&self) -> usize {
        self.0.modulus.degree().unwrap()
    }
    pub fn is_field(&self) -> bool {
        self.0.is_field
    }
    fn base_zero(&self) -> RatFunc {
        self.0.modulus.coeff_zero().clone()
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem { ring: self.clone(), c: vec![self.base_zero(); self.degree()] }
    }
    pub fn one(&self) -> ExtElem {
        self.from_base(&self.base_zero().one_like())
    }
    /// The class of x.
    pub fn gen(&self) -> ExtElem {
        self.from_upoly(&UPoly::var(&self.base_zero().one_like(), "x"))
    }
    pub fn from_base(&self, a: &RatFunc) -> ExtElem {
        let mut e = self.zero();
        e.c[0] = a.clone();
        e
    }
    pub fn from_upoly(&self, p: &UPoly<RatFunc>) -> ExtElem {
        let r = p.rem(&self.0.modulus).expect("monic modulus");
        let mut c = r.into_coeffs();
        c.resize(self.degree(), self.base_zero());
        ExtElem { ring: self.clone(), c }
    }
}

fn make_monic(m: UPoly<RatFunc>) -> Result<UPoly<RatFunc>, ArithError> {
    match m.degree() {
        None | Some(0) => Err(ArithError::ZeroInput("extension modulus of degree ≥ 1")),
        Some(_) => {
            let inv = Field::inv(&m.lead());
            Ok(m.scale(&inv).with_var("x"))
        }
    }
}

/// Sufficient tests for irreducibility over F of a monic m: the rational
/// root test in degree ≤ 3, Eisenstein at a prime of the constant term, or
/// irreducibility of a specialization t ↦ c over F_q of the same degree.
fn certify_irreducible(m: &UPoly<RatFunc>) -> Result<(), ArithError> {
    let n = m.degree().unwrap();
    if n == 1 {
        return Ok(());
    }
    if n <= 3 {
        return if roots_in_f(m).is_empty() { Ok(()) } else { Err(ArithError::Reducible(m.to_string())) };
    }
    if !roots_in_f(m).is_empty() {
        return Err(ArithError::Reducible(m.to_string()));
    }
    let c = primitive_part(m);
    let field = c[0].field().clone();
    if !c[0].is_zero() {
        for (p, e) in super::factor::factor(&c[0])?.factors {
            if e == 1 && !p.divides(&c[n]) && c[1..n].iter().all(|x| p.divides(x)) {
                return Ok(());
            }
        }
    }
    for v in 0..field.q() {
        if c[n].eval(v) == 0 {
            continue;
        }
        let red = PolyA::new(&field, c.iter().map(|x| x.eval(v)).collect());
        if is_irreducible(&red) {
            return Ok(());
        }
    }
    Err(ArithError::Uncertified(m.to_string()))
}

/// Element of F[x]/(m), stored as the coefficient vector of its reduced
/// representative (length deg m).
#[derive(Clone)]
pub struct ExtElem {
    ring: ExtRing,
    c: Vec<RatFunc>,
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ring == other.ring
    }
}

impl ExtElem {
    pub fn ring(&self) -> &ExtRing {
        &self.ring
    }
    pub fn coords(&self) -> &[RatFunc] {
        &self.c
    }
    pub fn to_upoly(&self) -> UPoly<RatFunc> {
        UPoly::new(&self.ring.base_zero(), self.c.clone(), "x")
    }
    /// The element as a member of F, if it lies there.
    pub fn as_base(&self) -> Option<&RatFunc> {
        self.c[1..].iter().all(|x| x.is_zero()).then_some(&self.c[0])
    }

    /// Characteristic polynomial of multiplication by self, over F.
    pub fn charpoly(&self) -> UPoly<RatFunc> {
        let n = self.ring.degree();
        let mut cols = Vec::with_capacity(n);
        let mut basis = self.ring.one();
        let x = self.ring.gen();
        for _ in 0..n {
            cols.push((self * &basis).c);
            basis = &basis * &x;
        }
        // rows i, columns j: entry = coordinate i of self * x^j
        let m: Vec<Vec<RatFunc>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        berkowitz(&m, &self.ring.base_zero())
    }

    pub fn norm(&self) -> RatFunc {
        let cp = self.charpoly();
        let n = self.ring.degree();
        let c0 = cp.coeff(0);
        if n % 2 == 1 {
            c0.neg_ref()
        } else {
            c0
        }
    }

    /// Minimal polynomial over F (monic), found as the first linear relation
    /// among powers of self.
    pub fn minpoly(&self) -> UPoly<RatFunc> {
        let zero = self.ring.base_zero();
        let n = self.ring.degree();
        let mut powers: Vec<Vec<RatFunc>> = Vec::new();
        let mut cur = self.ring.one();
        for k in 0..=n {
            powers.push(cur.c.clone());
            if let Some(rel) = linear_relation(&powers, &zero) {
                let mut coeffs = rel;
                let inv = Field::inv(&coeffs[k]);
                for c in coeffs.iter_mut() {
                    *c = &*c * &inv;
                }
                return UPoly::new(&zero, coeffs, "x");
            }
            cur = &cur * self;
        }
        unreachable!("n+1 vectors in an n-dimensional space are dependent")
    }
}

/// Nontrivial relation Σ λ_k v_k = 0 with the last vector involved, or None
/// when the vectors are independent.
fn linear_relation(vecs: &[Vec<RatFunc>], zero: &RatFunc) -> Option<Vec<RatFunc>> {
    let k = vecs.len();
    let n = vecs[0].len();
    // columns are the vectors; solve for kernel of the n×k matrix
    let mut rows: Vec<Vec<RatFunc>> = (0..n).map(|i| (0..k).map(|j| vecs[j][i].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Field::inv(&rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..k {
                    let d = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() == k {
        return None;
    }
    let free = (0..k).find(|c| !pivots.contains(c)).unwrap();
    let mut sol = vec![zero.clone(); k];
    sol[free] = zero.one_like();
    for (i, &pc) in pivots.iter().enumerate() {
        sol[pc] = rows[i][free].neg_ref();
    }
    Some(sol)
}

/// Characteristic polynomial det(x·I − M) by Berkowitz's division-free
/// algorithm, over any commutative ring.
pub fn berkowitz<R: Ring>(m: &[Vec<R>], zero: &R) -> UPoly<R> {
    let n = m.len();
    let one = zero.one_like();
    // vector of coefficients, highest degree first
    let mut v: Vec<R> = vec![one.clone()];
    for k in 0..n {
        // leading principal submatrix of size k+1: a = m[k][k], R row, C col
        let a = m[k][k].clone();
        let row: Vec<R> = (0..k).map(|j| m[k][j].clone()).collect();
        let col: Vec<R> = (0..k).map(|i| m[i][k].clone()).collect();
        // Toeplitz entries: 1, -a, -R C, -R A C, -R A^2 C, ...
        let mut t = vec![one.clone(), a.neg_ref()];
        let mut w = col.clone();
        for _ in 0..k {
            let rc = row.iter().zip(&w).fold(zero.clone(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)));
            t.push(rc.neg_ref());
            w = (0..k)
                .map(|i| (0..k).fold(zero.clone(), |acc, j| acc.add_ref(&m[i][j].mul_ref(&w[j]))))
                .collect();
        }
        let mut nv = vec![zero.clone(); k + 2];
        for (i, nvi) in nv.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *nvi = nvi.add_ref(&t[i - j].mul_ref(vj));
                }
            }
        }
        v = nv;
    }
    v.reverse();
    UPoly::new(zero, v, "x")
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_upoly().to_string();
        write!(f, "{}", s.replace(" + ", "+"))
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod ({})", self, self.ring.modulus())
    }
}

impl Ring for ExtElem {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        ExtElem { ring: self.ring.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        ExtElem { ring: self.ring.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let n = self.ring.degree();
        let zero = self.ring.base_zero();
        let mut prod = vec![zero.clone(); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = &prod[i + j] + &(a * b);
                }
            }
        }
        // reduce with the monic modulus, top degree down
        let m = self.ring.modulus().coeffs();
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::replace(&mut prod[k], zero.clone());
            if c.is_zero() {
                continue;
            }
            for (i, mi) in m[..n].iter().enumerate() {
                if !mi.is_zero() {
                    prod[k - n + i] = &prod[k - n + i] - &(&c * mi);
                }
            }
        }
        prod.truncate(n);
        ExtElem { ring: self.ring.clone(), c: prod }
    }
    fn neg_ref(&self) -> Self {
        ExtElem { ring: self.ring.clone(), c: self.c.iter().map(|a| a.neg_ref()).collect() }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // s·a + u·m = g; invertible iff g is a unit
        let (g, s) = xgcd_left(&self.to_upoly(), self.ring.modulus());
        (g.degree() == Some(0)).then(|| {
            let inv = Field::inv(&g.lead());
            self.ring.from_upoly(&s.scale(&inv))
        })
    }
}

/// (g, s) with s·a ≡ g (mod m), g = gcd(a, m) up to a unit.
fn xgcd_left(a: &UPoly<RatFunc>, m: &UPoly<RatFunc>) -> (UPoly<RatFunc>, UPoly<RatFunc>) {
    let zero = a.coeff_zero().clone();
    let (mut r0, mut r1) = (a.clone(), m.clone());
    let (mut s0, mut s1) = (UPoly::constant(zero.one_like(), "x"), UPoly::zero(&zero, "x"));
    while !r1.is_zero() {
        let (qt, r) = r0.divrem(&r1).expect("field coefficients");
        let s = s0.sub(&qt.mul(&s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

impl FrobeniusRing for ExtElem {
    fn q(&self) -> u64 {
        self.ring.base_zero().q()
    }
    /// y with y^q = self, using that 1, x^q, …, x^{q(n−1)} is an F-basis
    /// of a separable extension: self = Σ b_i x^{qi} has a q-th root iff
    /// every b_i ∈ F does.
    fn qth_root(&self) -> Option<Self> {
        if let Some(b) = self.as_base() {
            return b.qth_root().map(|r| self.ring.from_base(&r));
        }
        let n = self.ring.degree();
        let xq = self.ring.gen().frobenius();
        let mut vecs = Vec::with_capacity(n + 1);
        let mut cur = self.ring.one();
        for _ in 0..n {
            vecs.push(cur.c.clone());
            cur = &cur * &xq;
        }
        vecs.push(self.neg_ref().c);
        let rel = linear_relation(&vecs, &self.ring.base_zero())?;
        if rel[n].is_zero() {
            return None;
        }
        let inv = Field::inv(&rel[n]);
        let mut out = self.ring.zero();
        let x = self.ring.gen();
        let mut xp = self.ring.one();
        for b in &rel[..n] {
            let bi = b * &inv;
            let root = bi.qth_root()?;
            out = &out + &(&xp * &self.ring.from_base(&root));
            xp = &xp * &x;
        }
        Some(out)
    }
}

impl Field for ExtElem {}

impl FExtension for ExtElem {
    fn embed(&self, x: &RatFunc) -> Self {
        self.ring.from_base(x)
    }
    fn base_field(&self) -> FiniteField {
        self.ring.base_zero().field().clone()
    }
}

impl_ring_ops!(ExtElem);
