//! Rank-two Drinfeld modular polynomials: ψ, κ, interpolation sets, the
//! computation of Φ_t by resultants and by interpolation, and bound
//! evaluators for h(Φ_m).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::factor::factor;
use crate::arith::{resultant, ExtRing, FExtension, Field, FiniteField, MPoly, PolyA, RatFunc, Ring, UPoly};
use crate::bounds::{lemma64_resolve, log_q, round_up};
use crate::drinfeld::DrinfeldModule;
use crate::isogeny::pushforward;
use crate::skew::SkewPoly;
use crate::{rat, Error, Rational, Result};

fn check_nonconstant_monic(m: &PolyA) -> Result<()> {
    if m.is_constant() {
        return Err(Error::Invalid("m must be nonconstant".into()));
    }
    if !m.is_monic() {
        return Err(Error::Invalid("m must be monic".into()));
    }
    Ok(())
}

/// |m|·∏_{P|m}(1 + 1/|P|).
pub fn psi(m: &PolyA) -> Result<BigInt> {
    check_nonconstant_monic(m)?;
    let q = BigInt::from(m.field().q());
    let mut out = BigInt::one();
    for (p, e) in factor(m)?.factors {
        let np = q.pow(p.degree().unwrap() as u32);
        out *= np.pow(e - 1) * (&np + 1u32);
    }
    Ok(out)
}

/// Σ_{P|m} deg P / |P|.
pub fn kappa(m: &PolyA) -> Result<Rational> {
    check_nonconstant_monic(m)?;
    let q = BigInt::from(m.field().q());
    let mut out = Rational::zero();
    for (p, _) in factor(m)?.factors {
        let d = p.degree().unwrap();
        out += Rational::new(BigInt::from(d), q.pow(d as u32));
    }
    Ok(out)
}

/// Σ c_ij X^i Y^j with c_ij ∈ F.
#[derive(Clone, PartialEq)]
pub struct BivarPoly {
    field: FiniteField,
    terms: BTreeMap<(u32, u32), RatFunc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseTerm {
    pub i: u32,
    pub j: u32,
    pub coeff: String,
}

impl BivarPoly {
    pub fn zero(field: &FiniteField) -> Self {
        BivarPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: &RatFunc) {
        let e = self.terms.entry((i, j)).or_insert_with(|| RatFunc::zero(&self.field));
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn from_terms(field: &FiniteField, terms: impl IntoIterator<Item = ((u32, u32), RatFunc)>) -> Self {
        let mut p = Self::zero(field);
        for ((i, j), c) in terms {
            p.add_term(i, j, &c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), RatFunc> {
        &self.terms
    }
    pub fn coeff(&self, i: u32, j: u32) -> RatFunc {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| RatFunc::zero(&self.field))
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }
    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_poly())
    }

    /// P(Y, X).
    pub fn swap(&self) -> Self {
        BivarPoly { field: self.field.clone(), terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap()
    }

    /// Leading coefficient in X is the constant 1.
    pub fn is_monic_x(&self) -> bool {
        let Some(d) = self.degree_x() else { return false };
        self.terms.iter().filter(|(k, _)| k.0 == d).all(|(k, c)| k.1 == 0 && c.is_one())
    }
    pub fn is_monic_y(&self) -> bool {
        self.swap().is_monic_x()
    }

    /// P(X, y) as coefficients in X.
    pub fn specialize_y(&self, y: &RatFunc) -> UPoly<RatFunc> {
        let z = RatFunc::zero(&self.field);
        let mut c = vec![z.clone(); self.degree_x().map_or(0, |d| d as usize + 1)];
        for (&(i, j), a) in &self.terms {
            c[i as usize] = &c[i as usize] + &(a * &y.pow(j as u64));
        }
        UPoly::new(&z, c, "X")
    }

    pub fn eval<R: FExtension>(&self, x: &R, y: &R) -> R {
        let mut acc = x.zero_like();
        for (&(i, j), c) in &self.terms {
            acc = acc.add_ref(&x.embed(c).mul_ref(&x.pow(i as u64)).mul_ref(&y.pow(j as u64)));
        }
        acc
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        Self::from_terms(&self.field, self.terms.iter().map(|(&k, a)| (k, a * c)))
    }

    pub fn sparse(&self) -> Vec<SparseTerm> {
        self.terms.iter().rev().map(|(&(i, j), c)| SparseTerm { i, j, coeff: c.to_string() }).collect()
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = [("X", i), ("Y", j)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            let cs = c.to_string();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{cs}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) if cs.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '^') => {
                    write!(f, "{cs}*{}", mono.join("*"))?
                }
                (false, false) => write!(f, "({cs})*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// log max_c |c|_∞.
pub fn poly_height(f: &BivarPoly) -> Result<Rational> {
    let h = f.terms.values().map(|c| c.degree().unwrap()).max().ok_or(Error::ZeroTuple)?;
    Ok(rat(h, 1))
}

/// S_n: all Σ_{i=−n}^{n} α_i t^i, ordered by the base-q integer whose
/// digits are α_{−n}, …, α_n (α_{−n} least significant).
pub fn build_sn(field: &FiniteField, n: u32) -> Vec<RatFunc> {
    let q = field.q();
    let len = 2 * n as usize + 1;
    let count = (q as usize).pow(len as u32);
    let den = PolyA::monomial(field, 1, n as usize);
    (0..count)
        .map(|mut idx| {
            // base-q digits of idx are the numerator coefficients, lowest first
            let mut c = vec![0u32; len];
            for slot in c.iter_mut() {
                *slot = (idx % q as usize) as u32;
                idx /= q as usize;
            }
            RatFunc::new(PolyA::new(field, c), den.clone()).unwrap()
        })
        .collect()
}

/// Smallest n with y ∈ S_n, if any.
pub fn sn_radius(y: &RatFunc) -> Option<u32> {
    if y.is_zero() {
        return Some(0);
    }
    let k = y.den().degree().unwrap();
    if *y.den() != PolyA::monomial(y.field(), 1, k) {
        return None;
    }
    let d = y.degree().unwrap();
    Some(k.max(d.max(0) as usize) as u32)
}

/// For the given points y_0..y_d: the largest log-height of a coefficient
/// of any T_k = ∏_{s≠k}(Y − y_s), and the smallest Σ_{s≠k} log|y_k − y_s|.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TkBounds {
    pub d: usize,
    pub n: u32,
    pub max_coeff_log: i64,
    pub min_spacing_log: i64,
    pub coeff_ok: bool,
    pub spacing_ok: bool,
}

pub fn tk_bounds(d: usize, points: &[RatFunc]) -> Result<TkBounds> {
    if points.len() != d + 1 {
        return Err(Error::Invalid(format!("need {} points, got {}", d + 1, points.len())));
    }
    let field = points[0].field().clone();
    let n = points.iter().map(sn_radius).collect::<Option<Vec<_>>>().ok_or(Error::NotContained("point outside every S_n".into()))?;
    let n = n.into_iter().max().unwrap();
    if (d as u64) > (field.q() as u64).pow(2 * n + 1) - 1 {
        return Err(Error::Invalid(format!("d = {d} exceeds |S_{n}| - 1")));
    }
    check_distinct(points)?;
    let mut max_coeff_log = i64::MIN;
    let mut min_spacing_log = i64::MAX;
    for k in 0..=d {
        let tk = tk_poly(points, k);
        if let Some(h) = tk.coeffs().iter().filter(|c| !c.is_zero()).map(|c| c.degree().unwrap()).max() {
            max_coeff_log = max_coeff_log.max(h);
        }
        let sp: i64 = (0..=d).filter(|&s| s != k).map(|s| (&points[k] - &points[s]).degree().unwrap()).sum();
        min_spacing_log = min_spacing_log.min(sp);
    }
    let nd = n as i64 * d as i64;
    Ok(TkBounds { d, n, max_coeff_log, min_spacing_log, coeff_ok: max_coeff_log <= nd, spacing_ok: min_spacing_log >= -nd })
}

fn check_distinct(points: &[RatFunc]) -> Result<()> {
    for (a, x) in points.iter().enumerate() {
        if points[..a].contains(x) {
            return Err(Error::Invalid(format!("duplicate interpolation point {x}")));
        }
    }
    Ok(())
}

fn tk_poly(points: &[RatFunc], k: usize) -> UPoly<RatFunc> {
    let one = points[0].one_like();
    let mut tk = UPoly::constant(one.clone(), "Y");
    for (s, y) in points.iter().enumerate() {
        if s != k {
            tk = tk.mul(&UPoly::new(&one.zero_like(), vec![y.neg_ref(), one.clone()], "Y"));
        }
    }
    tk
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub poly: BivarPoly,
    /// max_k h(P(X, y_k)).
    pub b: i64,
    /// Radius n of the smallest S_n holding every point, if any.
    pub n: Option<u32>,
    /// h(P) ≤ B + 2nd, when n is known.
    pub bound_holds: Option<bool>,
}

/// The unique P with deg_Y P ≤ d and P(X, y_k) equal to the given
/// evaluations.
pub fn lagrange_reconstruct(evals: &[(RatFunc, UPoly<RatFunc>)], d: usize) -> Result<Reconstruction> {
    if evals.len() != d + 1 {
        return Err(Error::Invalid(format!("need {} evaluations, got {}", d + 1, evals.len())));
    }
    let points: Vec<RatFunc> = evals.iter().map(|(y, _)| y.clone()).collect();
    check_distinct(&points)?;
    if evals.iter().any(|(_, p)| p.degree().unwrap_or(0) > d) {
        return Err(Error::Invalid(format!("an evaluation has X-degree above {d}")));
    }
    let field = points[0].field().clone();
    let mut poly = BivarPoly::zero(&field);
    for (k, (yk, pk)) in evals.iter().enumerate() {
        let tk = tk_poly(&points, k);
        let denom = tk.eval(yk);
        let inv = Field::inv(&denom);
        for (r, c) in pk.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c * &inv;
            for (j, a) in tk.coeffs().iter().enumerate() {
                poly.add_term(r as u32, j as u32, &(&s * a));
            }
        }
    }
    let b = evals
        .iter()
        .flat_map(|(_, p)| p.coeffs().iter().filter(|c| !c.is_zero()).map(|c| c.degree().unwrap()))
        .max()
        .unwrap_or(i64::MIN);
    let n = points.iter().map(sn_radius).collect::<Option<Vec<_>>>().map(|v| v.into_iter().max().unwrap());
    let bound_holds = match (n, poly_height(&poly)) {
        (Some(n), Ok(h)) => Some(h <= rat(b + 2 * n as i64 * d as i64, 1)),
        (Some(_), Err(_)) => Some(true),
        (None, _) => None,
    };
    Ok(Reconstruction { poly, b, n, bound_holds })
}

const TSX: &[&str] = &["t", "s", "X"];

/// Φ_t by resultants over the generic module g_1 = s, g_2 = 1 (so
/// j = s^{q+1}): Res_y(y^{q+1} + s·y + t, X − g′_1(s, y)^{q+1}) with
/// g′_1 = s^q − y + y^{q²} the pushforward coefficient along τ − y.
pub fn compute_phi_t(q: u32) -> Result<BivarPoly> {
    let field = FiniteField::new(q)?;
    let mz = MPoly::zero(&field, TSX);
    let one = MPoly::constant(&field, TSX, 1);
    let t = MPoly::var(&field, TSX, 0);
    let s = MPoly::var(&field, TSX, 1);
    let x = MPoly::var(&field, TSX, 2);
    let qq = q as usize;
    let mut pc = vec![mz.clone(); qq + 2];
    pc[0] = t;
    pc[1] = s.clone();
    pc[qq + 1] = one.clone();
    let p = UPoly::new(&mz, pc, "y");
    let g1 = UPoly::monomial(s.pow(q as u64), 0, "y")
        .sub(&UPoly::var(&one, "y"))
        .add(&UPoly::monomial(one.clone(), qq * qq, "y"))
        .rem(&p)?;
    let mut h = UPoly::constant(one.clone(), "y");
    for _ in 0..=qq {
        h = h.mul(&g1).rem(&p)?;
    }
    let g = UPoly::constant(x, "y").sub(&h);
    let res = resultant(&p, &g)?;
    let e = q + 1;
    let mut out = BivarPoly::zero(&field);
    for (exps, c) in res.terms() {
        let (a, b, i) = (exps[0], exps[1], exps[2]);
        if b % e != 0 {
            return Err(Error::Inconsistent(format!("resultant term t^{a}*s^{b}*X^{i} is not a polynomial in s^{e}")));
        }
        out.add_term(i, b / e, &RatFunc::from_poly(PolyA::monomial(&field, c, a as usize)));
    }
    check_phi_shape(&out, e)?;
    Ok(out)
}

fn check_phi_shape(p: &BivarPoly, e: u32) -> Result<()> {
    if p.degree_x() != Some(e) || p.degree_y() != Some(e) {
        return Err(Error::Inconsistent(format!("degrees ({:?}, {:?}), expected {e}", p.degree_x(), p.degree_y())));
    }
    if !p.is_monic_x() || !p.is_monic_y() {
        return Err(Error::Inconsistent("not monic in both variables".into()));
    }
    if !p.is_symmetric() {
        return Err(Error::Inconsistent("not symmetric".into()));
    }
    if !p.is_integral() {
        return Err(Error::Inconsistent("coefficients are not in A".into()));
    }
    Ok(())
}

/// A rank-2 module with first J-invariant j0: (j0, j0^q), or (0, 1).
pub fn module_with_j(j0: &RatFunc) -> DrinfeldModule<RatFunc> {
    let g = if j0.is_zero() { vec![j0.clone(), j0.one_like()] } else { vec![j0.clone(), j0.pow(j0.field().q() as u64)] };
    DrinfeldModule::new(g).expect("nonzero leading coefficient")
}

/// Φ_t(X, j0) = ∏_y (X − j(φ′_y)) over the kernel parameters y of a module
/// with invariant j0, as the characteristic polynomial of j′ acting on
/// F[y]/(g_2 y^{q+1} + g_1 y + t).
pub fn phi_t_specialized(j0: &RatFunc) -> Result<UPoly<RatFunc>> {
    let phi = module_with_j(j0);
    let z = j0.zero_like();
    let q = j0.field().q() as usize;
    let g = phi.coeffs();
    let mut pc = vec![z.clone(); q + 2];
    pc[0] = RatFunc::t(j0.field());
    pc[1] = g[0].clone();
    pc[q + 1] = g[1].clone();
    let ring = ExtRing::quotient(UPoly::new(&z, pc, "x"))?;
    let y = ring.gen();
    let phi_l = DrinfeldModule::new(g.iter().map(|c| ring.from_base(c)).collect())?;
    let f = SkewPoly::new(&ring.zero(), vec![y.neg_ref(), ring.one()]);
    let phi2 = pushforward(&phi_l, &f)?;
    let j2 = phi2.j_invariants().j[0].clone();
    Ok(j2.charpoly().with_var("X"))
}

/// Φ_t rebuilt from the specializations at the first q+2 points of S_1.
pub fn phi_t_by_interpolation(q: u32) -> Result<Reconstruction> {
    let field = FiniteField::new(q)?;
    let d = q as usize + 1;
    let points: Vec<RatFunc> = build_sn(&field, 1).into_iter().take(d + 1).collect();
    let evals = points.iter().map(|y| Ok((y.clone(), phi_t_specialized(y)?))).collect::<Result<Vec<_>>>()?;
    let rec = lagrange_reconstruct(&evals, d)?;
    check_phi_shape(&rec.poly, q + 1)?;
    Ok(rec)
}

/// ψ(m)·max(q³, lemma64_resolve(a, q)) + 2ψ(m)·log ψ(m), with
/// a = ((q²−1)/2)·deg m + q + (log ψ(m) + 1)/2; rounded up.
pub fn prop65_bound(m: &PolyA) -> Result<f64> {
    let q = m.field().q() as u64;
    let psi_m = psi(m)?.to_f64().ok_or(Error::Invalid("psi(m) too large".into()))?;
    let a = prop65_a(m)?;
    let inner = lemma64_resolve(a, q)?.max((q * q * q) as f64);
    Ok(round_up(psi_m * inner + 2.0 * psi_m * log_q(psi_m, q)))
}

pub fn prop65_a(m: &PolyA) -> Result<f64> {
    let q = m.field().q() as u64;
    let psi_m = psi(m)?.to_f64().ok_or(Error::Invalid("psi(m) too large".into()))?;
    let deg = m.degree().unwrap() as f64;
    Ok(round_up((q * q - 1) as f64 / 2.0 * deg + q as f64 + 0.5 * (log_q(psi_m, q) + 1.0)))
}

/// ((q²−1)/2)·ψ(m)·(deg m − 2κ(m)).
pub fn hsia_main_term(m: &PolyA) -> Result<Rational> {
    let q = m.field().q() as i64;
    let psi_m = Rational::from_integer(psi(m)?);
    Ok(rat(q * q - 1, 2) * psi_m * (rat(m.deg_i64(), 1) - rat(2, 1) * kappa(m)?))
}

/// ((q²+4)/2 + ε)·ψ(m)·deg m, rounded up.
pub fn asymptotic_bound(m: &PolyA, eps: f64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    let q = m.field().q() as f64;
    let psi_m = psi(m)?.to_f64().ok_or(Error::Invalid("psi(m) too large".into()))?;
    Ok(round_up(((q * q + 4.0) / 2.0 + eps) * psi_m * m.degree().unwrap() as f64))
}

/// One row of the bounds table for m.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    pub m: String,
    pub psi: String,
    pub kappa: String,
    pub h_phi: Option<String>,
    pub prop65_bound: f64,
    pub hsia_main_term: String,
    pub asymptotic_bound: f64,
    pub rounded: &'static str,
}

pub fn bounds_row(m: &PolyA, h_phi: Option<&Rational>, eps: f64) -> Result<BoundsRow> {
    Ok(BoundsRow {
        m: m.to_string(),
        psi: psi(m)?.to_string(),
        kappa: kappa(m)?.to_string(),
        h_phi: h_phi.map(|h| h.to_string()),
        prop65_bound: prop65_bound(m)?,
        hsia_main_term: hsia_main_term(m)?.to_string(),
        asymptotic_bound: asymptotic_bound(m, eps)?,
        rounded: "up",
    })
}
