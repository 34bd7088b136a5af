//! Drinfeld F_q[t]-modules of rank r in generic characteristic:
//! φ_t = t + g_1τ + ⋯ + g_rτ^r.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::parse::parse_ratfunc;
use crate::arith::{ExtElem, FExtension, FiniteField, PolyA, RatFunc, Ring};
use crate::heights::{ext_height, weil_height, weil_height_factored, Factored, Place};
use crate::skew::SkewPoly;
use crate::{rat, Error, Rational, Result, MAX_RANK};

#[derive(Clone, PartialEq)]
pub struct DrinfeldModule<R: FExtension> {
    g: Vec<R>,
}

/// d = lcm(q−1, q²−1, …, q^r−1).
pub fn lcm_d(q: u64, r: usize) -> u64 {
    (1..=r as u32).fold(1u64, |acc, k| acc.lcm(&(q.pow(k) - 1)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JInvariants<R> {
    pub d: u64,
    pub j: Vec<R>,
}

impl<R: FExtension> DrinfeldModule<R> {
    /// g = (g_1, …, g_r).
    pub fn new(g: Vec<R>) -> Result<Self> {
        let r = g.len();
        if !(2..=MAX_RANK).contains(&r) {
            return Err(Error::BadRank(r));
        }
        if g[r - 1].is_zero() {
            return Err(Error::ZeroLeading);
        }
        Ok(DrinfeldModule { g })
    }

    /// Reads g_1..g_r off φ_t, checking that the constant term is t.
    pub fn from_phi_t(phi_t: &SkewPoly<R>) -> Result<Self> {
        let t = phi_t.coeff_zero().t_like();
        if phi_t.coeff(0) != t {
            return Err(Error::Inconsistent(format!("constant term of {phi_t} is not t")));
        }
        Self::new(phi_t.coeffs()[1..].to_vec())
    }

    pub fn rank(&self) -> usize {
        self.g.len()
    }
    pub fn q(&self) -> u64 {
        self.g[0].q()
    }
    pub fn coeffs(&self) -> &[R] {
        &self.g
    }
    pub fn zero_elem(&self) -> R {
        self.g[0].zero_like()
    }

    pub fn phi_t(&self) -> SkewPoly<R> {
        let mut c = vec![self.g[0].t_like()];
        c.extend(self.g.iter().cloned());
        SkewPoly::new(&self.zero_elem(), c)
    }

    /// φ_a by Horner's rule in φ_t.
    pub fn phi_of(&self, a: &PolyA) -> SkewPoly<R> {
        let z = self.zero_elem();
        let phi_t = self.phi_t();
        let field = a.field();
        let mut acc = SkewPoly::zero(&z);
        for &c in a.coeffs().iter().rev() {
            let cst = z.from_a(&PolyA::constant(field, c));
            acc = acc.mul(&phi_t).add(&SkewPoly::constant(cst));
        }
        acc
    }

    pub fn j_invariants(&self) -> JInvariants<R> {
        let q = self.q();
        let r = self.rank();
        let d = lcm_d(q, r);
        let gr = self.g[r - 1].pow(d / (q.pow(r as u32) - 1));
        let inv = gr.try_inv().expect("g_r is a unit");
        let j = (1..=r)
            .map(|k| self.g[k - 1].pow(d / (q.pow(k as u32) - 1)).mul_ref(&inv))
            .collect();
        JInvariants { d, j }
    }

    /// The isomorphic module c⁻¹φc: g_i ↦ c^{q^i−1} g_i.
    pub fn twist(&self, c: &R) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroTwist);
        }
        let q = self.q();
        let g = self
            .g
            .iter()
            .enumerate()
            .map(|(i, gi)| gi.mul_ref(&c.pow(q.pow(i as u32 + 1) - 1)))
            .collect();
        Self::new(g)
    }
}

/// Local and global graded heights of a module over F.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradedHeight {
    #[serde(serialize_with = "ser_rat")]
    pub total: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub finite: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub infinite: Rational,
    /// (place, h_G^v) for every place with a nonzero contribution, ∞ last.
    #[serde(serialize_with = "ser_local")]
    pub local: Vec<(Place, Rational)>,
}

pub(crate) fn ser_rat<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_local<S: serde::Serializer>(v: &[(Place, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (p, h) in v {
        seq.serialize_element(&BTreeMap::from([("place", p.to_string()), ("h", h.to_string())]))?;
    }
    seq.end()
}

impl DrinfeldModule<RatFunc> {
    pub fn field(&self) -> &FiniteField {
        self.g[0].field()
    }

    fn factored_coeffs(&self) -> Result<Vec<Option<Factored>>> {
        self.g.iter().map(|g| if g.is_zero() { Ok(None) } else { Factored::new(g).map(Some) }).collect()
    }

    /// h_G^v = max_i log|g_i|_v / (q^i − 1) over nonzero g_i.
    pub fn local_height(&self, v: &Place) -> Result<Rational> {
        let fc = self.factored_coeffs()?;
        Ok(local_from_factored(&fc, self.q(), v))
    }

    pub fn graded_height(&self) -> Result<GradedHeight> {
        let fc = self.factored_coeffs()?;
        let q = self.q();
        let places: BTreeSet<&PolyA> = fc.iter().flatten().flat_map(|x| x.exps.keys()).collect();
        let mut local = Vec::new();
        let mut finite = Rational::zero();
        for p in places {
            let v = Place::Finite(p.clone());
            let h = local_from_factored(&fc, q, &v);
            if !h.is_zero() {
                finite += &h;
                local.push((v, h));
            }
        }
        let infinite = local_from_factored(&fc, q, &Place::Infinity);
        if !infinite.is_zero() {
            local.push((Place::Infinity, infinite.clone()));
        }
        Ok(GradedHeight { total: &finite + &infinite, finite, infinite, local })
    }

    pub fn height_g(&self) -> Result<Rational> {
        Ok(self.graded_height()?.total)
    }

    /// Weil height of the J-invariant tuple, kept factored throughout.
    pub fn height_j(&self) -> Result<Rational> {
        weil_height_factored(&self.j_factored()?)
    }

    pub fn j_factored(&self) -> Result<Vec<Option<Factored>>> {
        let q = self.q();
        let r = self.rank();
        let d = lcm_d(q, r) as i64;
        let field = self.field().clone();
        let fc = self.factored_coeffs()?;
        let inv_gr = fc[r - 1].as_ref().unwrap().powi(-(d / (q.pow(r as u32) as i64 - 1)), &field);
        Ok(fc
            .iter()
            .enumerate()
            .map(|(i, x)| x.as_ref().map(|x| x.powi(d / (q.pow(i as u32 + 1) as i64 - 1), &field).mul(&inv_gr, &field)))
            .collect())
    }

    /// h(φ) = max_i h(g_i).
    pub fn naive_height(&self) -> Result<Rational> {
        let one = RatFunc::one(self.field());
        let mut best = Rational::zero();
        for g in self.g.iter().filter(|g| !g.is_zero()) {
            best = best.max(weil_height(&[one.clone(), g.clone()])?);
        }
        Ok(best)
    }

    /// Stable reduction at a finite place ⇔ h_G^v ∈ ℤ.
    pub fn stable_at(&self, p: &PolyA) -> Result<bool> {
        Ok(self.local_height(&Place::Finite(p.clone()))?.is_integer())
    }

    /// Finite part of the graded height, which is the finite part of the
    /// Taguchi height when reduction is everywhere stable.
    pub fn taguchi_finite(&self) -> Result<Rational> {
        let gh = self.graded_height()?;
        for (v, h) in &gh.local {
            if matches!(v, Place::Finite(_)) && !h.is_integer() {
                return Err(Error::StableReductionRequired(v.to_string(), h.to_string()));
            }
        }
        Ok(gh.finite)
    }

    /// Literal `{q:2, r:2, g:["t+1","1"]}`.
    pub fn to_literal(&self) -> String {
        let gs: Vec<String> = self.g.iter().map(|g| format!("\"{g}\"")).collect();
        format!("{{q:{}, r:{}, g:[{}]}}", self.q(), self.rank(), gs.join(","))
    }

    pub fn parse_literal(s: &str) -> Result<Self> {
        let lit: ModuleLiteral =
            serde_json::from_str(&quote_bare_keys(s)).map_err(|e| Error::Invalid(format!("module literal: {e}")))?;
        let field = FiniteField::new(lit.q)?;
        if lit.g.len() != lit.r {
            return Err(Error::Invalid(format!("r = {} but {} coefficients given", lit.r, lit.g.len())));
        }
        let g = lit.g.iter().map(|s| parse_ratfunc(&field, s)).collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(g)
    }
}

fn local_from_factored(fc: &[Option<Factored>], q: u64, v: &Place) -> Rational {
    fc.iter()
        .enumerate()
        .filter_map(|(i, x)| x.as_ref().map(|x| x.log_abs(v) / rat(q.pow(i as u32 + 1) as i64 - 1, 1)))
        .max()
        .expect("g_r is nonzero")
}

impl DrinfeldModule<ExtElem> {
    /// h(j) for a rank-2 module over a finite extension of F.
    pub fn height_j_rank2(&self) -> Result<Rational> {
        if self.rank() != 2 {
            return Err(Error::BadRank(self.rank()));
        }
        ext_height(&self.j_invariants().j[0])
    }
}

#[derive(Deserialize)]
struct ModuleLiteral {
    q: u32,
    r: usize,
    g: Vec<String>,
}

/// Wraps bare object keys in quotes so the literal becomes JSON.
fn quote_bare_keys(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 8);
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut in_str = false;
    while i < chars.len() {
        let c = chars[i];
        if in_str {
            out.push(c);
            if c == '"' {
                in_str = false;
            }
            i += 1;
            continue;
        }
        if c == '"' {
            in_str = true;
            out.push(c);
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let mut k = i;
            while k < chars.len() && chars[k].is_whitespace() {
                k += 1;
            }
            if k < chars.len() && chars[k] == ':' {
                out.push('"');
                out.push_str(&word);
                out.push('"');
            } else {
                out.push_str(&word);
            }
            continue;
        }
        out.push(c);
        i += 1;
    }
    out
}

impl<R: FExtension> fmt::Display for DrinfeldModule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi_t = {}", self.phi_t())
    }
}

impl<R: FExtension> fmt::Debug for DrinfeldModule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(q: u32, g: &[&str]) -> DrinfeldModule<RatFunc> {
        let f = FiniteField::new(q).unwrap();
        DrinfeldModule::new(g.iter().map(|s| parse_ratfunc(&f, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn phi_of_is_multiplicative() {
        let m = module(2, &["t+1", "1"]);
        let f = m.field().clone();
        let t2 = crate::arith::parse::parse_poly(&f, "t^2").unwrap();
        let p = m.phi_of(&t2);
        assert_eq!(p, m.phi_t().mul(&m.phi_t()));
        assert_eq!(p.degree(), Some(4));
        assert_eq!(p.coeff(0), RatFunc::from_poly(t2));
        assert_eq!(m.phi_of(&PolyA::one(&f)), SkewPoly::one(&RatFunc::zero(&f)));
    }

    #[test]
    fn j_invariant_examples() {
        let m = module(2, &["t", "1"]);
        let j = m.j_invariants();
        assert_eq!(j.d, 3);
        assert_eq!(j.j[0].to_string(), "t^3");
        assert!(module(3, &["0", "t"]).j_invariants().j[0].is_zero());
        let m3 = module(2, &["1", "1", "1"]);
        let j3 = m3.j_invariants();
        assert_eq!(j3.d, 21);
        assert!(j3.j.iter().all(|x| x.is_one()));
    }

    #[test]
    fn graded_height_examples() {
        let m = module(2, &["t", "1"]);
        assert_eq!(m.height_g().unwrap(), rat(1, 1));
        assert_eq!(m.height_j().unwrap(), rat(3, 1));
        assert_eq!(module(3, &["1", "2"]).height_g().unwrap(), rat(0, 1));
        assert_eq!(module(2, &["0", "1"]).height_j().unwrap(), rat(0, 1));
        let tw = m.twist(&RatFunc::t(m.field())).unwrap();
        assert_eq!(tw.to_literal(), "{q:2, r:2, g:[\"t^2\",\"t^3\"]}");
        assert_eq!(tw.height_g().unwrap(), rat(1, 1));
        assert_eq!(tw.j_invariants(), m.j_invariants());
        let back = tw.twist(&RatFunc::t(m.field()).inv().unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(matches!(m.twist(&RatFunc::zero(m.field())), Err(Error::ZeroTwist)));
    }

    #[test]
    fn stability_and_finite_part() {
        let f = FiniteField::new(2).unwrap();
        let t = PolyA::t(&f);
        assert!(module(2, &["t", "1"]).stable_at(&t).unwrap());
        assert!(module(2, &["1", "t"]).stable_at(&t).unwrap());
        let unstable = module(2, &["1", "1/t"]);
        assert_eq!(unstable.local_height(&Place::Finite(t.clone())).unwrap(), rat(1, 3));
        assert!(!unstable.stable_at(&t).unwrap());
        assert!(matches!(unstable.taguchi_finite(), Err(Error::StableReductionRequired(..))));
        assert_eq!(module(2, &["t", "1"]).taguchi_finite().unwrap(), rat(0, 1));
        assert_eq!(module(2, &["1", "t^3"]).taguchi_finite().unwrap(), rat(0, 1));
        assert_eq!(module(2, &["t", "t^3"]).taguchi_finite().unwrap(), rat(-1, 1));
    }

    #[test]
    fn literal_roundtrip() {
        let m = DrinfeldModule::parse_literal("{q:2, r:2, g:[\"t+1\",\"1\"]}").unwrap();
        assert_eq!(m, module(2, &["t+1", "1"]));
        assert_eq!(DrinfeldModule::parse_literal(&m.to_literal()).unwrap(), m);
        assert!(DrinfeldModule::parse_literal("{q:2, r:3, g:[\"t\",\"1\"]}").is_err());
        assert!(matches!(
            DrinfeldModule::parse_literal("{q:2, r:2, g:[\"t\",\"0\"]}"),
            Err(Error::ZeroLeading)
        ));
    }
}
