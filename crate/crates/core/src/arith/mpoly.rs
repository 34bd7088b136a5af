//! Sparse multivariate polynomials over F_q in lexicographic order.

use std::collections::BTreeMap;
use std::fmt;

use super::fq::FiniteField;
use super::poly::PolyA;
use super::Ring;
use crate::impl_ring_ops;

/// Σ c_e x^e, exponent vectors compared lexicographically (variable 0 most
/// significant). Coefficients are F_q element indices; no zero entries.
#[derive(Clone)]
pub struct MPoly {
    field: FiniteField,
    names: &'static [&'static str],
    terms: BTreeMap<Vec<u32>, u32>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl MPoly {
    pub fn zero(field: &FiniteField, names: &'static [&'static str]) -> Self {
        MPoly { field: field.clone(), names, terms: BTreeMap::new() }
    }
    pub fn constant(field: &FiniteField, names: &'static [&'static str], c: u32) -> Self {
        let mut p = Self::zero(field, names);
        if c != 0 {
            p.terms.insert(vec![0; names.len()], c);
        }
        p
    }
    pub fn var(field: &FiniteField, names: &'static [&'static str], i: usize) -> Self {
        let mut e = vec![0; names.len()];
        e[i] = 1;
        Self::term(field, names, e, 1)
    }
    pub fn term(field: &FiniteField, names: &'static [&'static str], exps: Vec<u32>, c: u32) -> Self {
        let mut p = Self::zero(field, names);
        if c != 0 {
            p.terms.insert(exps, c);
        }
        p
    }
    /// Embeds a(t) with t mapped to variable `i`.
    pub fn from_poly_in(a: &PolyA, names: &'static [&'static str], i: usize) -> Self {
        let mut p = Self::zero(a.field(), names);
        for (k, &c) in a.coeffs().iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; names.len()];
                e[i] = k as u32;
                p.terms.insert(e, c);
            }
        }
        p
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.names.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u32)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: u32) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, u32)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// Exact quotient by multivariate division; None if not divisible.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (de, dc) = d.leading()?;
        let de = de.clone();
        let inv = self.field.inv(dc);
        let mut r = self.clone();
        let mut quot = Self::zero(&self.field, self.names);
        while let Some((re, rc)) = r.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let c = self.field.mul(rc, inv);
            for (e, &dcoef) in &d.terms {
                let ne: Vec<u32> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                r.add_term(ne, self.field.neg(self.field.mul(c, dcoef)));
            }
            quot.add_term(shift, c);
        }
        Some(quot)
    }

    /// Collects by powers of variable `i`: returns map exponent → coefficient
    /// polynomial with that variable removed (set to exponent 0).
    pub fn coefficients_in(&self, i: usize) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[i], 0);
            out.entry(k).or_insert_with(|| Self::zero(&self.field, self.names)).add_term(e2, c);
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if c != 1 || e.iter().all(|&x| x == 0) {
                factors.push(self.field.format_index(c));
            }
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(self.names[k].to_string()),
                    _ => factors.push(format!("{}^{}", self.names[k], x)),
                }
            }
            parts.push(factors.join("*"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field, self.names)
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.field, self.names, 1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        out
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = self.zero_like();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, self.field.mul(ca, cb));
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        let f = &self.field;
        MPoly {
            field: f.clone(),
            names: self.names,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, &c) = self.terms.iter().next().unwrap();
        e.iter()
            .all(|&x| x == 0)
            .then(|| Self::constant(&self.field, self.names, self.field.inv(c)))
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        self.div_exact(rhs)
    }
}

impl_ring_ops!(MPoly);
