//! Factorization in F_q[t]: squarefree decomposition, distinct-degree
//! splitting, then equal-degree splitting (Cantor–Zassenhaus, with the
//! trace map in characteristic 2). Degree ≤ 3 inputs go through root
//! search instead.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fq::FiniteField;
use super::poly::PolyA;
use super::ArithError;

/// Seed used by [`factor`]; results never depend on it, only running time.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_f00d;

/// m = unit · ∏ P^e with distinct monic irreducible P, sorted by [`PolyA`]'s order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(PolyA, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: &FiniteField) -> PolyA {
        self.factors
            .iter()
            .fold(PolyA::constant(field, self.unit), |acc, (p, e)| &acc * &p.pow_u64(*e as u64))
    }
}

pub fn factor(m: &PolyA) -> Result<Factorization, ArithError> {
    factor_with_seed(m, DEFAULT_FACTOR_SEED)
}

pub fn factor_with_seed(m: &PolyA, seed: u64) -> Result<Factorization, ArithError> {
    if m.is_zero() {
        return Err(ArithError::ZeroInput("factor"));
    }
    let (unit, monic) = m.monic_parts();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc: BTreeMap<PolyA, u32> = BTreeMap::new();
    for (sq, mult) in squarefree_decomposition(&monic) {
        for p in factor_squarefree(&sq, &mut rng) {
            *acc.entry(p).or_insert(0) += mult;
        }
    }
    Ok(Factorization { unit, factors: acc.into_iter().collect() })
}

/// Pairs (g_i, i) with monic squarefree pairwise-coprime g_i and
/// f = ∏ g_i^i. Input must be monic.
pub fn squarefree_decomposition(f: &PolyA) -> Vec<(PolyA, u32)> {
    let field = f.field();
    let one = PolyA::one(field);
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut g = f.gcd(&f.derivative());
    let mut w = f.div_exact(&g).unwrap();
    let mut i = 1;
    while w != one {
        let y = w.gcd(&g);
        let z = w.div_exact(&y).unwrap();
        if z != one {
            out.push((z, i));
        }
        i += 1;
        g = g.div_exact(&y).unwrap();
        w = y;
    }
    if g != one {
        let p = field.characteristic();
        let root = g.pth_root_poly().expect("remaining part is a p-th power");
        for (h, e) in squarefree_decomposition(&root) {
            out.push((h, e * p));
        }
    }
    out
}

fn factor_squarefree(f: &PolyA, rng: &mut ChaCha8Rng) -> Vec<PolyA> {
    match f.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![f.clone()],
        Some(d) if d <= 3 => factor_small(f),
        Some(_) => {
            let mut out = Vec::new();
            for (d, g) in distinct_degree(f) {
                equal_degree(&g, d, rng, &mut out);
            }
            out
        }
    }
}

// Monic squarefree f of degree ≤ 3: peel off roots; what is left has no
// roots and degree ≤ 3, hence is irreducible.
fn factor_small(f: &PolyA) -> Vec<PolyA> {
    let field = f.field();
    let mut rest = f.clone();
    let mut out = Vec::new();
    for x in 0..field.q() {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        if rest.eval(x) == 0 {
            let lin = PolyA::new(field, vec![field.neg(x), 1]);
            rest = rest.div_exact(&lin).unwrap();
            out.push(lin);
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

/// Distinct-degree splitting of a monic squarefree polynomial.
pub fn distinct_degree(f: &PolyA) -> Vec<(usize, PolyA)> {
    let field = f.field();
    let t = PolyA::t(field);
    let q = field.q() as u128;
    let mut rest = f.clone();
    let mut h = t.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while let Some(n) = rest.degree() {
        if n < 2 * (d + 1) {
            if n > 0 {
                out.push((n, rest.clone()));
            }
            break;
        }
        d += 1;
        h = h.powmod(q, &rest);
        let g = rest.gcd(&(&h - &t));
        if g.degree() > Some(0) {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
            out.push((d, g));
        }
    }
    out
}

fn equal_degree(g: &PolyA, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyA>) {
    let n = g.degree().unwrap();
    if n == d {
        out.push(g.clone());
        return;
    }
    let field = g.field();
    let q = field.q();
    loop {
        let a = PolyA::new(field, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.is_constant() {
            continue;
        }
        let b = if field.characteristic() == 2 {
            trace_map(&a, g, d)
        } else {
            // a^((q^d - 1)/2) = (a^(1 + q + … + q^(d-1)))^((q - 1)/2)
            let mut norm = PolyA::one(field);
            let mut frob = a.clone();
            for i in 0..d {
                if i > 0 {
                    frob = frob.powmod(q as u128, g);
                }
                norm = (&norm * &frob).rem(g);
            }
            &norm.powmod(((q - 1) / 2) as u128, g) - &PolyA::one(field)
        };
        let h = g.gcd(&b);
        if let Some(dh) = h.degree() {
            if dh > 0 && dh < n {
                let other = g.div_exact(&h).unwrap();
                equal_degree(&h, d, rng, out);
                equal_degree(&other, d, rng, out);
                return;
            }
        }
    }
}

// a + a^2 + a^4 + … + a^(2^(e·d - 1)) mod g, where q = 2^e.
fn trace_map(a: &PolyA, g: &PolyA, d: usize) -> PolyA {
    let k = g.field().degree() as usize * d;
    let mut term = a.rem(g);
    let mut acc = term.clone();
    for _ in 1..k {
        term = (&term * &term).rem(g);
        acc = &acc + &term;
    }
    acc
}

/// True iff f has positive degree and no factor of degree ≤ deg f / 2.
pub fn is_irreducible(f: &PolyA) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let field = f.field();
    let m = f.monic();
    let t = PolyA::t(field);
    let mut h = t.clone();
    for _ in 1..=n / 2 {
        h = h.powmod(field.q() as u128, &m);
        if m.gcd(&(&h - &t)).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Monic irreducibles of degree 1..=d, by degree then lexicographically.
pub fn enumerate_irreducibles(field: &FiniteField, d: usize) -> Vec<PolyA> {
    (1..=d)
        .flat_map(|k| PolyA::monics_of_degree(field, k).filter(is_irreducible).collect::<Vec<_>>())
        .collect()
}

/// Monic divisors of a factored polynomial, in a deterministic order.
pub fn monic_divisors(fact: &Factorization, field: &FiniteField) -> Vec<PolyA> {
    let mut divs = vec![PolyA::one(field)];
    for (p, e) in &fact.factors {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur = &cur * p;
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    divs
}
