//! Seeded generators for random field elements and modules.

use rand::Rng;

use crate::arith::{FiniteField, PolyA, RatFunc, Ring};
use crate::drinfeld::DrinfeldModule;
use crate::lattice::LatticeBasis;

/// Uniform polynomial of degree ≤ max_deg (possibly zero).
pub fn poly<G: Rng>(rng: &mut G, field: &FiniteField, max_deg: usize) -> PolyA {
    PolyA::new(field, (0..=max_deg).map(|_| rng.gen_range(0..field.q())).collect())
}

pub fn nonzero_poly<G: Rng>(rng: &mut G, field: &FiniteField, max_deg: usize) -> PolyA {
    loop {
        let p = poly(rng, field, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn nonzero_ratfunc<G: Rng>(rng: &mut G, field: &FiniteField, max_deg: usize) -> RatFunc {
    let num = nonzero_poly(rng, field, max_deg);
    let den = nonzero_poly(rng, field, max_deg);
    RatFunc::new(num, den).unwrap()
}

/// Element of F, zero with probability about 1/(2q).
pub fn ratfunc<G: Rng>(rng: &mut G, field: &FiniteField, max_deg: usize) -> RatFunc {
    if rng.gen_range(0..2 * field.q()) == 0 {
        RatFunc::zero(field)
    } else {
        nonzero_ratfunc(rng, field, max_deg)
    }
}

/// Random rank-r module over F; g_1..g_{r−1} may vanish, g_r does not.
pub fn module<G: Rng>(rng: &mut G, field: &FiniteField, r: usize, max_deg: usize) -> DrinfeldModule<RatFunc> {
    let mut g: Vec<RatFunc> = (1..r).map(|_| ratfunc(rng, field, max_deg)).collect();
    g.push(nonzero_ratfunc(rng, field, max_deg));
    DrinfeldModule::new(g).expect("rank and leading coefficient are valid")
}

/// Nonsingular r×r matrix over F with entries of bounded size.
pub fn gl_matrix<G: Rng>(rng: &mut G, field: &FiniteField, r: usize, max_deg: usize) -> Vec<Vec<RatFunc>> {
    loop {
        let m: Vec<Vec<RatFunc>> = (0..r).map(|_| (0..r).map(|_| ratfunc(rng, field, max_deg)).collect()).collect();
        if !crate::lattice::det(&m).is_zero() {
            return m;
        }
    }
}

/// Nonsingular r×r matrix over A.
pub fn integral_matrix<G: Rng>(rng: &mut G, field: &FiniteField, r: usize, max_deg: usize) -> Vec<Vec<PolyA>> {
    loop {
        let m: Vec<Vec<PolyA>> = (0..r).map(|_| (0..r).map(|_| poly(rng, field, max_deg)).collect()).collect();
        let mf: Vec<Vec<RatFunc>> =
            m.iter().map(|row| row.iter().map(|x| RatFunc::from_poly(x.clone())).collect()).collect();
        if !crate::lattice::det(&mf).is_zero() {
            return m;
        }
    }
}

pub fn lattice<G: Rng>(rng: &mut G, field: &FiniteField, r: usize, max_deg: usize) -> LatticeBasis {
    LatticeBasis::new(gl_matrix(rng, field, r, max_deg)).expect("nonsingular")
}

/// Reduced Λ, Λ′ and α ∈ A with |α| ≥ 1 and αΛ ⊂ Λ′.
pub fn lattice_containment<G: Rng>(
    rng: &mut G,
    field: &FiniteField,
    r: usize,
    max_deg: usize,
) -> (LatticeBasis, LatticeBasis, RatFunc) {
    let outer = lattice(rng, field, r, max_deg);
    let lam2 = normalize(&outer);
    let c = integral_matrix(rng, field, r, max_deg);
    let cf: Vec<Vec<RatFunc>> = c.iter().map(|row| row.iter().map(|x| RatFunc::from_poly(x.clone())).collect()).collect();
    let inner = lam2.transform_columns(&cf);
    let red = inner.reduce().expect("nonsingular");
    let k = *red.minima.last().unwrap();
    let k = usize::try_from(k).expect("sublattice of a reduced lattice has minima >= 0");
    // α monic of degree k; Λ = α⁻¹·inner has smallest minimum 1
    let mut alpha = PolyA::monomial(field, 1, k);
    if k > 0 {
        alpha = &alpha + &poly(rng, field, k - 1);
    }
    let alpha = RatFunc::from_poly(alpha);
    let lam = inner.scale(&crate::arith::Field::inv(&alpha)).expect("nonzero");
    (lam, lam2, alpha)
}

/// c·Λ with c ∈ F chosen so the smallest successive minimum is 1.
pub fn normalize(lam: &LatticeBasis) -> LatticeBasis {
    let k = *lam.reduce().expect("nonsingular").minima.last().unwrap();
    let field = lam.rows()[0][0].field().clone();
    lam.scale(&RatFunc::t(&field).powi(-k)).expect("nonzero")
}
