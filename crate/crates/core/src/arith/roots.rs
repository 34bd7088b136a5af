//! Roots in F = F_q(t) of polynomials over F, via the rational root
//! theorem with Newton-polygon pruning at the infinite place.

use super::factor::{factor, monic_divisors};
use super::poly::PolyA;
use super::ratfunc::RatFunc;
use super::upoly::UPoly;
use super::Ring;
use crate::{rat, Rational};

/// Clears denominators and content: a primitive polynomial over A with the
/// same roots.
pub fn primitive_part(p: &UPoly<RatFunc>) -> Vec<PolyA> {
    let field = p.coeff_zero().field().clone();
    let mut l = PolyA::one(&field);
    for c in p.coeffs() {
        l = l.lcm(c.den());
    }
    let coeffs: Vec<PolyA> = p
        .coeffs()
        .iter()
        .map(|c| &c.num().clone() * &l.div_exact(c.den()).unwrap())
        .collect();
    let mut g = PolyA::zero(&field);
    for c in &coeffs {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return coeffs;
    }
    coeffs.iter().map(|c| c.div_exact(&g).unwrap()).collect()
}

/// Slopes of the lower convex hull of points (i, v_i), with their lengths.
/// A polynomial with v_i = valuation of its i-th coefficient has exactly
/// `length` roots (with multiplicity) of valuation −slope.
pub fn newton_polygon(points: &[(usize, i64)]) -> Vec<(Rational, usize)> {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| (rat(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64), w[1].0 - w[0].0))
        .collect()
}

/// Distinct roots in F, sorted by (denominator, numerator).
pub fn roots_in_f(p: &UPoly<RatFunc>) -> Vec<RatFunc> {
    let zero = p.coeff_zero().clone();
    let field = zero.field().clone();
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut c = primitive_part(p);
    let mut out = Vec::new();
    if c[0].is_zero() {
        out.push(zero.clone());
        let k = c.iter().position(|x| !x.is_zero()).unwrap();
        c.drain(..k);
    }
    if c.len() > 1 {
        // valuation at ∞ is −deg; roots y have deg y = slope
        let pts: Vec<(usize, i64)> =
            c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, -x.deg_i64())).collect();
        let slopes: Vec<Rational> = newton_polygon(&pts).into_iter().map(|(s, _)| s).collect();
        let nums = monic_divisors(&factor(&c[0]).unwrap(), &field);
        let dens = monic_divisors(&factor(c.last().unwrap()).unwrap(), &field);
        let poly = UPoly::new(&zero, c.iter().map(|x| RatFunc::from_poly(x.clone())).collect(), "y");
        for b in &dens {
            for a in &nums {
                if !a.gcd(b).is_constant() || !slopes.contains(&rat(a.deg_i64() - b.deg_i64(), 1)) {
                    continue;
                }
                for u in 1..field.q() {
                    let y = RatFunc::new(a.scale(u), b.clone()).unwrap();
                    if poly.eval(&y).is_zero() {
                        out.push(y);
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| (x.den(), x.num()).cmp(&(y.den(), y.num())));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FiniteField;

    #[test]
    fn newton_polygon_slopes() {
        // valuations 0, -1, 2 at x^0, x^1, x^2: hull (0,0)-(1,-1)-(2,2)
        let np = newton_polygon(&[(0, 0), (1, -1), (2, 2)]);
        assert_eq!(np, vec![(rat(-1, 1), 1), (rat(3, 1), 1)]);
        let np = newton_polygon(&[(0, 0), (1, 1), (2, 0)]);
        assert_eq!(np, vec![(rat(0, 1), 2)]);
    }

    #[test]
    fn finds_all_rational_roots() {
        let f = FiniteField::new(3).unwrap();
        let t = RatFunc::t(&f);
        let one = RatFunc::one(&f);
        let r1 = &t * &(&t + &one).inv().unwrap();
        let r2 = (&t * &t).neg_ref();
        let r3 = RatFunc::zero(&f);
        let lin = |r: &RatFunc| UPoly::new(&RatFunc::zero(&f), vec![r.neg_ref(), one.clone()], "y");
        let p = lin(&r1).mul(&lin(&r2)).mul(&lin(&r3)).mul(&lin(&r1));
        // plus an irreducible quadratic factor y^2 - t
        let p = p.mul(&UPoly::new(&RatFunc::zero(&f), vec![t.neg_ref(), RatFunc::zero(&f), one.clone()], "y"));
        let roots = roots_in_f(&p);
        assert_eq!(roots.len(), 3);
        for r in [&r1, &r2, &r3] {
            assert!(roots.contains(r));
        }
    }
}
