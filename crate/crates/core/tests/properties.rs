use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use drinfeld_core::arith::{factor, resultant, FiniteField, FrobeniusRing, PolyA, RatFunc, Ring, UPoly};
use drinfeld_core::bounds;
use drinfeld_core::heights::{log_abs, support, Place};
use drinfeld_core::skew::SkewPoly;
use drinfeld_core::{random, rat, Rational};

fn setup(q: u32, seed: u64) -> (FiniteField, ChaCha8Rng) {
    (FiniteField::new(q).unwrap(), ChaCha8Rng::seed_from_u64(seed))
}

fn small_q() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(4), Just(5)]
}

fn to_upoly(p: &PolyA, f: &FiniteField) -> UPoly<drinfeld_core::arith::Fq> {
    let c = (0..=p.degree().unwrap_or(0)).map(|i| f.elem(p.coeff(i))).collect();
    UPoly::new(&f.zero(), c, "t")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfunc_field_axioms(q in small_q(), seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let a = random::ratfunc(&mut rng, &f, 3);
        let b = random::ratfunc(&mut rng, &f, 3);
        let c = random::ratfunc(&mut rng, &f, 3);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        if let Some(ai) = a.try_inv() {
            prop_assert!((&a * &ai).is_one());
        }
    }

    #[test]
    fn frobenius_is_a_ring_map(q in small_q(), seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let a = random::ratfunc(&mut rng, &f, 3);
        let b = random::ratfunc(&mut rng, &f, 3);
        prop_assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
        prop_assert_eq!((&a * &b).frobenius(), &a.frobenius() * &b.frobenius());
        prop_assert_eq!(a.frobenius(), a.pow(q as u64));
    }

    #[test]
    fn polya_divrem_and_gcd(q in small_q(), seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let a = random::poly(&mut rng, &f, 6);
        let b = random::nonzero_poly(&mut rng, &f, 4);
        let (qq, r) = a.divrem(&b);
        prop_assert_eq!(&(&qq * &b) + &r, a.clone());
        prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn factorization_round_trip(q in prop_oneof![Just(2u32), Just(3), Just(4)], seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let p = random::nonzero_poly(&mut rng, &f, 8);
        let fac = factor(&p).unwrap();
        let mut prod = PolyA::constant(&f, fac.unit);
        for (g, e) in &fac.factors {
            prop_assert!(g.is_monic());
            prop_assert!(drinfeld_core::arith::is_irreducible(g));
            prod = &prod * &g.pow_u64(*e as u64);
        }
        prop_assert_eq!(prod, p);
    }

    #[test]
    fn resultant_detects_common_factors(q in small_q(), seed in any::<u64>(), plant in any::<bool>()) {
        let (f, mut rng) = setup(q, seed);
        let mut a = random::nonzero_poly(&mut rng, &f, 4);
        let mut b = random::nonzero_poly(&mut rng, &f, 4);
        if plant {
            let c = random::nonzero_poly(&mut rng, &f, 2).shift(1);
            a = &a * &c;
            b = &b * &c;
        }
        let res = resultant(&to_upoly(&a, &f), &to_upoly(&b, &f)).unwrap();
        let common = !a.gcd(&b).is_constant();
        prop_assert_eq!(res.is_zero(), common);
    }

    #[test]
    fn product_formula(q in small_q(), seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let x = random::nonzero_ratfunc(&mut rng, &f, 5);
        let mut total = log_abs(&x, &Place::Infinity).unwrap();
        for p in support(&x).unwrap() {
            total += log_abs(&x, &Place::Finite(p)).unwrap();
        }
        prop_assert_eq!(total, Rational::from_integer(0.into()));
    }

    #[test]
    fn skew_multiplication_is_associative(q in small_q(), seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let z = RatFunc::zero(&f);
        let mut sk = |n: usize| SkewPoly::new(&z, (0..n).map(|_| random::ratfunc(&mut rng, &f, 2)).collect());
        let (a, b, c) = (sk(3), sk(3), sk(2));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let x = random::ratfunc(&mut rng, &f, 2);
        prop_assert_eq!(a.mul(&b).eval(&x), a.eval(&b.eval(&x)));
    }

    #[test]
    fn phi_is_a_ring_homomorphism(q in prop_oneof![Just(2u32), Just(3)], r in 2usize..=3, seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let phi = random::module(&mut rng, &f, r, 2);
        let a = random::poly(&mut rng, &f, 2);
        let b = random::poly(&mut rng, &f, 2);
        prop_assert_eq!(phi.phi_of(&(&a * &b)), phi.phi_of(&a).mul(&phi.phi_of(&b)));
        prop_assert_eq!(phi.phi_of(&(&a + &b)), phi.phi_of(&a).add(&phi.phi_of(&b)));
    }

    #[test]
    fn graded_and_j_heights(q in prop_oneof![Just(2u32), Just(3)], r in 2usize..=4, seed in any::<u64>()) {
        let (f, mut rng) = setup(q, seed);
        let phi = random::module(&mut rng, &f, r, 3);
        let hg = phi.height_g().unwrap();
        let d = phi.j_invariants().d as i64;
        prop_assert_eq!(&hg * rat(d, 1), phi.height_j().unwrap());
        prop_assert!(hg >= rat(0, 1));
        prop_assert!(hg <= phi.naive_height().unwrap() * rat(r as i64, 1));
        let c = random::nonzero_ratfunc(&mut rng, &f, 2);
        prop_assert_eq!(phi.twist(&c).unwrap().height_g().unwrap(), hg);
    }

    #[test]
    fn part1_bound_is_monotone(q in prop_oneof![Just(2u64), Just(3), Just(4)], r in 2usize..=5, n in 1i64..6) {
        let b = bounds::thm1_part1_bound(n, q, r).unwrap();
        prop_assert!(bounds::thm1_part1_bound(n + 1, q, r).unwrap() > b);
        prop_assert!(bounds::thm1_part1_bound(n, q, r + 1).unwrap() > b);
    }

    #[test]
    fn part2_bound_is_monotone(q in prop_oneof![Just(2u64), Just(3)], h in 0i64..200, k in 1i64..4) {
        let hr = rat(h, 3);
        let b = bounds::thm1_part2_bound(k, &hr, q).unwrap();
        prop_assert!(bounds::thm1_part2_bound(k, &(&hr + rat(1, 1)), q).unwrap() >= b);
        prop_assert!(bounds::thm1_part2_bound(k + 1, &hr, q).unwrap() >= b);
    }
}
