//! Seeded randomized checks of the height-difference bounds for isogenous
//! modules, with JSON-serializable reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{FiniteField, RatFunc, Ring};
use crate::bounds::{self, BoundReport};
use crate::drinfeld::DrinfeldModule;
use crate::isogeny::{dual, rank2_t_isogenies, random_isogenous_pair_with, Isogeny};
use crate::skew::SkewPoly;
use crate::{random, Error, Rational, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessConfig {
    pub q: u32,
    pub r: usize,
    pub trials: usize,
    pub seed: u64,
    /// Bound on the t-degree of random coefficients.
    pub size_bound: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig { q: 2, r: 2, trials: 100, seed: 0, size_bound: 2 }
    }
}

/// Identities f̂·f = φ_N, f·f̂ = φ′_N, deg f̂ + deg f = r·deg N and
/// deg f̂ ≤ (deg f)^{r−1}, all in τ-degrees.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualCheck {
    pub n: String,
    pub deg_n: usize,
    pub deg_f: usize,
    pub deg_fhat: usize,
    pub left: bool,
    pub right: bool,
    pub degree_sum: bool,
    pub degree_power: bool,
}

impl DualCheck {
    pub fn ok(&self) -> bool {
        self.left && self.right && self.degree_sum && self.degree_power
    }
}

pub fn dual_check(phi: &DrinfeldModule<RatFunc>, phi2: &DrinfeldModule<RatFunc>, f: &SkewPoly<RatFunc>) -> Result<DualCheck> {
    let d = dual(phi, phi2, f)?;
    let r = phi.rank();
    let deg_f = f.degree().unwrap();
    let deg_fhat = d.fhat.degree().unwrap();
    Ok(DualCheck {
        n: d.n.to_string(),
        deg_n: d.n.degree().unwrap(),
        deg_f,
        deg_fhat,
        left: d.fhat.mul(f) == phi.phi_of(&d.n),
        right: f.mul(&d.fhat) == phi2.phi_of(&d.n),
        degree_sum: deg_f + deg_fhat == r * d.n.degree().unwrap(),
        degree_power: deg_fhat <= (r - 1) * deg_f,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trial {
    pub index: usize,
    pub phi: String,
    pub phi2: String,
    pub f: String,
    pub report: BoundReport,
    pub dual: DualCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartSummary {
    pub trials: usize,
    pub checks: usize,
    pub violations: usize,
    pub dual_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub schema_version: u32,
    pub config: HarnessConfig,
    pub part1: Vec<Trial>,
    pub part1_summary: PartSummary,
    pub part2: Vec<Trial>,
    pub part2_summary: PartSummary,
    pub all_satisfied: bool,
}

/// Independent stream for trial `i`, so results do not depend on how many
/// draws earlier trials made.
pub fn trial_rng(seed: u64, part: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(part << 32 | i as u64);
    rng
}

/// |h_G(φ′) − h_G(φ)| against deg N + q/(q−1) − q^r/(q^r−1) on one pair
/// from the φ_t = P·f construction.
pub fn part1_trial(cfg: &HarnessConfig, i: usize) -> Result<Trial> {
    let field = FiniteField::new(cfg.q)?;
    let mut rng = trial_rng(cfg.seed, 1, i);
    let pair = random_isogenous_pair_with(&mut rng, &field, cfg.r, cfg.size_bound)?;
    let dual = dual_check(&pair.phi, &pair.phi2, &pair.f)?;
    let lhs = pair.phi2.height_g()? - pair.phi.height_g()?;
    let report = bounds::thm1_part1_report(&lhs, dual.deg_n as i64, cfg.q as u64, cfg.r)?;
    Ok(Trial { index: i, phi: pair.phi.to_literal(), phi2: pair.phi2.to_literal(), f: pair.f.to_string(), report, dual })
}

/// A rank-2 module with a planted rational kernel line: y and g_2 random,
/// g_1 = −(t + g_2·y^{q+1})/y, so y is a root of the y-polynomial.
pub fn planted_rank2_module<G: Rng>(rng: &mut G, field: &FiniteField, size_bound: usize) -> DrinfeldModule<RatFunc> {
    let q = field.q() as u64;
    loop {
        let y = random::nonzero_ratfunc(rng, field, size_bound);
        let g2 = random::nonzero_ratfunc(rng, field, size_bound);
        let t = RatFunc::t(field);
        let num = (&t + &(&g2 * &y.pow(q + 1))).neg_ref();
        let g1 = &num * &crate::arith::Field::inv(&y);
        if let Ok(phi) = DrinfeldModule::new(vec![g1, g2]) {
            return phi;
        }
    }
}

/// h(j′) − h(j) against the rank-2 bound with log deg f = 1, for every
/// rational t-isogeny of one planted module.
pub fn part2_trial(cfg: &HarnessConfig, i: usize) -> Result<Vec<Trial>> {
    let field = FiniteField::new(cfg.q)?;
    let mut rng = trial_rng(cfg.seed, 2, i);
    let phi = planted_rank2_module(&mut rng, &field, cfg.size_bound);
    part2_for_module(&phi, i)
}

pub fn part2_for_module(phi: &DrinfeldModule<RatFunc>, i: usize) -> Result<Vec<Trial>> {
    let h = phi.height_j()?;
    let q = phi.q();
    rank2_t_isogenies(phi)?
        .into_iter()
        .map(|Isogeny { f, source, target }| {
            let h2 = target.height_j()?;
            let lhs: Rational = &h2 - &h;
            let report = bounds::thm1_part2_report(&lhs, 1, &h2, q)?;
            let dual = dual_check(&source, &target, &f)?;
            Ok(Trial { index: i, phi: source.to_literal(), phi2: target.to_literal(), f: f.to_string(), report, dual })
        })
        .collect()
}

fn summarize(trials: usize, v: &[Trial]) -> PartSummary {
    PartSummary {
        trials,
        checks: v.len(),
        violations: v.iter().filter(|t| !t.report.satisfied).count(),
        dual_failures: v.iter().filter(|t| !t.dual.ok()).count(),
    }
}

pub fn run(cfg: &HarnessConfig) -> Result<HarnessReport> {
    if cfg.trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".into()));
    }
    if cfg.r < 2 {
        return Err(Error::BadRank(cfg.r));
    }
    let part1 = (0..cfg.trials).map(|i| part1_trial(cfg, i)).collect::<Result<Vec<_>>>()?;
    let mut part2 = Vec::new();
    for i in 0..cfg.trials {
        part2.extend(part2_trial(cfg, i)?);
    }
    let part1_summary = summarize(cfg.trials, &part1);
    let part2_summary = summarize(cfg.trials, &part2);
    let all_satisfied = [&part1_summary, &part2_summary].iter().all(|s| s.violations == 0 && s.dual_failures == 0);
    Ok(HarnessReport { schema_version: SCHEMA_VERSION, config: cfg.clone(), part1, part1_summary, part2, part2_summary, all_satisfied })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let cfg = HarnessConfig { q: 2, r: 3, trials: 10, seed: 11, size_bound: 2 };
        let a = run(&cfg).unwrap();
        assert!(a.all_satisfied);
        assert!(a.part2_summary.checks >= cfg.trials);
        let b = run(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn planted_modules_have_a_rational_isogeny() {
        let f = FiniteField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let phi = planted_rank2_module(&mut rng, &f, 2);
            assert!(!rank2_t_isogenies(&phi).unwrap().is_empty());
        }
    }
}
