//! `drinfeld`: batch reports over drinfeld-core.
//!
//! Exit codes: 0 when every checked inequality holds, 2 on any violation,
//! 1 on usage or input errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use drinfeld_core::arith::parse::{parse_poly, parse_ratfunc};
use drinfeld_core::arith::{FiniteField, RatFunc};
use drinfeld_core::drinfeld::DrinfeldModule;
use drinfeld_core::harness::{self, HarnessConfig};
use drinfeld_core::isogeny::{self, remark_rank3_check, remark_rank3_from_g1};
use drinfeld_core::lattice::{self, LatticeBasis};
use drinfeld_core::skew::{parse_skew, SkewPoly};
use drinfeld_core::{bounds, modpoly, random};

const SCHEMA_VERSION: u32 = 1;
const SEED_ENV: &str = "DRINFELD_SEED";

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Heights, isogenies, lattices and modular polynomials of Drinfeld modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for randomized runs; falls back to DRINFELD_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// h_G, h_J and the local table of a module literal.
    Heights {
        #[arg(long)]
        module: String,
    },
    /// Isogeny utilities.
    Isogeny {
        #[arg(value_enum)]
        action: IsogenyAction,
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        module2: Option<String>,
        /// Skew polynomial in T (τ), e.g. "T + t".
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        /// f_0 for the rank-3 construction.
        #[arg(long)]
        f0: Option<String>,
        /// g_1 for the rank-3 construction (f_0 is then a root).
        #[arg(long)]
        g1: Option<String>,
    },
    /// Randomized verification of both height-difference bounds.
    Harness {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        size_bound: usize,
    },
    /// Lattice reduction, covolumes, indices and the analytic isogeny check.
    Lattice {
        #[arg(value_enum)]
        action: LatticeAction,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Row-major JSON matrix of element strings; columns generate.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        basis2: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        /// Random instances for analytic-check when no bases are given.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Modular polynomial and its height bounds.
    Modpoly {
        #[arg(value_enum, default_value_t = ModpolyAction::Compute)]
        action: ModpolyAction,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value = "t")]
        m: String,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Interpolation radius for the bounds table (informational).
        #[arg(long)]
        n: Option<u32>,
        /// Permit computing Φ_t for q > 3.
        #[arg(long)]
        allow_large_q: bool,
    },
    /// Bound evaluators.
    Bound {
        #[arg(value_enum)]
        which: BoundKind,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        deg_n: i64,
        #[arg(long, default_value_t = 1)]
        deg_f_log: i64,
        #[arg(long, default_value = "0")]
        h: String,
        #[arg(long, default_value_t = 1)]
        k_degree: u64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum IsogenyAction {
    Verify,
    Pushforward,
    Dual,
    MinimalN,
    Remark3,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum LatticeAction {
    Reduce,
    Covolume,
    Index,
    AnalyticCheck,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModpolyAction {
    Compute,
    Bounds,
    CrossCheck,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum BoundKind {
    Thm1Part1,
    Thm1Part2,
    Lemma54,
    DdCorollary,
    Lemma64,
}

/// A finished report: payload, whether every check held, and CSV rows.
struct Outcome {
    report: Value,
    satisfied: bool,
    rows: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Outcome {
    fn info(report: Value) -> Self {
        Outcome { report, satisfied: true, rows: None }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, UsageError>;

fn need<'a>(v: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    v.as_deref().ok_or_else(|| UsageError(format!("missing --{flag}")))
}

fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| UsageError(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn parse_module(s: &str) -> CliResult<DrinfeldModule<RatFunc>> {
    Ok(DrinfeldModule::parse_literal(s)?)
}

fn parse_f(s: &str, field: &FiniteField) -> CliResult<SkewPoly<RatFunc>> {
    let z = RatFunc::zero(field);
    Ok(parse_skew(s, &z, &[("t", RatFunc::t(field))])?)
}

fn parse_matrix(s: &str, field: &FiniteField) -> CliResult<LatticeBasis> {
    let rows: Vec<Vec<String>> = serde_json::from_str(s).map_err(|e| UsageError(format!("matrix literal: {e}")))?;
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|x| parse_ratfunc(field, x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LatticeBasis::new(rows)?)
}

fn matrix_json(b: &LatticeBasis) -> Value {
    json!(b.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn to_value<T: Serialize>(x: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(x)?)
}

fn heights(module: &str) -> CliResult<Outcome> {
    let phi = parse_module(module)?;
    let gh = phi.graded_height()?;
    let j = phi.j_invariants();
    Ok(Outcome::info(json!({
        "module": phi.to_literal(),
        "d": j.d,
        "j": j.j.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "h_G": gh.total.to_string(),
        "h_J": phi.height_j()?.to_string(),
        "h_G_finite": gh.finite.to_string(),
        "h_G_infinite": gh.infinite.to_string(),
        "naive_height": phi.naive_height()?.to_string(),
        "local": to_value(&gh)?["local"],
    })))
}

#[allow(clippy::too_many_arguments)]
fn isogeny_cmd(
    action: IsogenyAction,
    module: &Option<String>,
    module2: &Option<String>,
    f: &Option<String>,
    q: Option<u32>,
    f0: &Option<String>,
    g1: &Option<String>,
) -> CliResult<Outcome> {
    if let IsogenyAction::Remark3 = action {
        let field = FiniteField::new(q.unwrap_or(2))?;
        let rep = match (f0, g1) {
            (Some(f0), None) => remark_rank3_check(&parse_ratfunc(&field, f0)?, None)?,
            (None, Some(g1)) => remark_rank3_from_g1(&parse_ratfunc(&field, g1)?)?,
            _ => return Err(UsageError("remark3 needs exactly one of --f0, --g1".into())),
        };
        let passed = rep.passed;
        return Ok(Outcome { report: to_value(&rep)?, satisfied: passed, rows: None });
    }
    let phi = parse_module(need(module, "module")?)?;
    let field = phi.field().clone();
    let f = parse_f(need(f, "f")?, &field)?;
    match action {
        IsogenyAction::Verify => {
            let phi2 = parse_module(need(module2, "module2")?)?;
            let ok = isogeny::verify(&f, &phi, &phi2);
            Ok(Outcome { report: json!({"f": f.to_string(), "verified": ok}), satisfied: ok, rows: None })
        }
        IsogenyAction::Pushforward => {
            let phi2 = isogeny::pushforward(&phi, &f)?;
            Ok(Outcome::info(json!({"f": f.to_string(), "source": phi.to_literal(), "target": phi2.to_literal()})))
        }
        IsogenyAction::MinimalN => {
            let n = isogeny::minimal_n(&phi, &f)?;
            Ok(Outcome::info(json!({"f": f.to_string(), "N": n.to_string(), "deg_N": n.degree()})))
        }
        IsogenyAction::Dual => {
            let phi2 = match module2 {
                Some(m) => parse_module(m)?,
                None => isogeny::pushforward(&phi, &f)?,
            };
            let chk = harness::dual_check(&phi, &phi2, &f)?;
            let d = isogeny::dual(&phi, &phi2, &f)?;
            let ok = chk.ok();
            Ok(Outcome {
                report: json!({"f": f.to_string(), "target": phi2.to_literal(), "fhat": d.fhat.to_string(), "checks": to_value(&chk)?}),
                satisfied: ok,
                rows: None,
            })
        }
        IsogenyAction::Remark3 => unreachable!(),
    }
}

fn harness_cmd(cfg: HarnessConfig) -> CliResult<Outcome> {
    let rep = harness::run(&cfg)?;
    let header = ["part", "index", "lhs", "rhs", "satisfied", "dual_ok", "phi", "phi2", "f"].map(String::from).to_vec();
    let rows = [("1", &rep.part1), ("2", &rep.part2)]
        .iter()
        .flat_map(|(p, v)| {
            v.iter().map(move |t| {
                vec![
                    p.to_string(),
                    t.index.to_string(),
                    t.report.lhs.clone(),
                    t.report.rhs.to_string(),
                    t.report.satisfied.to_string(),
                    t.dual.ok().to_string(),
                    t.phi.clone(),
                    t.phi2.clone(),
                    t.f.clone(),
                ]
            })
        })
        .collect();
    Ok(Outcome { satisfied: rep.all_satisfied, report: to_value(&rep)?, rows: Some((header, rows)) })
}

#[allow(clippy::too_many_arguments)]
fn lattice_cmd(
    action: LatticeAction,
    q: u32,
    basis: &Option<String>,
    basis2: &Option<String>,
    alpha: &Option<String>,
    trials: usize,
    r: usize,
    seed: u64,
) -> CliResult<Outcome> {
    let field = FiniteField::new(q)?;
    match action {
        LatticeAction::Reduce => {
            let b = parse_matrix(need(basis, "basis")?, &field)?;
            let red = b.reduce()?;
            Ok(Outcome::info(json!({"basis": matrix_json(&red.basis), "minima": red.minima, "log_covolume": red.log_covolume()})))
        }
        LatticeAction::Covolume => {
            let b = parse_matrix(need(basis, "basis")?, &field)?;
            let cov = b.log_covolume()?;
            let det = b.log_abs_det();
            Ok(Outcome { report: json!({"log_covolume": cov, "log_abs_det": det}), satisfied: cov == det, rows: None })
        }
        LatticeAction::Index => {
            let inner = parse_matrix(need(basis, "basis")?, &field)?;
            let outer = parse_matrix(need(basis2, "basis2")?, &field)?;
            let idx = lattice::index(&inner, &outer)?;
            let ratio = inner.log_covolume()? - outer.log_covolume()?;
            Ok(Outcome {
                report: json!({
                    "log_index": idx.log_index,
                    "invariant_factors": idx.invariant_factors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "covolume_log_ratio": ratio,
                }),
                satisfied: ratio == idx.log_index,
                rows: None,
            })
        }
        LatticeAction::AnalyticCheck => {
            let instances: Vec<(LatticeBasis, LatticeBasis, RatFunc)> = match (basis, basis2) {
                (Some(b1), Some(b2)) => {
                    let a = parse_ratfunc(&field, need(alpha, "alpha")?)?;
                    vec![(parse_matrix(b1, &field)?, parse_matrix(b2, &field)?, a)]
                }
                (None, None) => {
                    if trials == 0 {
                        return Err(UsageError("trials must be at least 1".into()));
                    }
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    (0..trials).map(|_| random::lattice_containment(&mut rng, &field, r, 2)).collect()
                }
                _ => return Err(UsageError("give both --basis and --basis2, or neither".into())),
            };
            let mut reports = Vec::new();
            for (l1, l2, a) in &instances {
                let rep = lattice::analytic_isogeny_check(l1, l2, a)?;
                reports.push(json!({"lambda": matrix_json(l1), "lambda2": matrix_json(l2), "alpha": a.to_string(), "report": to_value(&rep)?}));
            }
            let ok = reports.iter().all(|r| r["report"]["satisfied"] == json!(true));
            Ok(Outcome { report: json!({"instances": reports}), satisfied: ok, rows: None })
        }
    }
}

fn modpoly_cmd(action: ModpolyAction, q: u32, m: &str, eps: f64, n: Option<u32>, allow_large_q: bool) -> CliResult<Outcome> {
    let field = FiniteField::new(q)?;
    let mpoly = parse_poly(&field, m)?;
    let is_t = mpoly == drinfeld_core::arith::PolyA::t(&field);
    let header: Vec<String> =
        ["m", "psi", "kappa", "h_phi", "prop65_bound", "hsia_main_term", "asymptotic_bound"].map(String::from).to_vec();
    let row_of = |r: &modpoly::BoundsRow| {
        vec![
            r.m.clone(),
            r.psi.clone(),
            r.kappa.clone(),
            r.h_phi.clone().unwrap_or_default(),
            r.prop65_bound.to_string(),
            r.hsia_main_term.clone(),
            r.asymptotic_bound.to_string(),
        ]
    };
    let wants_phi = !matches!(action, ModpolyAction::Bounds);
    if wants_phi && !is_t {
        return Err(UsageError("only m = t is computed; use the bounds action for other m".into()));
    }
    if wants_phi && q > 3 && !allow_large_q {
        return Err(UsageError("q > 3 needs --allow-large-q".into()));
    }
    match action {
        ModpolyAction::Bounds => {
            let row = modpoly::bounds_row(&mpoly, None, eps)?;
            let mut rep = to_value(&row)?;
            if let Some(n) = n {
                rep["n"] = json!(n);
            }
            Ok(Outcome { rows: Some((header, vec![row_of(&row)])), report: rep, satisfied: true })
        }
        ModpolyAction::Compute => {
            let phi = modpoly::compute_phi_t(q)?;
            let h = modpoly::poly_height(&phi)?;
            let row = modpoly::bounds_row(&mpoly, Some(&h), eps)?;
            let ok = bounds::float_le(&h, row.prop65_bound);
            Ok(Outcome {
                report: json!({
                    "q": q,
                    "m": m,
                    "terms": to_value(&phi.sparse())?,
                    "pretty": phi.to_string(),
                    "height": h.to_string(),
                    "symmetric": phi.is_symmetric(),
                    "monic": phi.is_monic_x() && phi.is_monic_y(),
                    "bounds": to_value(&row)?,
                    "height_within_prop65": ok,
                }),
                satisfied: ok,
                rows: Some((header, vec![row_of(&row)])),
            })
        }
        ModpolyAction::CrossCheck => {
            let phi = modpoly::compute_phi_t(q)?;
            let rec = modpoly::phi_t_by_interpolation(q)?;
            let same = rec.poly == phi;
            let lemma = rec.bound_holds.unwrap_or(false);
            Ok(Outcome {
                report: json!({
                    "q": q,
                    "identical": same,
                    "interpolation_B": rec.b,
                    "interpolation_n": rec.n,
                    "lagrange_bound_holds": lemma,
                }),
                satisfied: same && lemma,
                rows: None,
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn bound_cmd(
    which: BoundKind,
    q: u64,
    r: usize,
    deg_n: i64,
    deg_f_log: i64,
    h: &str,
    k_degree: u64,
    c2: f64,
    a: f64,
) -> CliResult<Outcome> {
    let h_rat = || -> CliResult<drinfeld_core::Rational> {
        h.parse::<drinfeld_core::Rational>().map_err(|_| UsageError(format!("--h {h} is not a rational number")))
    };
    let v = match which {
        BoundKind::Thm1Part1 => json!({"bound": bounds::thm1_part1_bound(deg_n, q, r)?.to_string()}),
        BoundKind::Thm1Part2 => json!({"bound": bounds::thm1_part2_bound(deg_f_log, &h_rat()?, q)?, "rounded": "up"}),
        BoundKind::Lemma54 => {
            let (lo, hi) = bounds::lemma54_window(q, r)?;
            json!({"lower": lo.to_string(), "upper": hi.to_string()})
        }
        BoundKind::DdCorollary => {
            json!({"bound": bounds::dd_corollary_bound(k_degree, &h_rat()?, q, r, c2)?, "rounded": "up"})
        }
        BoundKind::Lemma64 => json!({
            "bound": bounds::lemma64_resolve(a, q)?,
            "threshold": bounds::lemma64_threshold(q),
            "rounded": "up",
        }),
    };
    Ok(Outcome::info(v))
}

fn run(cli: &Cli) -> CliResult<(String, Outcome)> {
    let seed = resolve_seed(cli.common.seed)?;
    let (name, outcome) = match &cli.command {
        Command::Heights { module } => ("heights", heights(module)?),
        Command::Isogeny { action, module, module2, f, q, f0, g1 } => {
            ("isogeny", isogeny_cmd(*action, module, module2, f, *q, f0, g1)?)
        }
        Command::Harness { q, r, trials, size_bound } => {
            ("harness", harness_cmd(HarnessConfig { q: *q, r: *r, trials: *trials, seed, size_bound: *size_bound })?)
        }
        Command::Lattice { action, q, basis, basis2, alpha, trials, r } => {
            ("lattice", lattice_cmd(*action, *q, basis, basis2, alpha, *trials, *r, seed)?)
        }
        Command::Modpoly { action, q, m, eps, n, allow_large_q } => {
            ("modpoly", modpoly_cmd(*action, *q, m, *eps, *n, *allow_large_q)?)
        }
        Command::Bound { which, q, r, deg_n, deg_f_log, h, k_degree, c2, a } => {
            ("bound", bound_cmd(*which, *q, *r, *deg_n, *deg_f_log, h, *k_degree, *c2, *a)?)
        }
    };
    Ok((name.to_string(), outcome))
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
        other => {
            out.insert(prefix.to_string(), other.to_string());
        }
    }
}

fn render(name: &str, outcome: &Outcome, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let doc = json!({"schema_version": SCHEMA_VERSION, "command": name, "satisfied": outcome.satisfied, "report": outcome.report});
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match &outcome.rows {
                Some((header, rows)) => {
                    w.write_record(header)?;
                    for r in rows {
                        w.write_record(r)?;
                    }
                }
                None => {
                    let mut flat = BTreeMap::new();
                    flatten("", &outcome.report, &mut flat);
                    w.write_record(["key", "value"])?;
                    for (k, v) in flat {
                        w.write_record([k, v])?;
                    }
                }
            }
            Ok(w.into_inner().map_err(|e| UsageError(e.to_string()))?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, outcome) = match run(&cli) {
        Ok(x) => x,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let bytes = match render(&name, &outcome, cli.common.format) {
        Ok(b) => b,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| e.to_string()),
        None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if outcome.satisfied {
        ExitCode::SUCCESS
    } else {
        if outcome.report.is_object() {
            eprintln!("violation: see report for the reproduction inputs");
        }
        ExitCode::from(2)
    }
}
