//! Command-line front end. Every subcommand prints a human summary or, with
//! `--json`, a JSON payload with sorted keys and integer-only numbers.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 a verification failed,
//! 4 a search ran out of budget, 1 internal error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{self, Hypothesis, SearchOptions};
use crate::constructions::{self, CaseTag, RepPlan};
use crate::edcalc;
use crate::error::{Error, Result};
use crate::genfree;
use crate::lattice::{LatticeSpec, Weight};
use crate::permgroup::{self, Perm, PermGroupSpec};
use crate::properties;

/// `println!` that ignores a closed stdout, e.g. when piped into `head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Search-space cap applied by the quick reproduction profile.
pub const QUICK_SEARCH_CAP: u128 = 4096;

#[derive(Debug, Parser)]
#[command(name = "ednorm", version, about = "Invariant weight sets for Sylow subgroups of symmetric groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the witness weight set for a case.
    Construct(PlanArgs),
    /// Check generic freeness of the witness representation.
    CheckGenfree(PlanArgs),
    /// Orbit of a weight under P_n or under given permutations.
    Orbit(OrbitArgs),
    /// Exact minimum size of an invariant generating subset of X_n mod q.
    SearchMin(SearchArgs),
    /// Compare the exact minimum with the applicable lower bound.
    Verify(VerifyArgs),
    /// Closed-form essential dimension, single value or table.
    Ed(EdArgs),
    /// Run the whole verification matrix and write a JSON report.
    ReproduceAll(ReproduceArgs),
}

#[derive(Debug, clap::Args)]
pub struct PlanArgs {
    /// a, b, c, d or sym; detected from n and p when omitted.
    #[arg(long, value_parser = parse_case)]
    pub case: Option<CaseTag>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, clap::Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub n: usize,
    /// Prime for the Sylow subgroup; not needed with --perm.
    #[arg(long)]
    pub p: Option<u64>,
    /// Modulus of the lattice, 0 for the integer lattice.
    #[arg(long, default_value_t = 0)]
    pub q: u64,
    /// Entries as a JSON array, e.g. "[1,0,-1,0]".
    #[arg(long)]
    pub weight: String,
    /// Generator in cycle notation, e.g. "(1 2)(3 4)"; repeatable.
    #[arg(long = "perm")]
    pub perms: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    /// Node budget; accepts forms like 1e7.
    #[arg(long, value_parser = parse_budget, default_value = "1e7")]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundChoice {
    /// n = p^r: at least p^(2r-1) elements, q = p (odd p) or 4 (p = 2).
    PrimePower,
    /// q = p: at least p^e (n - p^e) elements, p^e the p-part of n.
    General,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub bound: BoundChoice,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub r: Option<u32>,
    /// Modulus for the prime-power bound; defaults to p, or 4 when p = 2.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, value_parser = parse_budget, default_value = "1e7")]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, clap::Args)]
pub struct EdArgs {
    #[arg(long, required_unless_present = "table")]
    pub n: Option<u64>,
    #[arg(long)]
    pub p: u64,
    #[arg(long, requires = "max_n")]
    pub table: bool,
    #[arg(long)]
    pub max_n: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, clap::Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum, default_value_t = Profile::Quick)]
    pub profile: Profile,
    #[arg(long, default_value_t = properties::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "reproduce-report.json")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

fn parse_case(s: &str) -> std::result::Result<CaseTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_budget(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("budget must be a nonnegative integer, got {s}"))
    }
}

/// One subcommand invocation or one row of the reproduction matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub tool_version: String,
    pub elapsed_micros: u64,
    pub result: Value,
    pub exit_code: i32,
}

/// Failure of a subcommand, already mapped to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            Error::Internal(_) | Error::Overflow => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

/// Pretty JSON; keys come out sorted because `Value` objects are ordered maps.
pub fn render_json(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("a JSON value always renders")
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Construct(a) => construct(&a),
        Command::CheckGenfree(a) => check_genfree(&a),
        Command::Orbit(a) => orbit(&a),
        Command::SearchMin(a) => search_min(&a),
        Command::Verify(a) => verify(&a),
        Command::Ed(a) => ed(&a),
        Command::ReproduceAll(a) => reproduce_all(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn plan_from_args(a: &PlanArgs) -> std::result::Result<RepPlan, Failure> {
    let p = a.p;
    let case = match (a.case, a.n) {
        (Some(c), _) => c,
        (None, Some(n)) => CaseTag::detect(n as u64, p),
        (None, None) => return Err(usage("give --case or --n")),
    };
    let need_n = || a.n.ok_or_else(|| usage(format!("case {case} needs --n")));
    let plan = match case {
        CaseTag::A => constructions::lambda_a(need_n()?, p)?,
        CaseTag::B => constructions::lambda_b(p)?,
        CaseTag::C => {
            let r = match (a.r, a.n) {
                (Some(r), _) => r,
                (None, Some(n)) => crate::arith::log_exact(n as u64, p)
                    .ok_or_else(|| usage(format!("{n} is not a power of {p}")))?,
                (None, None) => return Err(usage("case c needs --r or --n")),
            };
            constructions::lambda_c(p, r)?
        }
        CaseTag::D => constructions::lambda_d(need_n()?, p)?,
        CaseTag::Sym => constructions::dual_basis_plan(need_n()?, p)?,
    };
    if let Some(n) = a.n {
        if n != plan.n {
            return Err(usage(format!("--n {n} does not match the plan degree {}", plan.n)));
        }
    }
    Ok(plan)
}

fn weight_list(plan: &RepPlan) -> String {
    plan.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ")
}

fn construct(a: &PlanArgs) -> std::result::Result<i32, Failure> {
    let plan = plan_from_args(a)?;
    if a.json {
        out!("{}", render_json(&to_value(&plan)));
    } else {
        out!("case {}, n = {}, p = {}", plan.case, plan.n, plan.p);
        out!("Lambda: {} weights", plan.weights.len());
        out!("  {}", weight_list(&plan));
        for e in &plan.extra {
            out!("extra summand: {} (dimension {})", e.description, e.dimension);
        }
        out!("total dimension: {}", plan.total_dimension);
        out!("total dimension - (n - 1): {}", plan.excess_dimension());
    }
    Ok(EXIT_OK)
}

fn check_genfree(a: &PlanArgs) -> std::result::Result<i32, Failure> {
    let plan = plan_from_args(a)?;
    let verdict = genfree::check_plan(&plan)?;
    if a.json {
        let v = json!({ "case": plan.case, "n": plan.n, "p": plan.p, "verdict": verdict });
        out!("{}", render_json(&v));
    } else {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        out!("case {}, n = {}, p = {}, |Lambda| = {}", plan.case, plan.n, plan.p, plan.weights.len());
        out!("Lambda spans the character lattice: {}", yes_no(verdict.spans_ok));
        if let Some(faithful) = verdict.kernel_faithful {
            out!(
                "faithful on the relation module: {} ({} elements tested, kernel rank {})",
                yes_no(faithful),
                verdict.elements_tested,
                verdict.kernel_rank.unwrap_or(0)
            );
            if let Some(g) = &verdict.trivial_element {
                out!("  acts trivially: {g}");
            }
        }
        if let Some(faithful) = verdict.summand_faithful {
            out!("extra summand faithful: {}", yes_no(faithful));
        }
        out!("generically free: {}", yes_no(verdict.overall));
    }
    Ok(if verdict.overall { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn orbit(a: &OrbitArgs) -> std::result::Result<i32, Failure> {
    let entries: Vec<i64> =
        serde_json::from_str(&a.weight).map_err(|e| usage(format!("--weight: {e}")))?;
    let spec = LatticeSpec::zero_sum(a.n, a.q)?;
    let w = Weight::new(entries, spec)?;
    let group = if a.perms.is_empty() {
        let p = a.p.ok_or_else(|| usage("give --p or at least one --perm"))?;
        permgroup::sylow_subgroup(a.n, p)?
    } else {
        let gens =
            a.perms.iter().map(|s| Perm::parse_cycles(s, a.n)).collect::<Result<Vec<_>>>()?;
        PermGroupSpec::from_generators(a.n, gens)?
    };
    let orbit = permgroup::orbit(&group, &w)?;
    if a.json {
        out!("{}", render_json(&json!({ "weight": w, "size": orbit.len(), "orbit": orbit })));
    } else {
        out!("orbit of {w}: {} elements", orbit.len());
        for x in &orbit {
            out!("  {x}");
        }
    }
    Ok(EXIT_OK)
}

fn hypothesis_text(h: Hypothesis) -> &'static str {
    match h {
        Hypothesis::Inside => "inside proven range",
        Hypothesis::InsideViaReduction => "inside proven range (via reduction mod p)",
        Hypothesis::Outside => "outside proven range",
    }
}

fn search_min(a: &SearchArgs) -> std::result::Result<i32, Failure> {
    let options = SearchOptions { budget: a.budget, ..SearchOptions::default() };
    let result = bounds::min_invariant_generating_size_with(a.n, a.p, a.q, &options)?;
    if a.json {
        out!("{}", render_json(&to_value(&result)));
    } else {
        out!("X_{} mod {}, p = {}: minimum invariant generating set has {} elements", a.n, a.q, a.p, result.minimum);
        out!("orbits: {}, nodes explored: {}", result.orbit_count, result.nodes_explored);
        out!("{}", hypothesis_text(result.hypothesis));
        out!("witness:");
        for w in &result.witness {
            out!("  {w}");
        }
    }
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs) -> std::result::Result<i32, Failure> {
    let p = a.p;
    crate::arith::ensure_prime(p)?;
    let (n, q) = match a.bound {
        BoundChoice::PrimePower => {
            let r = a.r.ok_or_else(|| usage("--bound prime-power needs --r"))?;
            if r < 1 {
                return Err(usage("--r must be at least 1"));
            }
            let n = p.checked_pow(r).ok_or_else(|| usage("p^r too large"))? as usize;
            let q = a.q.unwrap_or_else(|| bounds::default_modulus(p));
            if let Some(n_given) = a.n.filter(|&m| m != n) {
                return Err(usage(format!("--n {n_given} differs from p^r = {n}")));
            }
            // q = p^e with e >= 1 for odd p and e >= 2 for p = 2
            let (_, hypothesis) = bounds::applicable_bound(n as u64, p, q)?;
            if hypothesis == Hypothesis::Outside {
                return Err(usage(format!(
                    "q = {q} is outside the bound's hypothesis for p = {p}; use search-min to explore it"
                )));
            }
            (n, q)
        }
        BoundChoice::General => {
            let n = a.n.ok_or_else(|| usage("--bound general needs --n"))?;
            if matches!(crate::arith::log_exact(n as u64, p), Some(r) if r >= 1) {
                return Err(usage(format!("{n} is a power of {p}; use --bound prime-power")));
            }
            if a.q.is_some_and(|q| q != p) {
                return Err(usage("--bound general runs with q = p"));
            }
            (n, p)
        }
    };
    let options = SearchOptions { budget: a.budget, ..SearchOptions::default() };
    let report = bounds::verify_lower_bound(n, p, q, &options)?;
    if a.json {
        out!("{}", render_json(&to_value(&report)));
    } else {
        let bound = report.bound.map_or("none".to_string(), |b| b.to_string());
        out!("X_{n} mod {q}, p = {p}: bound {bound}, minimum {}", report.minimum);
        out!("tight: {}, bound holds: {}", report.tight, report.holds);
        out!("{}", hypothesis_text(report.hypothesis));
    }
    Ok(if report.holds { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn ed(a: &EdArgs) -> std::result::Result<i32, Failure> {
    if a.table {
        let max_n = a.max_n.ok_or_else(|| usage("--table needs --max-n"))?;
        let rows = edcalc::ed_table(max_n, a.p)?;
        if a.json {
            out!("{}", render_json(&to_value(&rows)));
        } else {
            out!("{}", edcalc::markdown_table(&rows).trim_end());
        }
        let consistent = rows.iter().all(|r| r.consistency != Some(false));
        return Ok(if consistent { EXIT_OK } else { EXIT_VERIFY_FAILED });
    }
    let n = a.n.ok_or_else(|| usage("give --n or --table"))?;
    let report = edcalc::ed_value(n, a.p)?;
    if a.json {
        out!("{}", render_json(&to_value(&report)));
    } else {
        out!("ed(N; {}) for n = {}: {} (case {})", report.p, report.n, report.value, report.case);
        out!("p-part of n: {}", report.p_power);
        if let Some(d) = report.witness_total_dimension {
            out!("witness dimension {d}, consistent: {}", report.consistency == Some(true));
        }
        out!("{}", report.field_hypothesis);
    }
    Ok(if report.consistency == Some(false) { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

type RowCheck = Box<dyn Fn() -> Result<(Value, bool)> + Send + Sync>;

struct Row {
    command: &'static str,
    parameters: Value,
    check: RowCheck,
}

fn row(command: &'static str, parameters: Value, check: impl Fn() -> Result<(Value, bool)> + Send + Sync + 'static) -> Row {
    Row { command, parameters, check: Box::new(check) }
}

fn search_row(n: usize, p: u64, q: u64, expected: usize, cap: u128) -> Row {
    row("search-min", json!({ "n": n, "p": p, "q": q, "expected": expected }), move || {
        let options = SearchOptions { max_elements: cap, ..SearchOptions::default() };
        let report = bounds::verify_lower_bound(n, p, q, &options)?;
        let pass = report.minimum == expected
            && if report.hypothesis == Hypothesis::Outside { report.bound.is_none() } else { report.tight };
        Ok((to_value(&report), pass))
    })
}

fn genfree_row(label: &'static str, build: fn() -> Result<RepPlan>) -> Row {
    row("check-genfree", json!({ "plan": label }), move || {
        let plan = build()?;
        let verdict = genfree::check_plan(&plan)?;
        let summary = json!({
            "spans": verdict.spans_ok,
            "kernel_faithful": verdict.kernel_faithful,
            "summand_faithful": verdict.summand_faithful,
            "method": verdict.method,
            "elements_tested": verdict.elements_tested,
            "overall": verdict.overall,
        });
        Ok((summary, verdict.overall))
    })
}

fn property_row(seed: u64, suite: fn(u64, usize) -> Result<properties::PropertyReport>) -> Row {
    row("property", json!({ "seed": seed, "cases": properties::DEFAULT_CASES }), move || {
        let report = suite(seed, properties::DEFAULT_CASES)?;
        let pass = report.passed();
        Ok((to_value(&report), pass))
    })
}

fn quick_rows(seed: u64) -> Vec<Row> {
    let cap = QUICK_SEARCH_CAP;
    vec![
        row("ed", json!({ "max_n": 32, "p": [2, 3, 5] }), || {
            let mut rows = Vec::new();
            for p in [2, 3, 5] {
                rows.extend(edcalc::ed_table(32, p)?);
            }
            let pass = rows.iter().all(|r| r.consistency == Some(true));
            Ok((json!({ "rows": rows.len(), "all_consistent": pass }), pass))
        }),
        row("construct", json!({ "sizes": "c(2,2) c(2,3) c(3,2) d(6,2) d(12,2) d(10,2) d(12,3)" }), || {
            let mut sizes = Vec::new();
            let mut pass = true;
            for (p, r) in [(2u64, 2u32), (2, 3), (3, 2)] {
                let len = constructions::lambda_c(p, r)?.weights.len() as u64;
                pass &= len == p.pow(2 * r - 1);
                sizes.push(json!({ "case": "c", "p": p, "r": r, "size": len }));
            }
            for (n, p) in [(6usize, 2u64), (12, 2), (10, 2), (12, 3)] {
                let len = constructions::lambda_d(n, p)?.weights.len() as u64;
                let pe = p.pow(crate::arith::valuation(n as u64, p));
                pass &= len == pe * (n as u64 - pe);
                sizes.push(json!({ "case": "d", "n": n, "p": p, "size": len }));
            }
            Ok((json!({ "sizes": sizes }), pass))
        }),
        genfree_row("c(2,2)", || constructions::lambda_c(2, 2)),
        genfree_row("d(6,2)", || constructions::lambda_d(6, 2)),
        genfree_row("a(5,2)", || constructions::lambda_a(5, 2)),
        row("kernel-witness", json!({ "cases": "c(4,2) c(9,3) d(6,2) d(12,3)" }), || {
            let mut pass = true;
            let mut shown = Vec::new();
            for (case, n, p) in [(CaseTag::C, 4usize, 2u64), (CaseTag::C, 9, 3), (CaseTag::D, 6, 2), (CaseTag::D, 12, 3)] {
                let w = constructions::kernel_witness(case, n, p)?;
                let z = permgroup::center_order_p_elements(&permgroup::sylow_subgroup(n, p)?)?;
                let moved = w.moved_by(&z[0])? != w.coefficients;
                pass &= w.in_kernel()? && moved;
                shown.push(json!({ "case": case, "n": n, "p": p, "vector": w.to_string(), "moved_by": z[0].to_string() }));
            }
            Ok((json!({ "witnesses": shown }), pass))
        }),
        search_row(2, 2, 4, 2, cap),
        search_row(3, 3, 3, 3, cap),
        search_row(2, 2, 2, 1, cap),
        row("property", json!({ "seed": seed, "cases": properties::DEFAULT_CASES, "suites": "all" }), move || {
            let reports = properties::run_all(seed, properties::DEFAULT_CASES)?;
            let pass = reports.iter().all(|r| r.passed());
            Ok((to_value(&reports), pass))
        }),
    ]
}

fn full_rows(seed: u64) -> Vec<Row> {
    let cap = bounds::MAX_SEARCH_ELEMENTS;
    let mut rows = quick_rows(seed);
    rows.extend([
        search_row(4, 2, 4, 8, cap),
        search_row(6, 2, 2, 8, cap),
        search_row(5, 5, 5, 5, cap),
        search_row(9, 3, 3, 27, cap),
        search_row(8, 2, 4, 32, cap),
        genfree_row("c(3,2)", || constructions::lambda_c(3, 2)),
        genfree_row("c(2,3)", || constructions::lambda_c(2, 3)),
        genfree_row("d(12,2)", || constructions::lambda_d(12, 2)),
        genfree_row("a(7,2)", || constructions::lambda_a(7, 2)),
        genfree_row("b(5)", || constructions::lambda_b(5)),
        row("fiber", json!({ "n": 4, "p": 2, "q": 4 }), || {
            let found = bounds::min_invariant_generating_size(4, 2, 4)?;
            let report = bounds::fiber_check(&found.witness, 2)?;
            let pass = report.violations.is_empty() && report.min_count.is_some();
            Ok((to_value(&report), pass))
        }),
        row("pgl-bound", json!({ "p": [2, 3, 5], "r": [2, 3] }), || {
            let mut pass = true;
            for p in [2u64, 3, 5] {
                for r in [2u32, 3] {
                    let n = p.pow(r);
                    pass &= edcalc::pgl_upper_bound(p, r)? == edcalc::ed_value(n, p)?.value;
                }
            }
            Ok((json!({ "matches_case_c": pass }), pass))
        }),
        property_row(seed, properties::center_reduction_agreement),
    ]);
    rows
}

fn run_row(r: &Row) -> RunManifest {
    let started = Instant::now();
    let (result, exit_code) = match (r.check)() {
        Ok((result, pass)) => (result, if pass { EXIT_OK } else { EXIT_VERIFY_FAILED }),
        Err(e) => {
            let code = Failure::from(e.clone()).code;
            (json!({ "error": e.to_string() }), code)
        }
    };
    RunManifest {
        command: r.command.to_string(),
        parameters: r.parameters.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        elapsed_micros: started.elapsed().as_micros() as u64,
        result,
        exit_code,
    }
}

/// Runs every row of the profile in parallel; output order follows the row list.
pub fn reproduce(profile: Profile, seed: u64) -> Vec<RunManifest> {
    let rows = match profile {
        Profile::Quick => quick_rows(seed),
        Profile::Full => full_rows(seed),
    };
    rows.par_iter().map(run_row).collect()
}

/// Overall exit code of a report: 0 when every row passed.
pub fn overall_exit_code(manifests: &[RunManifest]) -> i32 {
    let failing: Vec<i32> = manifests.iter().map(|m| m.exit_code).filter(|&c| c != EXIT_OK).collect();
    if failing.is_empty() {
        EXIT_OK
    } else if failing.iter().all(|&c| c == EXIT_BUDGET) {
        EXIT_BUDGET
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn reproduce_all(a: &ReproduceArgs) -> std::result::Result<i32, Failure> {
    let manifests = reproduce(a.profile, a.seed);
    let report = to_value(&manifests);
    std::fs::write(&a.out, render_json(&report) + "\n").map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot write {}: {e}", a.out.display()),
    })?;
    if a.json {
        out!("{}", render_json(&report));
    } else {
        for (k, m) in manifests.iter().enumerate() {
            let status = if m.exit_code == EXIT_OK { "PASS" } else { "FAIL" };
            out!("{status} {:>2} {} {}", k + 1, m.command, m.parameters);
        }
        let passed = manifests.iter().filter(|m| m.exit_code == EXIT_OK).count();
        out!("{passed}/{} rows passed; report written to {}", manifests.len(), a.out.display());
    }
    Ok(overall_exit_code(&manifests))
}
