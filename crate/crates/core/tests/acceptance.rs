//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. All comparisons are exact.

mod common;

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ednorm::bounds::{self, Hypothesis, SearchOptions};
use ednorm::constructions::{self, CaseTag, RepPlan};
use ednorm::edcalc;
use ednorm::genfree::{self, Method};
use ednorm::lattice::{LatticeSpec, Weight, WeightSet};
use ednorm::permgroup::{self, sylow_subgroup};
use ednorm::properties;

const SEED: u64 = 20_240_917;
const SEARCH_TIME_LIMIT: Duration = Duration::from_secs(30);

type Check = Result<String, String>;
type PlanFn = fn() -> ednorm::Result<RepPlan>;
type CriterionFn = fn() -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn zero_based(g: &permgroup::Perm) -> Vec<usize> {
    g.images().into_iter().map(|x| x - 1).collect()
}

fn generators(n: usize, p: u64) -> Result<Vec<Vec<usize>>, String> {
    Ok(ok(sylow_subgroup(n, p))?.generators.iter().map(zero_based).collect())
}

fn rows(ws: &WeightSet) -> Vec<Vec<i64>> {
    ws.iter().map(|w| w.entries().to_vec()).collect()
}

/// Formula values for every (n, p) with n <= 32, p in {2, 3, 5}.
fn closed_forms() -> Check {
    let mut count = 0;
    for p in [2u64, 3, 5] {
        for n in 1..=32u64 {
            let report = ok(edcalc::ed_value(n, p))?;
            let expected = common::ed_by_hand(n, p);
            ensure(report.value == expected, || {
                format!("n={n} p={p}: got {}, formula gives {expected}", report.value)
            })?;
            ensure(report.p_power == common::p_part(n, p), || format!("p-part wrong at n={n} p={p}"))?;
            count += 1;
        }
    }
    for (n, p, v) in [(4u64, 2u64, 5u64), (6, 2, 3), (9, 3, 19), (5, 2, 2), (3, 3, 2)] {
        ensure(ok(edcalc::ed_value(n, p))?.value == v, || format!("({n},{p}) is not {v}"))?;
    }
    Ok(format!("{count} values"))
}

/// Sizes of the case c and d witness sets and the dimension bookkeeping.
fn witness_dimensions() -> Check {
    for (p, r) in [(2u64, 2u32), (2, 3), (3, 2)] {
        let len = ok(constructions::lambda_c(p, r))?.weights.len() as u64;
        let expected = common::pow(p, 2 * r - 1);
        ensure(len == expected, || format!("|Lambda_c({p},{r})| = {len}, expected {expected}"))?;
    }
    for (n, p) in [(6usize, 2u64), (12, 2), (10, 2), (12, 3)] {
        let len = ok(constructions::lambda_d(n, p))?.weights.len() as u64;
        let pe = common::p_part(n as u64, p);
        let expected = pe * (n as u64 - pe);
        ensure(len == expected, || format!("|Lambda_d({n},{p})| = {len}, expected {expected}"))?;
    }
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        for n in 1..=27usize {
            let plan = ok(constructions::plan_for(n, p))?;
            let excess = plan.total_dimension as i64 - (n as i64 - 1);
            let expected = common::ed_by_hand(n as u64, p) as i64;
            ensure(excess == expected, || {
                format!("n={n} p={p}: total {} - (n-1) = {excess}, expected {expected}", plan.total_dimension)
            })?;
            checked += 1;
        }
    }
    Ok(format!("7 sizes, {checked} dimension checks"))
}

/// Central element rotating the consecutive `p`-runs inside `1..=len`.
fn run_rotation(n: usize, p: usize, len: usize) -> Vec<usize> {
    let mut g: Vec<usize> = (0..n).collect();
    for base in (0..len).step_by(p) {
        for k in 0..p {
            g[base + k] = base + (k + 1) % p;
        }
    }
    g
}

/// Generic freeness verdicts and the explicit kernel vectors.
fn generic_freeness() -> Check {
    let kernel_cases: [(&str, PlanFn); 5] = [
        ("c(2,2)", || constructions::lambda_c(2, 2)),
        ("c(3,2)", || constructions::lambda_c(3, 2)),
        ("c(2,3)", || constructions::lambda_c(2, 3)),
        ("d(6,2)", || constructions::lambda_d(6, 2)),
        ("d(12,2)", || constructions::lambda_d(12, 2)),
    ];
    for (label, build) in kernel_cases {
        let plan = ok(build())?;
        let group = ok(sylow_subgroup(plan.n, plan.p))?;
        let v = ok(genfree::check_faithful(&plan.weights, &group))?;
        ensure(v.overall && v.spans_ok && v.kernel_faithful == Some(true), || format!("{label}: {v:?}"))?;
    }
    let summand_cases: [(&str, PlanFn); 5] = [
        ("a(5,2)", || constructions::lambda_a(5, 2)),
        ("a(7,2)", || constructions::lambda_a(7, 2)),
        ("b(2)", || constructions::lambda_b(2)),
        ("b(3)", || constructions::lambda_b(3)),
        ("b(5)", || constructions::lambda_b(5)),
    ];
    for (label, build) in summand_cases {
        let plan = ok(build())?;
        let group = ok(sylow_subgroup(plan.n, plan.p))?;
        let v = ok(genfree::check_with_summands(&plan, &group))?;
        ensure(v.overall, || format!("{label}: {v:?}"))?;
    }

    let witnesses = [
        (CaseTag::C, 4usize, 2u64),
        (CaseTag::C, 8, 2),
        (CaseTag::C, 9, 3),
        (CaseTag::D, 6, 2),
        (CaseTag::D, 12, 2),
        (CaseTag::D, 12, 3),
    ];
    for (case, n, p) in witnesses {
        let w = ok(constructions::kernel_witness(case, n, p))?;
        let weights = rows(&w.lambda);
        let mut sum = vec![0i64; n];
        for (c, wt) in w.coefficients.iter().zip(&weights) {
            for (s, x) in sum.iter_mut().zip(wt) {
                *s += c * x;
            }
        }
        ensure(sum.iter().all(|&x| x == 0), || format!("{case}({n},{p}) witness sums to {sum:?}"))?;

        let first_block = if case == CaseTag::C { n } else { common::p_part(n as u64, p) as usize };
        let z = run_rotation(n, p as usize, first_block);
        let index: HashMap<&Vec<i64>, usize> = weights.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let mut image = vec![0i64; weights.len()];
        for (k, c) in w.coefficients.iter().enumerate() {
            image[index[&common::act(&z, &weights[k])]] = *c;
        }
        ensure(image != w.coefficients, || format!("{case}({n},{p}) witness is fixed by the center"))?;
    }
    Ok("10 verdicts, 6 kernel vectors".into())
}

/// Independent certification of a search witness.
fn certify_witness(result: &bounds::SearchResult, n: usize, p: u64, q: u64) -> Result<(), String> {
    let set = rows(&result.witness);
    ensure(set.len() == result.minimum, || "witness size differs from minimum".into())?;
    ensure(common::generates(&set, n, q as i64), || format!("witness for ({n},{p},{q}) does not generate"))?;
    let members: std::collections::HashSet<&Vec<i64>> = set.iter().collect();
    for g in generators(n, p)? {
        for w in &set {
            let image: Vec<i64> = common::act(&g, w).into_iter().map(|x| x.rem_euclid(q as i64)).collect();
            ensure(members.contains(&image), || format!("witness for ({n},{p},{q}) is not invariant"))?;
        }
    }
    Ok(())
}

/// Exact minima, tightness of the bounds, and exhaustive cross-checks.
fn lower_bound_searches() -> Check {
    let instances = [(2usize, 2u64, 4u64, 2usize), (4, 2, 4, 8), (3, 3, 3, 3), (6, 2, 2, 8), (5, 5, 5, 5)];
    let mut slowest = Duration::ZERO;
    for (n, p, q, expected) in instances {
        let started = Instant::now();
        let report = ok(bounds::verify_lower_bound(n, p, q, &SearchOptions::default()))?;
        let elapsed = started.elapsed();
        slowest = slowest.max(elapsed);
        ensure(elapsed < SEARCH_TIME_LIMIT, || format!("({n},{p},{q}) took {elapsed:?}"))?;
        ensure(report.minimum == expected, || {
            format!("({n},{p},{q}): minimum {}, expected {expected}", report.minimum)
        })?;
        ensure(report.tight && report.holds && report.bound == Some(expected as u64), || {
            format!("({n},{p},{q}): bound {:?} not tight", report.bound)
        })?;
        let result = ok(bounds::min_invariant_generating_size(n, p, q))?;
        certify_witness(&result, n, p, q)?;
        if common::pow(q, n as u32 - 1) <= 256 {
            let naive = common::min_by_orbit_unions(n, q as i64, &generators(n, p)?);
            ensure(naive == expected, || format!("({n},{p},{q}): exhaustive minimum {naive}"))?;
        }
        if common::pow(q, n as u32 - 1) <= 16 {
            let naive = common::min_by_all_subsets(n, q as i64, &generators(n, p)?);
            ensure(naive == expected, || format!("({n},{p},{q}): all-subset minimum {naive}"))?;
        }
    }
    Ok(format!("5 instances, slowest search {} ms", slowest.as_millis()))
}

/// p = q = 2, n = 2: a single element generates, and the output says why
/// no bound applies.
fn degenerate_case() -> Check {
    let result = ok(bounds::min_invariant_generating_size(2, 2, 2))?;
    ensure(result.minimum == 1, || format!("minimum {}", result.minimum))?;
    ensure(result.hypothesis == Hypothesis::Outside, || format!("{:?}", result.hypothesis))?;
    certify_witness(&result, 2, 2, 2)?;
    ensure(common::min_by_all_subsets(2, 2, &generators(2, 2)?) == 1, || "oracle disagrees".into())?;
    let (bound, _) = ok(bounds::applicable_bound(2, 2, 2))?;
    ensure(bound.is_none(), || "a bound was reported".into())?;

    let out = ok(Command::new(env!("CARGO_BIN_EXE_ednorm"))
        .args(["search-min", "--n", "2", "--p", "2", "--q", "2"])
        .output())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0) && text.contains("outside proven range"), || {
        format!("CLI said: {text}")
    })?;
    let json = ok(serde_json::to_string(&result.hypothesis))?;
    ensure(json == "\"outside proven range\"", || json.clone())?;
    Ok("minimum 1 < p".into())
}

/// The five seeded property suites.
fn property_suites() -> Check {
    let suites: [fn(u64, usize) -> ednorm::Result<properties::PropertyReport>; 5] = [
        properties::sigma_suite,
        properties::nakayama_suite,
        properties::orbit_size_suite,
        properties::action_suite,
        properties::center_suite,
    ];
    let mut total = 0;
    for suite in suites {
        let report = ok(suite(SEED, 100))?;
        ensure(report.cases == 100 && report.passed(), || {
            format!("{}: {} failures, first {:?}", report.name, report.failures, report.first_failure)
        })?;
        total += report.cases;
    }
    Ok(format!("{total} cases, 0 failures"))
}

/// Center reduction against an independent faithfulness oracle.
fn oracle_agreement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut outcomes = [0usize; 2];
    for case in 0..100 {
        let p = *[2u64, 3, 5].choose(&mut rng).expect("nonempty");
        let n = rng.gen_range(p as usize..=6);
        let group = ok(sylow_subgroup(n, p))?;
        let spec = ok(LatticeSpec::zero_sum(n, 0))?;
        let mut lambda = WeightSet::empty(spec);
        for _ in 0..rng.gen_range(1..=3) {
            let mut entries: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            entries[n - 1] = -entries[..n - 1].iter().sum::<i64>();
            let w = ok(Weight::new(entries, spec))?;
            lambda = ok(lambda.union(&ok(permgroup::orbit(&group, &w))?))?;
        }
        let reduced = ok(genfree::check_faithful_with(&lambda, &group, Method::CenterReduction))?;

        let weights = rows(&lambda);
        let index: HashMap<&Vec<i64>, usize> = weights.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let elements = common::group_elements(&generators(n, p)?, n);
        ensure(elements.len() <= 10_000, || "group too large".into())?;
        let faithful = elements.iter().filter(|g| g.iter().enumerate().any(|(i, &x)| i != x)).all(|g| {
            let pi: Vec<usize> = weights.iter().map(|w| index[&common::act(g, w)]).collect();
            !common::acts_trivially_on_relations(&weights, &pi)
        });
        ensure(reduced.kernel_faithful == Some(faithful), || {
            format!("case {case}: n={n} p={p}, reduction {:?}, oracle {faithful}", reduced.kernel_faithful)
        })?;
        outcomes[faithful as usize] += 1;
    }
    Ok(format!("100 cases ({} faithful, {} not), 0 disagreements", outcomes[1], outcomes[0]))
}

fn main() {
    let criteria: [(&str, CriterionFn); 7] = [
        ("closed-form table", closed_forms),
        ("witness dimensions", witness_dimensions),
        ("generic freeness", generic_freeness),
        ("lower-bound searches", lower_bound_searches),
        ("degenerate p = q = 2", degenerate_case),
        ("property suites", property_suites),
        ("oracle agreement", oracle_agreement),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = started.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{ms} ms]", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {why} [{ms} ms]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 7 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
