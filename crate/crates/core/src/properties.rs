//! Seeded randomized checks of the algebraic invariants the rest of the crate
//! relies on. Each suite draws its inputs from a ChaCha stream so a seed
//! reproduces a run exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds;
use crate::error::Result;
use crate::genfree::{self, Method};
use crate::lattice::{self, LatticeSpec, Weight, WeightSet};
use crate::permgroup::{self, sylow_subgroup, Perm, PermGroupSpec};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_CASES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyReport {
    fn new(name: &'static str, seed: u64) -> Self {
        PropertyReport { name, seed, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform weight of `X_n` mod `q`, or with entries in `[-bound, bound]` for `q = 0`.
fn random_weight(rng: &mut ChaCha8Rng, spec: LatticeSpec, bound: i64) -> Weight {
    let n = spec.n();
    let q = spec.modulus() as i64;
    let mut entries: Vec<i64> = (0..n)
        .map(|_| if q == 0 { rng.gen_range(-bound..=bound) } else { rng.gen_range(0..q) })
        .collect();
    let head: i64 = entries[..n - 1].iter().sum();
    entries[n - 1] = -head;
    Weight::new(entries, spec).expect("entries sum to zero")
}

/// Product of a random word in the generators.
fn random_element(rng: &mut ChaCha8Rng, group: &PermGroupSpec) -> Perm {
    let mut g = Perm::identity(group.degree);
    if group.generators.is_empty() {
        return g;
    }
    for _ in 0..rng.gen_range(0..24) {
        g = group.generators.choose(rng).expect("nonempty").compose(&g);
    }
    g
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Perm::from_images(&images).expect("a shuffle is a permutation")
}

/// `Σ` is additive, equivariant for the block-permuting copy of
/// `P_(n/p)`, and constant on orbits of the small-block rotations.
pub fn sigma_suite(seed: u64, cases: usize) -> Result<PropertyReport> {
    let mut rng = rng_for(seed, 1);
    let mut report = PropertyReport::new("sigma homomorphism and equivariance", seed);
    for _ in 0..cases {
        let p: u64 = *[2u64, 3].choose(&mut rng).expect("nonempty");
        let m = rng.gen_range(1..=4usize);
        let n = m * p as usize;
        let q = *[p, p * p, 0].choose(&mut rng).expect("nonempty");
        let spec = LatticeSpec::zero_sum(n, q)?;
        let w = random_weight(&mut rng, spec, 5);
        let v = random_weight(&mut rng, spec, 5);

        let additive = bounds::sigma_map(&w.add(&v)?, p)?
            == bounds::sigma_map(&w, p)?.add(&bounds::sigma_map(&v, p)?)?;

        let g = random_element(&mut rng, &sylow_subgroup(m, p)?);
        let lifted = g.inflate(p as usize);
        let equivariant = bounds::sigma_map(&permgroup::act(&lifted, &w)?, p)?
            == permgroup::act(&g, &bounds::sigma_map(&w, p)?)?;

        let rotations = PermGroupSpec::from_generators(n, permgroup::small_block_rotations(n, p)?)?;
        let rotation = random_element(&mut rng, &rotations);
        let constant = bounds::sigma_map(&permgroup::act(&rotation, &w)?, p)?
            == bounds::sigma_map(&w, p)?;

        report.record(additive && equivariant && constant, || {
            format!("n={n} p={p} q={q} w={w} v={v} g={g} rotation={rotation}")
        });
    }
    Ok(report)
}

/// Union of orbits of random weights, grown until it generates.
fn random_invariant_generating_set(
    rng: &mut ChaCha8Rng,
    group: &PermGroupSpec,
    spec: LatticeSpec,
) -> Result<WeightSet> {
    let mut lambda = WeightSet::empty(spec);
    loop {
        let seed = random_weight(rng, spec, 3);
        lambda = lambda.union(&permgroup::orbit(group, &seed)?)?;
        if lattice::spans(&lambda)? && rng.gen_bool(0.5) {
            return Ok(lambda);
        }
    }
}

/// Dropping the elements of `pX_n` from an invariant generating set keeps it generating.
pub fn nakayama_suite(seed: u64, cases: usize) -> Result<PropertyReport> {
    let mut rng = rng_for(seed, 2);
    let mut report = PropertyReport::new("Nakayama filter preserves generation", seed);
    let settings: [(usize, u64, u64); 6] =
        [(2, 2, 4), (2, 2, 8), (4, 2, 4), (3, 3, 3), (3, 3, 9), (6, 2, 2)];
    for _ in 0..cases {
        let &(n, p, q) = settings.choose(&mut rng).expect("nonempty");
        let spec = LatticeSpec::zero_sum(n, q)?;
        let lambda = random_invariant_generating_set(&mut rng, &sylow_subgroup(n, p)?, spec)?;
        let filtered = bounds::nakayama_filter(&lambda, p);
        let ok = matches!(&filtered, Ok(f) if lattice::spans(f)?);
        report.record(ok, || format!("n={n} p={p} q={q} lambda size {}", lambda.len()));
    }
    Ok(report)
}

/// Orbit sizes divide the order of the Sylow subgroup.
pub fn orbit_size_suite(seed: u64, cases: usize) -> Result<PropertyReport> {
    let mut rng = rng_for(seed, 3);
    let mut report = PropertyReport::new("orbit sizes divide the group order", seed);
    for _ in 0..cases {
        let p: u64 = *[2u64, 3, 5].choose(&mut rng).expect("nonempty");
        let n = rng.gen_range(1..=9usize);
        let q = *[0, p, p * p].choose(&mut rng).expect("nonempty");
        let group = sylow_subgroup(n, p)?;
        let order = p.pow(group.order_exponent.unwrap_or(0) as u32);
        let w = random_weight(&mut rng, LatticeSpec::zero_sum(n, q)?, 3);
        let size = permgroup::orbit(&group, &w)?.len() as u64;
        report.record(order.is_multiple_of(size), || format!("n={n} p={p} q={q} w={w} orbit {size}"));
    }
    Ok(report)
}

/// `act(g ∘ h, w) = act(g, act(h, w))` for arbitrary permutations.
pub fn action_suite(seed: u64, cases: usize) -> Result<PropertyReport> {
    let mut rng = rng_for(seed, 4);
    let mut report = PropertyReport::new("action composition law", seed);
    for _ in 0..cases {
        let n = rng.gen_range(1..=10usize);
        let q = *[0u64, 2, 3, 4, 9].choose(&mut rng).expect("nonempty");
        let g = random_permutation(&mut rng, n);
        let h = random_permutation(&mut rng, n);
        let w = random_weight(&mut rng, LatticeSpec::zero_sum(n, q)?, 4);
        let ok = permgroup::act(&g.compose(&h), &w)? == permgroup::act(&g, &permgroup::act(&h, &w)?)?;
        report.record(ok, || format!("n={n} g={g} h={h} w={w}"));
    }
    Ok(report)
}

/// Listed central elements have order `p` and commute with every generator.
pub fn center_suite(seed: u64, cases: usize) -> Result<PropertyReport> {
    let mut rng = rng_for(seed, 5);
    let mut report = PropertyReport::new("center elements commute and have order p", seed);
    for _ in 0..cases {
        let p: u64 = *[2u64, 3, 5].choose(&mut rng).expect("nonempty");
        let n = rng.gen_range(1..=27usize);
        let group = sylow_subgroup(n, p)?;
        let center = permgroup::center_order_p_elements(&group)?;
        let ok = center.iter().all(|z| {
            z.order() == p
                && group.generators.iter().all(|g| g.compose(z) == z.compose(g))
        });
        report.record(ok, || format!("n={n} p={p}"));
    }
    Ok(report)
}

/// Center reduction and full enumeration agree on faithfulness for random
/// invariant weight sets over `n <= 6`.
pub fn center_reduction_agreement(seed: u64, cases: usize) -> Result<PropertyReport> {
    let mut rng = rng_for(seed, 6);
    let mut report = PropertyReport::new("center reduction agrees with full enumeration", seed);
    for _ in 0..cases {
        let p: u64 = *[2u64, 3, 5].choose(&mut rng).expect("nonempty");
        let n = rng.gen_range(p as usize..=6);
        let group = sylow_subgroup(n, p)?;
        let spec = LatticeSpec::zero_sum(n, 0)?;
        let mut lambda = WeightSet::empty(spec);
        for _ in 0..rng.gen_range(1..=3) {
            let w = random_weight(&mut rng, spec, 2);
            lambda = lambda.union(&permgroup::orbit(&group, &w)?)?;
        }
        let reduced = genfree::check_faithful_with(&lambda, &group, Method::CenterReduction)?;
        let full = genfree::check_faithful_with(&lambda, &group, Method::FullEnumeration)?;
        report.record(reduced.kernel_faithful == full.kernel_faithful, || {
            format!("n={n} p={p} lambda={:?}", lambda.iter().map(|w| w.to_string()).collect::<Vec<_>>())
        });
    }
    Ok(report)
}

pub fn run_all(seed: u64, cases: usize) -> Result<Vec<PropertyReport>> {
    Ok(vec![
        sigma_suite(seed, cases)?,
        nakayama_suite(seed, cases)?,
        orbit_size_suite(seed, cases)?,
        action_suite(seed, cases)?,
        center_suite(seed, cases)?,
        center_reduction_agreement(seed, cases)?,
    ])
}
