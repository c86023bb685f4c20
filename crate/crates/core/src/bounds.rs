//! Lower-bound machinery over the `q`-torsion lattice `X_n ⊂ (Z/q)^n`:
//! the small-block sum map, the Nakayama filter, fiber counting, and an exact
//! search for the smallest `P_n`-invariant generating subset of `X_n`.
//!
//! Every invariant subset is a union of orbits, so the search runs over
//! unions of orbits. A subset of the free `Z/q`-module `X_n` generates it iff
//! its image in `X_n / pX_n ≅ F_p^(n-1)` spans, which turns every generation
//! test inside the search into an `F_p` rank computation. The final witness
//! is re-certified with the integer normal-form span test.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeSpec, ModPEchelon, Weight, WeightSet};
use crate::permgroup::{self, sylow_subgroup, Perm, PermGroupSpec};

/// Largest `|X_n| = q^(n-1)` the search accepts.
pub const MAX_SEARCH_ELEMENTS: u128 = 1 << 20;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `Σ`: sums of entries over the consecutive small blocks of length `p`.
pub fn sigma_map(w: &Weight, p: u64) -> Result<Weight> {
    let spec = w.spec();
    let n = spec.n();
    let width = p as usize;
    if width == 0 || !n.is_multiple_of(width) {
        return Err(Error::Precondition(format!("{p} does not divide {n}")));
    }
    let sums: Vec<i64> = w.entries().chunks(width).map(|c| c.iter().sum()).collect();
    let target = match spec.kind() {
        lattice::LatticeKind::ZeroSum => LatticeSpec::zero_sum(n / width, spec.modulus())?,
        lattice::LatticeKind::Full => LatticeSpec::full(n / width, spec.modulus())?,
    };
    Weight::new(sums, target)
}

/// Image of a weight set under [`sigma_map`].
pub fn sigma_image(lambda: &WeightSet, p: u64) -> Result<WeightSet> {
    let images = lambda.iter().map(|w| sigma_map(w, p)).collect::<Result<Vec<_>>>()?;
    let spec = match images.first() {
        Some(w) => w.spec(),
        None => {
            let s = lambda.spec();
            LatticeSpec::zero_sum((s.n() / p as usize).max(1), s.modulus())?
        }
    };
    WeightSet::new(spec, images)
}

/// Removes every element of `pX_n`; the rest still generates.
pub fn nakayama_filter(lambda: &WeightSet, p: u64) -> Result<WeightSet> {
    if !lattice::spans(lambda)? {
        return Err(Error::Precondition("set does not generate the lattice".into()));
    }
    let mut kept = Vec::new();
    for w in lambda {
        if !lattice::in_p_multiple(w, p)? {
            kept.push(w.clone());
        }
    }
    let filtered = WeightSet::new(lambda.spec(), kept)?;
    if !lattice::spans(&filtered)? {
        return Err(Error::Internal("filtered set no longer generates".into()));
    }
    Ok(filtered)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    pub image: Weight,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    /// Sizes of `Σ^-1(s) ∩ Λ` for each `s ∈ Σ(Λ) \ pX_(n/p)`, in order of `s`.
    pub fibers: Vec<FiberCount>,
    pub min_count: Option<usize>,
    pub argmin: Option<Weight>,
    /// Fibers with fewer than `p^2` elements.
    pub violations: Vec<FiberCount>,
    /// Whether `Λ` is invariant under every small-block rotation.
    pub rotation_invariant: bool,
    pub note: String,
}

/// Fiber sizes of `Σ` restricted to `Λ` over the images outside `pX`.
///
/// For degrees that are not powers of `p` the rotation subgroup used is the
/// one generated by every small-block `p`-cycle.
pub fn fiber_check(lambda: &WeightSet, p: u64) -> Result<FiberReport> {
    let spec = lambda.spec();
    let rotations = permgroup::small_block_rotations(spec.n(), p)?;
    let rotation_invariant = rotations
        .iter()
        .all(|g| lambda.iter().all(|w| permgroup::act(g, w).is_ok_and(|x| lambda.contains(&x))));

    let mut counts: BTreeMap<Weight, usize> = BTreeMap::new();
    for w in lambda {
        let s = sigma_map(w, p)?;
        if !lattice::in_p_multiple(&s, p)? {
            *counts.entry(s).or_default() += 1;
        }
    }
    let fibers: Vec<FiberCount> =
        counts.into_iter().map(|(image, count)| FiberCount { image, count }).collect();
    let best = fibers.iter().min_by_key(|f| f.count);
    let threshold = (p * p) as usize;
    let violations = fibers.iter().filter(|f| f.count < threshold).cloned().collect();
    let note = if fibers.is_empty() {
        "no fibers tested: the image lies in pX".to_string()
    } else if arith::log_exact(spec.n() as u64, p).is_some() {
        "rotations of all small blocks".to_string()
    } else {
        "rotations of all small blocks inside each block (degree is not a power of p)".to_string()
    };
    Ok(FiberReport {
        min_count: best.map(|f| f.count),
        argmin: best.map(|f| f.image.clone()),
        fibers,
        violations,
        rotation_invariant,
        note,
    })
}

/// Where `(n, p, q)` sits relative to the hypotheses of the lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Inside,
    /// The bound for `q = p` carries over because generating mod `q`
    /// implies generating mod `p`.
    InsideViaReduction,
    #[serde(rename = "outside proven range")]
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BoundKind {
    /// `n = p^r`, `r >= 1`: at least `p^(2r-1)` elements.
    PrimePowerDegree { r: u32 },
    /// `p^e` the largest power of `p` dividing `n`: at least `p^e (n - p^e)`.
    GeneralDegree { e: u32 },
}

/// The lower bound applicable to `(n, p, q)`, if any, and the hypothesis label.
pub fn applicable_bound(n: u64, p: u64, q: u64) -> Result<(Option<(BoundKind, u64)>, Hypothesis)> {
    let e_q = check_modulus(p, q)?;
    if n < 1 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    match arith::log_exact(n, p) {
        Some(r) if r >= 1 => {
            if p == 2 && e_q < 2 {
                Ok((None, Hypothesis::Outside))
            } else {
                let bound = arith::pow(p, 2 * r - 1);
                Ok((Some((BoundKind::PrimePowerDegree { r }, bound)), Hypothesis::Inside))
            }
        }
        _ => {
            let e = arith::valuation(n, p);
            let pe = arith::pow(p, e);
            let hyp = if q == p { Hypothesis::Inside } else { Hypothesis::InsideViaReduction };
            Ok((Some((BoundKind::GeneralDegree { e }, pe * (n - pe))), hyp))
        }
    }
}

fn check_modulus(p: u64, q: u64) -> Result<u32> {
    arith::ensure_prime(p)?;
    match arith::prime_power(q) {
        Some((prime, e)) if prime == p => Ok(e),
        _ => Err(Error::PrimeMismatch { p, modulus: q }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    pub max_elements: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, max_elements: MAX_SEARCH_ELEMENTS }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub n: u64,
    pub p: u64,
    pub q: u64,
    pub minimum: usize,
    pub witness: WeightSet,
    pub nodes_explored: u64,
    pub orbit_count: usize,
    pub elapsed_micros: u64,
    pub hypothesis: Hypothesis,
}

/// One orbit of `P_n` on `X_n`, indexed into the enumeration of `X_n`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: u32,
    pub elements: Vec<u32>,
    /// Basis of the span of the orbit's image in `X_n / pX_n`.
    pub span: Vec<Vec<u64>>,
}

/// `X_n` mod `q` enumerated by `(a_1, ..., a_(n-1))` read as base-`q` digits,
/// `a_1` most significant, so index order is lexicographic order.
#[derive(Debug, Clone)]
pub struct TorsionLattice {
    pub spec: LatticeSpec,
    pub p: u64,
    pub size: usize,
}

impl TorsionLattice {
    pub fn new(n: usize, p: u64, q: u64, max_elements: u128) -> Result<Self> {
        check_modulus(p, q)?;
        let spec = LatticeSpec::zero_sum(n, q)?;
        let size = spec.cardinality().unwrap_or(u128::MAX);
        if size > max_elements {
            return Err(Error::Infeasible { size, limit: max_elements });
        }
        Ok(TorsionLattice { spec, p, size: size as usize })
    }

    pub fn decode(&self, mut index: u32) -> Vec<i64> {
        let n = self.spec.n();
        let q = self.spec.modulus() as i64;
        let mut entries = vec![0i64; n];
        for k in (0..n - 1).rev() {
            entries[k] = index as i64 % q;
            index /= q as u32;
        }
        let sum: i64 = entries.iter().sum();
        entries[n - 1] = (-sum).rem_euclid(q);
        entries
    }

    pub fn encode(&self, entries: &[i64]) -> u32 {
        let q = self.spec.modulus() as u32;
        entries[..entries.len() - 1].iter().fold(0u32, |acc, &x| acc * q + x as u32)
    }

    pub fn weight(&self, index: u32) -> Weight {
        Weight::new(self.decode(index), self.spec).expect("decoded entries lie in X_n")
    }

    fn act(&self, g: &Perm, entries: &[i64], out: &mut [i64]) {
        for (i, &x) in entries.iter().enumerate() {
            out[g.apply(i)] = x;
        }
    }

    /// Orbits under the group, in order of their least element.
    pub fn orbits(&self, group: &PermGroupSpec) -> Vec<Orbit> {
        let n = self.spec.n();
        let p = self.p;
        let mut owner = vec![false; self.size];
        let mut out = Vec::new();
        let mut image = vec![0i64; n];
        for start in 0..self.size as u32 {
            if owner[start as usize] {
                continue;
            }
            owner[start as usize] = true;
            let mut elements = vec![start];
            let mut cursor = 0;
            while cursor < elements.len() {
                let entries = self.decode(elements[cursor]);
                cursor += 1;
                for g in &group.generators {
                    self.act(g, &entries, &mut image);
                    let idx = self.encode(&image);
                    if !owner[idx as usize] {
                        owner[idx as usize] = true;
                        elements.push(idx);
                    }
                }
            }
            let mut echelon = ModPEchelon::new(p, n - 1);
            for &idx in &elements {
                let coords = prefix_coordinates_mod_p(&self.decode(idx), p);
                echelon.insert(&coords);
                if echelon.is_full() {
                    break;
                }
            }
            elements.sort_unstable();
            out.push(Orbit { representative: start, elements, span: echelon.basis().to_vec() });
        }
        out
    }
}

fn prefix_coordinates_mod_p(entries: &[i64], p: u64) -> Vec<u64> {
    let mut acc = 0i64;
    entries[..entries.len() - 1]
        .iter()
        .map(|&x| {
            acc += x;
            acc.rem_euclid(p as i64) as u64
        })
        .collect()
}

struct Search<'a> {
    orbits: &'a [Orbit],
    dim: usize,
    // suffix[k]: span of orbits k.. ; suffix_max_rank[k]: largest single-orbit rank among k..
    suffix: Vec<ModPEchelon>,
    suffix_max_rank: Vec<usize>,
    budget: u64,
    nodes: u64,
    best_cost: usize,
    best: Option<Vec<usize>>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, start: usize, cost: usize, basis: &ModPEchelon) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        if basis.is_full() {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = Some(self.chosen.clone());
            }
            return Ok(());
        }
        let deficit = self.dim - basis.rank();
        for k in start..self.orbits.len() {
            let size = self.orbits[k].elements.len();
            let per_orbit = self.suffix_max_rank[k].min(deficit).max(1);
            let needed = deficit.div_ceil(per_orbit);
            // orbits are sorted by size, so both terms only grow with k
            let lower = cost + deficit.max(size * needed);
            if lower >= self.best_cost {
                break;
            }
            let mut reach = basis.clone();
            for v in self.suffix[k].basis() {
                reach.insert(v);
            }
            if !reach.is_full() {
                break;
            }
            let mut next = basis.clone();
            let mut grew = false;
            for v in &self.orbits[k].span {
                grew |= next.insert(v);
            }
            if !grew {
                continue;
            }
            self.chosen.push(k);
            self.run(k + 1, cost + size, &next)?;
            self.chosen.pop();
        }
        Ok(())
    }
}

/// Exact minimum size of a `P_n`-invariant generating subset of `X_n` mod `q`.
pub fn min_invariant_generating_size(n: usize, p: u64, q: u64) -> Result<SearchResult> {
    min_invariant_generating_size_with(n, p, q, &SearchOptions::default())
}

pub fn min_invariant_generating_size_with(
    n: usize,
    p: u64,
    q: u64,
    options: &SearchOptions,
) -> Result<SearchResult> {
    let started = Instant::now();
    let (_, hypothesis) = applicable_bound(n as u64, p, q)?;
    let lattice = TorsionLattice::new(n, p, q, options.max_elements)?;
    let group = sylow_subgroup(n, p)?;
    let all_orbits = lattice.orbits(&group);
    let orbit_count = all_orbits.len();

    // Orbits inside pX_n add nothing modulo p and are never part of a minimum.
    let mut orbits: Vec<Orbit> = all_orbits.into_iter().filter(|o| !o.span.is_empty()).collect();
    orbits.sort_by_key(|o| (o.elements.len(), o.representative));

    let dim = n - 1;
    let mut suffix = vec![ModPEchelon::new(p, dim); orbits.len() + 1];
    let mut suffix_max_rank = vec![0; orbits.len() + 1];
    for k in (0..orbits.len()).rev() {
        let mut e = suffix[k + 1].clone();
        for v in &orbits[k].span {
            e.insert(v);
        }
        suffix[k] = e;
        suffix_max_rank[k] = suffix_max_rank[k + 1].max(orbits[k].span.len());
    }

    let mut search = Search {
        orbits: &orbits,
        dim,
        suffix,
        suffix_max_rank,
        budget: options.budget,
        nodes: 0,
        best_cost: usize::MAX,
        best: None,
        chosen: Vec::new(),
    };
    search.run(0, 0, &ModPEchelon::new(p, dim))?;

    let chosen = search
        .best
        .ok_or_else(|| Error::Internal("X_n has no invariant generating set".into()))?;
    let weights = chosen
        .iter()
        .flat_map(|&k| orbits[k].elements.iter().map(|&idx| lattice.weight(idx)))
        .collect::<Vec<_>>();
    let witness = WeightSet::new(lattice.spec, weights)?;
    if !lattice::spans(&witness)? || !group.fixes_lambda(&witness)? {
        return Err(Error::Internal("search witness failed certification".into()));
    }
    Ok(SearchResult {
        n: n as u64,
        p,
        q,
        minimum: witness.len(),
        witness,
        nodes_explored: search.nodes,
        orbit_count,
        elapsed_micros: started.elapsed().as_micros() as u64,
        hypothesis,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub p: u64,
    pub q: u64,
    pub bound: Option<u64>,
    pub bound_kind: Option<BoundKind>,
    pub hypothesis: Hypothesis,
    pub minimum: usize,
    pub tight: bool,
    /// `minimum >= bound` (vacuously true without a bound).
    pub holds: bool,
    pub witness: WeightSet,
    pub nodes_explored: u64,
    pub orbit_count: usize,
}

/// Runs the exact search and compares it with the applicable lower bound.
pub fn verify_lower_bound(n: usize, p: u64, q: u64, options: &SearchOptions) -> Result<BoundReport> {
    let (bound, hypothesis) = applicable_bound(n as u64, p, q)?;
    let result = min_invariant_generating_size_with(n, p, q, options)?;
    let minimum = result.minimum;
    let value = bound.map(|(_, b)| b);
    Ok(BoundReport {
        n: n as u64,
        p,
        q,
        bound: value,
        bound_kind: bound.map(|(k, _)| k),
        hypothesis,
        minimum,
        tight: value == Some(minimum as u64),
        holds: value.is_none_or(|b| minimum as u64 >= b),
        witness: result.witness,
        nodes_explored: result.nodes_explored,
        orbit_count: result.orbit_count,
    })
}

/// Default modulus for the prime-power-degree bound: `q = p` for odd `p`, `q = 4` for `p = 2`.
pub fn default_modulus(p: u64) -> u64 {
    if p == 2 {
        4
    } else {
        p
    }
}

/// Distinct `Σ` images of the group orbit through `w`; used to compare orbit structure.
pub fn sigma_orbit_images(group: &PermGroupSpec, w: &Weight, p: u64) -> Result<HashSet<Weight>> {
    permgroup::orbit(group, w)?.iter().map(|x| sigma_map(x, p)).collect()
}
