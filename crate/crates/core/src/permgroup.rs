//! Sylow `p`-subgroups of `S_n` as products of iterated wreath products,
//! their action on weights, orbits, and the order-`p` part of the center.
//!
//! Layout: positions `1..=n_0` (the units digit of `n` in base `p`) are fixed
//! points; after them come the blocks of size `p^e` for each base-`p` digit,
//! in increasing size. Inside a block of size `p^e` the `p` sub-blocks of size
//! `p^(e-1)` are consecutive, so the small `p`-runs are consecutive too.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::lattice::{Weight, WeightSet};

/// A permutation of `{1..n}`, stored 0-based: `images[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    /// From 1-based images: `images[k]` is the image of `k + 1`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPerm(format!("{images:?} is not a bijection of 1..={n}")));
            }
            seen[x - 1] = true;
            zero_based.push(x - 1);
        }
        Ok(Perm { images: zero_based })
    }

    fn from_zero_based(images: Vec<usize>) -> Self {
        Perm { images }
    }

    /// A single cycle on 1-based `points`.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        Self::from_cycles(n, &[points.to_vec()])
    }

    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPerm(format!("point {x} outside 1..={n}")));
                }
                if touched[x - 1] {
                    return Err(Error::InvalidPerm(format!("point {x} repeated")));
                }
                touched[x - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[x - 1] = next - 1;
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation such as `"(1 2)(3 4)"`; `"()"` or `""` is the identity.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::InvalidPerm(format!("expected '(' in {text:?}")));
            };
            let Some(close) = body.find(')') else {
                return Err(Error::InvalidPerm(format!("unbalanced parentheses in {text:?}")));
            };
            let points = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::InvalidPerm(format!("bad point {s:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc);
            k += 1;
        }
        k
    }

    /// Disjoint cycles of length >= 2, 1-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Lets each point act on a run of `width` consecutive positions,
    /// preserving the order inside the run.
    pub fn inflate(&self, width: usize) -> Perm {
        let mut images = Vec::with_capacity(self.degree() * width);
        for &x in &self.images {
            images.extend((0..width).map(|k| x * width + k));
        }
        Perm { images }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(serializer)
    }
}

/// A base-`p` digit of `n`: `multiplicity` blocks of size `p^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Digit {
    pub multiplicity: u64,
    pub exponent: u32,
}

/// A block of consecutive positions `start+1 ..= start+size` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub start: usize,
    pub size: usize,
    pub exponent: u32,
}

impl Block {
    /// 1-based positions of this block.
    pub fn positions(&self) -> std::ops::RangeInclusive<usize> {
        self.start + 1..=self.start + self.size
    }

    pub fn contains(&self, position: usize) -> bool {
        self.positions().contains(&position)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockStructure {
    pub p: u64,
    pub n: usize,
    /// Nonzero base-`p` digits in increasing exponent, including exponent 0.
    pub digits: Vec<Digit>,
    /// Number of fixed points, occupying positions `1..=fixed_points`.
    pub fixed_points: usize,
    /// Blocks of size `p^e`, `e >= 1`, in increasing size.
    pub blocks: Vec<Block>,
}

impl BlockStructure {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        arith::ensure_prime(p)?;
        let digits = p_adic_digits(n as u64, p);
        let fixed_points = digits
            .iter()
            .find(|d| d.exponent == 0)
            .map_or(0, |d| d.multiplicity as usize);
        let mut blocks = Vec::new();
        let mut start = fixed_points;
        for d in digits.iter().filter(|d| d.exponent > 0) {
            let size = arith::pow(p, d.exponent) as usize;
            for _ in 0..d.multiplicity {
                blocks.push(Block { start, size, exponent: d.exponent });
                start += size;
            }
        }
        debug_assert_eq!(start, n);
        Ok(BlockStructure { p, n, digits, fixed_points, blocks })
    }

    /// Exponent of `p` in the group order (Legendre's count for `n!`).
    pub fn order_exponent(&self) -> u64 {
        self.digits
            .iter()
            .map(|d| d.multiplicity * (0..d.exponent).map(|k| arith::pow(self.p, k)).sum::<u64>())
            .sum()
    }

    /// Block containing the 1-based `position`, if it is not a fixed point.
    pub fn block_of(&self, position: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.contains(position))
    }
}

/// Base-`p` digits of `n` with `1 <= n_i < p`, exponents strictly increasing.
pub fn p_adic_digits(mut n: u64, p: u64) -> Vec<Digit> {
    let mut digits = Vec::new();
    let mut exponent = 0;
    while n > 0 {
        let d = n % p;
        if d > 0 {
            digits.push(Digit { multiplicity: d, exponent });
        }
        n /= p;
        exponent += 1;
    }
    digits
}

/// A permutation group given by generators, optionally tagged as the
/// Sylow `p`-subgroup with its block layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermGroupSpec {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub structure: Option<BlockStructure>,
    /// Exponent of `p` in the order when the group is a `p`-group.
    pub order_exponent: Option<u64>,
}

impl PermGroupSpec {
    /// A group with no known structure (never treated as a `p`-group).
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::LengthMismatch { expected: degree, actual: g.degree() });
        }
        Ok(PermGroupSpec { degree, generators, structure: None, order_exponent: None })
    }

    /// `S_m` generated by a transposition and an `m`-cycle.
    pub fn symmetric(m: usize) -> Self {
        let mut generators = Vec::new();
        if m >= 2 {
            generators.push(Perm::cycle(m, &[1, 2]).expect("valid transposition"));
        }
        if m >= 3 {
            let all: Vec<usize> = (1..=m).collect();
            generators.push(Perm::cycle(m, &all).expect("valid cycle"));
        }
        PermGroupSpec { degree: m, generators, structure: None, order_exponent: None }
    }

    pub fn prime(&self) -> Option<u64> {
        self.structure.as_ref().map(|s| s.p)
    }

    pub fn is_p_group(&self) -> bool {
        self.structure.is_some()
    }

    pub fn fixes_lambda(&self, lambda: &WeightSet) -> Result<bool> {
        for g in &self.generators {
            for w in lambda {
                if !lambda.contains(&act(g, w)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The Sylow `p`-subgroup `P_n` of `S_n` in the block layout described above.
pub fn sylow_subgroup(n: usize, p: u64) -> Result<PermGroupSpec> {
    let structure = BlockStructure::new(n, p)?;
    let mut generators = Vec::new();
    for block in &structure.blocks {
        wreath_generators(n, p as usize, block.start, block.exponent, &mut generators);
    }
    let order_exponent = Some(structure.order_exponent());
    Ok(PermGroupSpec { degree: n, generators, structure: Some(structure), order_exponent })
}

// Generators of P_{p^e} on positions offset+1 ..= offset+p^e: those of
// P_{p^(e-1)} on the first sub-block plus the shift of sub-block t to t+1.
fn wreath_generators(n: usize, p: usize, offset: usize, exponent: u32, out: &mut Vec<Perm>) {
    if exponent == 0 {
        return;
    }
    let sub = p.pow(exponent - 1);
    wreath_generators(n, p, offset, exponent - 1, out);
    let mut images: Vec<usize> = (0..n).collect();
    for t in 0..p {
        for x in 0..sub {
            images[offset + t * sub + x] = offset + ((t + 1) % p) * sub + x;
        }
    }
    out.push(Perm::from_zero_based(images));
}

/// `g · w`: the entry at position `i` moves to position `g(i)`.
pub fn act(g: &Perm, w: &Weight) -> Result<Weight> {
    let n = w.entries().len();
    if g.degree() != n {
        return Err(Error::LengthMismatch { expected: n, actual: g.degree() });
    }
    let mut out = vec![0; n];
    for (i, &x) in w.entries().iter().enumerate() {
        out[g.apply(i)] = x;
    }
    Weight::new(out, w.spec())
}

/// Orbit of `w` under the group, by breadth-first closure over the generators.
pub fn orbit(group: &PermGroupSpec, w: &Weight) -> Result<WeightSet> {
    closure(group, std::slice::from_ref(w))
}

/// Smallest invariant set containing `seeds`.
pub fn closure(group: &PermGroupSpec, seeds: &[Weight]) -> Result<WeightSet> {
    let spec = match seeds.first() {
        Some(w) => w.spec(),
        None => return Err(Error::Precondition("closure of an empty seed list".into())),
    };
    let mut seen: HashSet<Weight> = seeds.iter().cloned().collect();
    let mut frontier: Vec<Weight> = seen.iter().cloned().collect();
    frontier.sort();
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for w in &frontier {
            for g in &group.generators {
                let image = act(g, w)?;
                if !seen.contains(&image) {
                    seen.insert(image.clone());
                    next.insert(image);
                }
            }
        }
        frontier = next.into_iter().collect();
    }
    WeightSet::new(spec, seen)
}

/// All elements of the group, sorted; fails once more than `cap` are found.
pub fn enumerate_elements(group: &PermGroupSpec, cap: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(group.degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    if cap < 1 {
        return Err(Error::CapExceeded { cap });
    }
    while let Some(h) = frontier.pop() {
        for g in &group.generators {
            let gh = g.compose(&h);
            if seen.insert(gh.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                frontier.push(gh);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// For each block, the product of the disjoint `p`-cycles rotating its
/// consecutive `p`-runs. These generate the center of the Sylow subgroup.
pub fn center_generators(group: &PermGroupSpec) -> Result<Vec<Perm>> {
    let structure = group.structure.as_ref().ok_or(Error::NotPGroup)?;
    let p = structure.p as usize;
    let n = group.degree;
    Ok(structure
        .blocks
        .iter()
        .map(|block| {
            let mut images: Vec<usize> = (0..n).collect();
            for run in 0..block.size / p {
                let base = block.start + run * p;
                for k in 0..p {
                    images[base + k] = base + (k + 1) % p;
                }
            }
            Perm::from_zero_based(images)
        })
        .collect())
}

/// Every non-identity element of the center; each has order `p`.
///
/// Element `k` (1-based) is `prod_b z_b^(c_b)` where `c` is the base-`p`
/// expansion of `k` with the first block least significant, so the first
/// element is the generator of the first block.
pub fn center_order_p_elements(group: &PermGroupSpec) -> Result<Vec<Perm>> {
    let gens = center_generators(group)?;
    let p = group.prime().ok_or(Error::NotPGroup)?;
    let count = p
        .checked_pow(gens.len() as u32)
        .ok_or_else(|| Error::Precondition("center too large to list".into()))?;
    let mut out = Vec::with_capacity(count as usize - 1);
    for k in 1..count {
        let mut element = Perm::identity(group.degree);
        let mut rest = k;
        for z in &gens {
            element = z.pow(rest % p).compose(&element);
            rest /= p;
        }
        out.push(element);
    }
    Ok(out)
}

/// Index permutation induced by `g` on the elements of an invariant `lambda`:
/// `lambda[k]` is sent to `lambda[result[k]]`.
pub fn induced_permutation(g: &Perm, lambda: &WeightSet) -> Result<Vec<usize>> {
    lambda
        .iter()
        .map(|w| lambda.index_of(&act(g, w)?).ok_or(Error::NotInvariant))
        .collect()
}

/// The `p`-cycles rotating each small block `(i-1)p+1 ..= ip`.
pub fn small_block_rotations(n: usize, p: u64) -> Result<Vec<Perm>> {
    let p = p as usize;
    if p == 0 || !n.is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} does not divide {n}")));
    }
    (0..n / p)
        .map(|i| {
            let points: Vec<usize> = (i * p + 1..=(i + 1) * p).collect();
            Perm::cycle(n, &points)
        })
        .collect()
}
