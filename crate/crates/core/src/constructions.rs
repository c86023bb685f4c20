//! Witness weight sets and representation plans realizing the upper bounds:
//! one constructor per divisibility case of `n` by `p`, the dual basis of an
//! elementary abelian group, and explicit relation-module witnesses.

use std::fmt;

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::lattice::{self, standard_weight, LatticeSpec, Weight, WeightSet};
use crate::permgroup::{self, sylow_subgroup, BlockStructure, Digit, PermGroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    /// `p` does not divide `n`.
    A,
    /// `n = p`.
    B,
    /// `n = p^r`, `r >= 2`.
    C,
    /// `p | n`, `n` not a power of `p`.
    D,
    /// Dual-basis plan for `(Z/p)^m ⋊ S_m`.
    Sym,
}

impl CaseTag {
    pub fn detect(n: u64, p: u64) -> CaseTag {
        if !n.is_multiple_of(p) {
            CaseTag::A
        } else if n == p {
            CaseTag::B
        } else if arith::log_exact(n, p).is_some() {
            CaseTag::C
        } else {
            CaseTag::D
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::A => "a",
            CaseTag::B => "b",
            CaseTag::C => "c",
            CaseTag::D => "d",
            CaseTag::Sym => "sym",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(CaseTag::A),
            "b" => Ok(CaseTag::B),
            "c" => Ok(CaseTag::C),
            "d" => Ok(CaseTag::D),
            "sym" => Ok(CaseTag::Sym),
            other => Err(Error::Precondition(format!("unknown case {other:?}"))),
        }
    }
}

/// A summand on which only the finite quotient acts, carried by dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtraSummand {
    pub dimension: u64,
    pub description: String,
}

/// Weights of the monomial part `V_Lambda` plus the extra summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepPlan {
    pub case: CaseTag,
    pub n: usize,
    pub p: u64,
    pub weights: WeightSet,
    pub extra: Vec<ExtraSummand>,
    pub total_dimension: u64,
}

impl RepPlan {
    pub fn new(
        case: CaseTag,
        n: usize,
        p: u64,
        weights: WeightSet,
        extra: Vec<ExtraSummand>,
    ) -> Self {
        let total_dimension = weights.len() as u64 + extra.iter().map(|e| e.dimension).sum::<u64>();
        RepPlan { case, n, p, weights, extra, total_dimension }
    }

    /// `total_dimension - (n - 1)`: the dimension of the plan minus that of the torus.
    pub fn excess_dimension(&self) -> i64 {
        self.total_dimension as i64 - (self.n as i64 - 1)
    }
}

fn integer_lattice(n: usize) -> Result<LatticeSpec> {
    LatticeSpec::zero_sum(n, 0)
}

/// `{a[1,i] : i = 2..n}` together with a faithful summand of dimension `[n/p]`.
///
/// Position 1 is a fixed point of the Sylow subgroup whenever `p` does not
/// divide `n`, so the set is invariant.
pub fn lambda_a(n: usize, p: u64) -> Result<RepPlan> {
    arith::ensure_prime(p)?;
    if n < 1 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if (n as u64).is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} divides {n}")));
    }
    let spec = integer_lattice(n)?;
    let weights = (2..=n).map(|i| standard_weight(1, i, spec)).collect::<Result<Vec<_>>>()?;
    let m = n as u64 / p;
    let extra = vec![ExtraSummand {
        dimension: m,
        description: format!("W: dual-basis representation of (Z/{p})^{m} x| S_{m}"),
    }];
    Ok(RepPlan::new(CaseTag::A, n, p, WeightSet::new(spec, weights)?, extra))
}

/// The `m` unit vectors of `(Z/p)^m`: characters dual to the standard generators.
pub fn dual_basis_weights(m: usize, p: u64) -> Result<WeightSet> {
    arith::ensure_prime(p)?;
    let spec = LatticeSpec::full(m, p)?;
    let weights = (0..m)
        .map(|i| {
            let mut e = vec![0; m];
            e[i] = 1;
            Weight::new(e, spec)
        })
        .collect::<Result<Vec<_>>>()?;
    WeightSet::new(spec, weights)
}

/// The `m`-dimensional plan for `(Z/p)^m ⋊ S_m` built on [`dual_basis_weights`].
pub fn dual_basis_plan(m: usize, p: u64) -> Result<RepPlan> {
    Ok(RepPlan::new(CaseTag::Sym, m, p, dual_basis_weights(m, p)?, Vec::new()))
}

/// The cyclic orbit `{a[1,2], ..., a[p-1,p], a[p,1]}` plus a faithful character.
pub fn lambda_b(p: u64) -> Result<RepPlan> {
    arith::ensure_prime(p)?;
    let n = p as usize;
    let spec = integer_lattice(n)?;
    let weights = (1..=n)
        .map(|i| standard_weight(i, i % n + 1, spec))
        .collect::<Result<Vec<_>>>()?;
    let extra = vec![ExtraSummand {
        dimension: 1,
        description: format!("L: faithful character of Z/{p}"),
    }];
    Ok(RepPlan::new(CaseTag::B, n, p, WeightSet::new(spec, weights)?, extra))
}

/// Orbit of `a[1, p^(r-1)+1]` under `P_{p^r}`: all `a[α,β]` with `β` in the
/// big block following that of `α`.
pub fn lambda_c(p: u64, r: u32) -> Result<RepPlan> {
    arith::ensure_prime(p)?;
    if r < 2 {
        return Err(Error::Precondition(format!("case c needs r >= 2, got {r}")));
    }
    let n = p
        .checked_pow(r)
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::Precondition("p^r too large".into()))?;
    let group = sylow_subgroup(n, p)?;
    let spec = integer_lattice(n)?;
    let seed = standard_weight(1, n / p as usize + 1, spec)?;
    let weights = permgroup::orbit(&group, &seed)?;
    Ok(RepPlan::new(CaseTag::C, n, p, weights, Vec::new()))
}

/// Union of the orbits of `a[1, j+1]`, `j+1` the first position of each block
/// after the first: all `a[α,β]` with `α` in the first block, `β` outside it.
pub fn lambda_d(n: usize, p: u64) -> Result<RepPlan> {
    arith::ensure_prime(p)?;
    if n < 1 || !(n as u64).is_multiple_of(p) || arith::log_exact(n as u64, p).is_some() {
        return Err(Error::Precondition(format!(
            "case d needs {p} | n and n not a power of {p}, got n = {n}"
        )));
    }
    let group = sylow_subgroup(n, p)?;
    let structure = group.structure.as_ref().expect("sylow subgroup carries its layout");
    let spec = integer_lattice(n)?;
    let seeds = structure.blocks[1..]
        .iter()
        .map(|b| standard_weight(1, b.start + 1, spec))
        .collect::<Result<Vec<_>>>()?;
    let weights = permgroup::closure(&group, &seeds)?;
    Ok(RepPlan::new(CaseTag::D, n, p, weights, Vec::new()))
}

/// The witness plan for the case of `(n, p)`.
pub fn plan_for(n: usize, p: u64) -> Result<RepPlan> {
    match CaseTag::detect(n as u64, p) {
        CaseTag::A => lambda_a(n, p),
        CaseTag::B => lambda_b(p),
        CaseTag::C => lambda_c(p, arith::log_exact(n as u64, p).expect("p-power")),
        _ => lambda_d(n, p),
    }
}

/// Base-`p` digits `(n_i, e_i)` of `n`, exponent 0 included when present.
pub fn p_adic_expansion(n: u64, p: u64) -> Result<Vec<Digit>> {
    arith::ensure_prime(p)?;
    if n < 1 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    Ok(permgroup::p_adic_digits(n, p))
}

/// An element of `Z[Lambda]` given by its coordinates in the canonical order of `Lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelWitness {
    pub case: CaseTag,
    pub n: usize,
    pub p: u64,
    pub lambda: WeightSet,
    pub coefficients: Vec<i64>,
}

impl KernelWitness {
    /// Nonzero terms as `(coefficient, weight)`.
    pub fn terms(&self) -> Vec<(i64, &Weight)> {
        self.coefficients
            .iter()
            .zip(self.lambda.iter())
            .filter(|(c, _)| **c != 0)
            .map(|(&c, w)| (c, w))
            .collect()
    }

    pub fn in_kernel(&self) -> Result<bool> {
        lattice::in_kernel(&self.lambda, &self.coefficients)
    }

    /// Coordinates of `g` applied to this vector.
    pub fn moved_by(&self, g: &permgroup::Perm) -> Result<Vec<i64>> {
        let induced = permgroup::induced_permutation(g, &self.lambda)?;
        let mut out = vec![0; self.coefficients.len()];
        for (k, &c) in self.coefficients.iter().enumerate() {
            out[induced[k]] = c;
        }
        Ok(out)
    }
}

impl fmt::Display for KernelWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, w)) in self.terms().into_iter().enumerate() {
            match (k, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c.unsigned_abs() != 1 {
                write!(f, "{}", c.unsigned_abs())?;
            }
            write!(f, "e_{w}")?;
        }
        Ok(())
    }
}

/// The explicit relation vector moved by the center in cases c and d.
///
/// Case c: `e_{a[1,m+1]} + e_{a[m+1,2m+1]} + ... + e_{a[(p-1)m+1,1]}` with `m = p^(r-1)`.
/// Case d: `e_{a[1,s+1]} - e_{a[1,s+2]} + e_{a[2,s+2]} - e_{a[2,s+1]}` with `s` the
/// size of the first block.
pub fn kernel_witness(case: CaseTag, n: usize, p: u64) -> Result<KernelWitness> {
    arith::ensure_prime(p)?;
    if n < 1 || CaseTag::detect(n as u64, p) != case {
        return Err(Error::Precondition(format!("(n = {n}, p = {p}) is not in case {case}")));
    }
    let (plan, terms): (RepPlan, Vec<(i64, usize, usize)>) = match case {
        CaseTag::C => {
            let r = arith::log_exact(n as u64, p).expect("p-power");
            let m = n / p as usize;
            let terms = (0..p as usize).map(|i| (1, i * m + 1, ((i + 1) * m) % n + 1)).collect();
            (lambda_c(p, r)?, terms)
        }
        CaseTag::D => {
            let s = BlockStructure::new(n, p)?.blocks[0].size;
            let terms = vec![(1, 1, s + 1), (-1, 1, s + 2), (1, 2, s + 2), (-1, 2, s + 1)];
            (lambda_d(n, p)?, terms)
        }
        other => {
            return Err(Error::Precondition(format!("no kernel witness for case {other}")));
        }
    };
    let spec = plan.weights.spec();
    let mut coefficients = vec![0; plan.weights.len()];
    for (c, i, j) in terms {
        let w = standard_weight(i, j, spec)?;
        let k = plan
            .weights
            .index_of(&w)
            .ok_or_else(|| Error::Internal(format!("{w} missing from the witness set")))?;
        coefficients[k] += c;
    }
    Ok(KernelWitness { case, n, p, lambda: plan.weights, coefficients })
}

/// Sylow subgroup matching a plan's degree and prime.
pub fn group_for(plan: &RepPlan) -> Result<PermGroupSpec> {
    match plan.case {
        CaseTag::Sym => Ok(PermGroupSpec::symmetric(plan.n)),
        _ => sylow_subgroup(plan.n, plan.p),
    }
}
