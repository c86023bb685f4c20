//! Generic-freeness criteria for `V_Lambda` and `V_Lambda x W`.
//!
//! `V_Lambda` is generically free for `D ⋊ F` iff `Lambda` spans the character
//! lattice and `F` acts faithfully on the relation module
//! `Ker(Z[Lambda] -> X(D))`. For a `p`-group `F` the kernel of that action is
//! normal, so it is trivial iff no order-`p` central element acts trivially.
//!
//! A product `V x W` with `W` a faithful representation of `F` is generically
//! free as soon as `V` restricted to `D` is, i.e. `Lambda` spans.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::constructions::{self, CaseTag, RepPlan};
use crate::error::{Error, Result};
use crate::lattice::{self, WeightSet};
use crate::permgroup::{self, Perm, PermGroupSpec};

/// Largest group enumerated by the full-enumeration fallback.
pub const FULL_ENUMERATION_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Test only the order-`p` central elements of a `p`-group.
    CenterReduction,
    /// Test every non-identity element.
    FullEnumeration,
    /// Spanning torus weights plus a faithful summand of the finite quotient.
    FaithfulSummand,
}

/// A kernel vector and its image under a group element that moves it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MovedVector {
    pub element: Perm,
    pub vector: Vec<i64>,
    pub image: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenFreeVerdict {
    pub spans_ok: bool,
    pub kernel_faithful: Option<bool>,
    pub summand_faithful: Option<bool>,
    pub method: Method,
    pub elements_tested: usize,
    pub kernel_rank: Option<usize>,
    /// One moved kernel vector per tested element that acts nontrivially.
    pub witnesses: Vec<MovedVector>,
    /// First tested element acting trivially on the kernel, if any.
    pub trivial_element: Option<Perm>,
    pub summand_verdict: Option<Box<GenFreeVerdict>>,
    pub overall: bool,
}

/// Applies the coordinate permutation `induced` to `v`.
fn permute_coordinates(v: &[i64], induced: &[usize]) -> Vec<i64> {
    let mut out = vec![0; v.len()];
    for (k, &c) in v.iter().enumerate() {
        out[induced[k]] = c;
    }
    out
}

/// The faithfulness test with the method picked from the group: center
/// reduction for `p`-groups, full enumeration otherwise.
pub fn check_faithful(lambda: &WeightSet, group: &PermGroupSpec) -> Result<GenFreeVerdict> {
    let method =
        if group.is_p_group() { Method::CenterReduction } else { Method::FullEnumeration };
    check_faithful_with(lambda, group, method)
}

pub fn check_faithful_with(
    lambda: &WeightSet,
    group: &PermGroupSpec,
    method: Method,
) -> Result<GenFreeVerdict> {
    if group.degree != lambda.spec().n() {
        return Err(Error::LengthMismatch { expected: lambda.spec().n(), actual: group.degree });
    }
    if !group.fixes_lambda(lambda)? {
        return Err(Error::NotInvariant);
    }
    let elements: Vec<Perm> = match method {
        Method::CenterReduction => permgroup::center_order_p_elements(group)?,
        Method::FullEnumeration => permgroup::enumerate_elements(group, FULL_ENUMERATION_CAP)?
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect(),
        Method::FaithfulSummand => {
            return Err(Error::Precondition("use check_with_summands for product plans".into()));
        }
    };
    let spans_ok = lattice::spans(lambda)?;
    let kernel = lattice::rational_kernel_basis(lambda)?;

    let outcomes = elements
        .par_iter()
        .map(|g| -> Result<Option<MovedVector>> {
            let induced = permgroup::induced_permutation(g, lambda)?;
            Ok(kernel.basis.iter().find_map(|v| {
                let image = permute_coordinates(v, &induced);
                (&image != v).then(|| MovedVector {
                    element: g.clone(),
                    vector: v.clone(),
                    image,
                })
            }))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut witnesses = Vec::new();
    let mut trivial_element = None;
    for (g, outcome) in elements.iter().zip(outcomes) {
        match outcome {
            Some(moved) => witnesses.push(moved),
            None if trivial_element.is_none() => trivial_element = Some(g.clone()),
            None => {}
        }
    }
    let kernel_faithful = trivial_element.is_none();
    Ok(GenFreeVerdict {
        spans_ok,
        kernel_faithful: Some(kernel_faithful),
        summand_faithful: None,
        method,
        elements_tested: elements.len(),
        kernel_rank: Some(kernel.len()),
        witnesses,
        trivial_element,
        summand_verdict: None,
        overall: spans_ok && kernel_faithful,
    })
}

fn factorial_at_most(m: usize, cap: usize) -> bool {
    let mut acc = 1usize;
    for k in 2..=m {
        acc = match acc.checked_mul(k) {
            Some(v) => v,
            None => return false,
        };
        if acc > cap {
            return false;
        }
    }
    true
}

/// Certifies that the dual-basis representation `W` of `(Z/p)^m ⋊ S_m` is
/// generically free, hence faithful. Uses `S_m` by full enumeration when it
/// is small enough, else its Sylow subgroup `(Z/p)^m ⋊ P_m`, which contains a
/// conjugate of every `p`-subgroup and so of `P_n`.
pub fn check_dual_basis(m: usize, p: u64) -> Result<GenFreeVerdict> {
    let lambda = constructions::dual_basis_weights(m, p)?;
    if factorial_at_most(m, FULL_ENUMERATION_CAP) {
        check_faithful_with(&lambda, &PermGroupSpec::symmetric(m), Method::FullEnumeration)
    } else {
        check_faithful_with(&lambda, &permgroup::sylow_subgroup(m, p)?, Method::CenterReduction)
    }
}

/// Generic freeness of `V_Lambda x W` for plans with extra summands.
pub fn check_with_summands(plan: &RepPlan, group: &PermGroupSpec) -> Result<GenFreeVerdict> {
    if plan.extra.is_empty() {
        return Err(Error::Precondition("plan has no extra summand".into()));
    }
    if group.degree != plan.n {
        return Err(Error::LengthMismatch { expected: plan.n, actual: group.degree });
    }
    if !group.fixes_lambda(&plan.weights)? {
        return Err(Error::NotInvariant);
    }
    let spans_ok = lattice::spans(&plan.weights)?;
    let (summand_faithful, summand_verdict) = match plan.case {
        CaseTag::A => {
            let verdict = check_dual_basis(plan.n / plan.p as usize, plan.p)?;
            (verdict.overall, Some(Box::new(verdict)))
        }
        CaseTag::B => {
            // A character of Z/p is injective iff its weight generates X(Z/p).
            arith::ensure_prime(plan.p)?;
            let character = constructions::dual_basis_weights(1, plan.p)?;
            (lattice::spans(&character)?, None)
        }
        other => {
            return Err(Error::Precondition(format!("no faithful summand known for case {other}")));
        }
    };
    Ok(GenFreeVerdict {
        spans_ok,
        kernel_faithful: None,
        summand_faithful: Some(summand_faithful),
        method: Method::FaithfulSummand,
        elements_tested: 0,
        kernel_rank: None,
        witnesses: Vec::new(),
        trivial_element: None,
        summand_verdict,
        overall: spans_ok && summand_faithful,
    })
}

/// Runs the criterion matching the plan's shape against its own group.
pub fn check_plan(plan: &RepPlan) -> Result<GenFreeVerdict> {
    let group = constructions::group_for(plan)?;
    if plan.extra.is_empty() {
        check_faithful(&plan.weights, &group)
    } else {
        check_with_summands(plan, &group)
    }
}
