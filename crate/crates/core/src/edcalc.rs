//! Closed-form essential dimension at `p` of the normalizer of a maximal torus
//! in `PGL_n`, with the witness construction's dimension as a cross-check.

use serde::Serialize;

use crate::arith;
use crate::constructions::{self, CaseTag};
use crate::error::{Error, Result};

/// Largest `n` for which the witness weight set is materialized.
pub const WITNESS_LIMIT: u64 = 128;

pub const FIELD_HYPOTHESIS: &str =
    "valid over fields of characteristic != p containing a primitive p-th root of unity";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdReport {
    pub n: u64,
    pub p: u64,
    pub case: CaseTag,
    pub value: u64,
    /// Highest power of `p` dividing `n`.
    pub p_power: u64,
    /// Dimension of the witness representation, when materialized.
    pub witness_total_dimension: Option<u64>,
    /// `witness_total_dimension - (n - 1) == value`.
    pub consistency: Option<bool>,
    pub field_hypothesis: &'static str,
}

/// The formula value for `(n, p)` without touching the constructions.
pub fn formula_value(n: u64, p: u64) -> Result<(CaseTag, u64)> {
    arith::ensure_prime(p)?;
    if n < 1 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let case = CaseTag::detect(n, p);
    let value = match case {
        CaseTag::A => n / p,
        CaseTag::B => 2,
        CaseTag::C => n * n / p - n + 1,
        _ => {
            let pe = arith::pow(p, arith::valuation(n, p));
            pe * (n - pe) - n + 1
        }
    };
    Ok((case, value))
}

pub fn ed_value(n: u64, p: u64) -> Result<EdReport> {
    let (case, value) = formula_value(n, p)?;
    let p_power = arith::pow(p, arith::valuation(n, p));
    let witness_total_dimension = if n <= WITNESS_LIMIT {
        Some(constructions::plan_for(n as usize, p)?.total_dimension)
    } else {
        None
    };
    let consistency = witness_total_dimension.map(|d| d + 1 == value + n);
    Ok(EdReport {
        n,
        p,
        case,
        value,
        p_power,
        witness_total_dimension,
        consistency,
        field_hypothesis: FIELD_HYPOTHESIS,
    })
}

/// `p^(2r-1) - p^r + 1`, the resulting bound for `PGL_{p^r}` at `p`; `r >= 2`.
pub fn pgl_upper_bound(p: u64, r: u32) -> Result<u64> {
    arith::ensure_prime(p)?;
    if r < 2 {
        return Err(Error::Precondition(
            "the bound fails for r = 1, where ed(PGL_p; p) >= 2".into(),
        ));
    }
    Ok(arith::pow(p, 2 * r - 1) - arith::pow(p, r) + 1)
}

/// Reports for `n = 1..=max_n`.
pub fn ed_table(max_n: u64, p: u64) -> Result<Vec<EdReport>> {
    (1..=max_n).map(|n| ed_value(n, p)).collect()
}

/// Markdown rendering of a table of reports.
pub fn markdown_table(rows: &[EdReport]) -> String {
    let mut out = String::from("| n | p | case | ed | p^e | witness dim | consistent |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for r in rows {
        let dim = r.witness_total_dimension.map_or("-".to_string(), |d| d.to_string());
        let ok = r.consistency.map_or("-".to_string(), |c| c.to_string());
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.n, r.p, r.case, r.value, r.p_power, dim, ok
        ));
    }
    out
}
