//! Weight lattices: the zero-sum lattice of `Z^n`, its `q`-torsion analogue
//! in `(Z/q)^n`, and the full lattice `(Z/q)^m` used for elementary abelian
//! characters.
//!
//! Span and kernel questions are answered with an integer Smith normal form
//! computed in the coordinate chart given by the basis `a[1,2], a[2,3], ...,
//! a[n-1,n]` of the zero-sum lattice. Spans over `Z/q` are decided over `Z`
//! after appending `q` times the coordinate basis.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// Which sublattice of `(Z or Z/q)^n` a weight belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    /// Vectors whose entries sum to zero (the character lattice of the torus).
    ZeroSum,
    /// Every vector (characters of an elementary abelian group).
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeSpec {
    n: usize,
    modulus: u64,
    kind: LatticeKind,
}

impl LatticeSpec {
    /// Zero-sum vectors of length `n`; `modulus == 0` means integer entries.
    pub fn zero_sum(n: usize, modulus: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLattice("zero-sum lattice needs n >= 1".into()));
        }
        Self::checked(n, modulus, LatticeKind::ZeroSum)
    }

    /// All of `(Z/q)^n`, or `Z^n` when `modulus == 0`.
    pub fn full(n: usize, modulus: u64) -> Result<Self> {
        Self::checked(n, modulus, LatticeKind::Full)
    }

    fn checked(n: usize, modulus: u64, kind: LatticeKind) -> Result<Self> {
        if modulus != 0 && arith::prime_power(modulus).is_none() {
            return Err(Error::InvalidLattice(format!(
                "modulus {modulus} is neither 0 nor a prime power"
            )));
        }
        Ok(LatticeSpec { n, modulus, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// The prime `p` with `modulus = p^e`, if the modulus is nonzero.
    pub fn prime(&self) -> Option<u64> {
        arith::prime_power(self.modulus).map(|(p, _)| p)
    }

    /// Rank of the lattice as a free module: `n - 1` for zero-sum, `n` for full.
    pub fn rank(&self) -> usize {
        match self.kind {
            LatticeKind::ZeroSum => self.n - 1,
            LatticeKind::Full => self.n,
        }
    }

    /// Number of elements when the modulus is nonzero.
    pub fn cardinality(&self) -> Option<u128> {
        if self.modulus == 0 {
            return None;
        }
        (self.modulus as u128).checked_pow(self.rank() as u32)
    }

    /// Same shape with a different modulus.
    pub fn with_modulus(&self, modulus: u64) -> Result<Self> {
        Self::checked(self.n, modulus, self.kind)
    }

    fn reduce(&self, x: i64) -> i64 {
        if self.modulus == 0 {
            x
        } else {
            x.rem_euclid(self.modulus as i64)
        }
    }
}

/// A lattice element. Entries are kept in `[0, q)` when the modulus is `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    entries: Vec<i64>,
    spec: LatticeSpec,
}

impl Weight {
    pub fn new(entries: Vec<i64>, spec: LatticeSpec) -> Result<Self> {
        if entries.len() != spec.n {
            return Err(Error::LengthMismatch { expected: spec.n, actual: entries.len() });
        }
        let reduced: Vec<i64> = entries.iter().map(|&x| spec.reduce(x)).collect();
        if spec.kind == LatticeKind::ZeroSum {
            let sum = reduced
                .iter()
                .try_fold(0i64, |acc, &x| acc.checked_add(x))
                .ok_or(Error::Overflow)?;
            if spec.reduce(sum) != 0 {
                return Err(Error::InvalidWeight {
                    entries,
                    reason: "entries do not sum to zero".into(),
                });
            }
        }
        Ok(Weight { entries: reduced, spec })
    }

    pub fn zero(spec: LatticeSpec) -> Self {
        Weight { entries: vec![0; spec.n], spec }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Weight) -> Result<Weight> {
        if self.spec != other.spec {
            return Err(Error::MixedLattices);
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Weight::new(entries, self.spec)
    }

    pub fn neg(&self) -> Weight {
        let entries = self.entries.iter().map(|&x| self.spec.reduce(-x)).collect();
        Weight { entries, spec: self.spec }
    }

    /// Entrywise reduction into the same lattice shape modulo `q`.
    ///
    /// `q` must divide the current modulus (any `q` works from `Z`).
    pub fn reduce_mod(&self, q: u64) -> Result<Weight> {
        if q == 0 || (self.spec.modulus != 0 && !self.spec.modulus.is_multiple_of(q)) {
            return Err(Error::Precondition(format!(
                "cannot reduce modulo {q} from modulus {}",
                self.spec.modulus
            )));
        }
        Weight::new(self.entries.clone(), self.spec.with_modulus(q)?)
    }

    /// `Some((i, j))` (1-based) when this is the standard weight `a[i,j]`.
    pub fn as_standard(&self) -> Option<(usize, usize)> {
        let minus_one = self.spec.reduce(-1);
        let mut plus = None;
        let mut minus = None;
        for (k, &x) in self.entries.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if x == 1 && plus.is_none() {
                plus = Some(k + 1);
            } else if x == minus_one && minus.is_none() {
                minus = Some(k + 1);
            } else {
                return None;
            }
        }
        plus.zip(minus)
    }

    /// Integer coordinates in the fixed basis of the lattice.
    ///
    /// For the zero-sum lattice the `k`-th coordinate is the prefix sum
    /// `w_1 + ... + w_k`, since `w = sum_k c_k a[k,k+1]`.
    pub fn coordinates(&self) -> Vec<i64> {
        match self.spec.kind {
            LatticeKind::Full => self.entries.clone(),
            LatticeKind::ZeroSum => {
                let mut acc = 0i64;
                self.entries[..self.spec.n - 1]
                    .iter()
                    .map(|&x| {
                        acc += x;
                        acc
                    })
                    .collect()
            }
        }
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries).then(self.spec.cmp(&other.spec))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((i, j)) = self.as_standard() {
            return write!(f, "a[{i},{j}]");
        }
        write!(f, "(")?;
        for (k, x) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// The weight `a[i,j]`: `+1` at `i`, `-1` at `j` (1-based), zero elsewhere.
pub fn standard_weight(i: usize, j: usize, spec: LatticeSpec) -> Result<Weight> {
    let n = spec.n;
    for index in [i, j] {
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    if i == j {
        return Err(Error::EqualIndices(i));
    }
    let mut entries = vec![0; n];
    entries[i - 1] = 1;
    entries[j - 1] = -1;
    Weight::new(entries, spec)
}

/// A sorted, deduplicated set of weights from one lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSet {
    elements: Vec<Weight>,
    spec: LatticeSpec,
}

impl WeightSet {
    pub fn new(spec: LatticeSpec, weights: impl IntoIterator<Item = Weight>) -> Result<Self> {
        let mut elements: Vec<Weight> = weights.into_iter().collect();
        if elements.iter().any(|w| w.spec != spec) {
            return Err(Error::MixedLattices);
        }
        elements.sort();
        elements.dedup();
        Ok(WeightSet { elements, spec })
    }

    pub fn empty(spec: LatticeSpec) -> Self {
        WeightSet { elements: Vec::new(), spec }
    }

    /// Builds a set from raw entry vectors.
    pub fn from_entries(spec: LatticeSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let weights = rows
            .iter()
            .map(|r| Weight::new(r.clone(), spec))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, weights)
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Weight> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Weight] {
        &self.elements
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.elements.binary_search(w).ok()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.index_of(w).is_some()
    }

    pub fn union(&self, other: &WeightSet) -> Result<WeightSet> {
        if self.spec != other.spec {
            return Err(Error::MixedLattices);
        }
        WeightSet::new(self.spec, self.elements.iter().chain(&other.elements).cloned())
    }

    /// Entrywise reduction of every element modulo `q`.
    pub fn reduce_mod(&self, q: u64) -> Result<WeightSet> {
        let spec = self.spec.with_modulus(q)?;
        let reduced = self.elements.iter().map(|w| w.reduce_mod(q)).collect::<Result<Vec<_>>>()?;
        WeightSet::new(spec, reduced)
    }
}

impl Serialize for WeightSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(serializer)
    }
}

impl<'a> IntoIterator for &'a WeightSet {
    type Item = &'a Weight;
    type IntoIter = std::slice::Iter<'a, Weight>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, actual: bad.len() });
        }
        Ok(IntegerMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Matrix whose `k`-th column is `columns[k]`; every column has length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::LengthMismatch { expected: rows, actual: col.len() });
            }
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, actual: other.rows });
        }
        // Sums are accumulated in 128 bits; only the results must fit 64 bits.
        let mut acc = vec![0i128; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as i128;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let slot = &mut acc[i * other.cols + j];
                    *slot = a
                        .checked_mul(other.get(k, j) as i128)
                        .and_then(|t| slot.checked_add(t))
                        .ok_or(Error::Overflow)?;
                }
            }
        }
        WideMatrix { rows: self.rows, cols: other.cols, data: acc }.narrow()
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Diagonal entries `(0,0), (1,1), ...`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }
}

/// Working copy for the normal form: 128-bit entries with checked arithmetic.
#[derive(Debug, Clone)]
struct WideMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl WideMatrix {
    fn widen(m: &IntegerMatrix) -> Self {
        WideMatrix { rows: m.rows, cols: m.cols, data: m.data.iter().map(|&x| x as i128).collect() }
    }

    fn identity(n: usize) -> Self {
        WideMatrix::widen(&IntegerMatrix::identity(n))
    }

    fn narrow(&self) -> Result<IntegerMatrix> {
        let data = self
            .data
            .iter()
            .map(|&x| i64::try_from(x).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegerMatrix { rows: self.rows, cols: self.cols, data })
    }

    fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, x: i128) {
        self.data[i * self.cols + j] = x;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= factor * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, factor: i128) -> Result<()> {
        if factor == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s == 0 {
                continue;
            }
            let v = factor
                .checked_mul(s)
                .and_then(|t| self.get(dst, j).checked_sub(t))
                .ok_or(Error::Overflow)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] -= factor * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, factor: i128) -> Result<()> {
        if factor == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s == 0 {
                continue;
            }
            let v = factor
                .checked_mul(s)
                .and_then(|t| self.get(i, dst).checked_sub(t))
                .ok_or(Error::Overflow)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<()> {
        for j in 0..self.cols {
            let v = self.get(i, j).checked_neg().ok_or(Error::Overflow)?;
            self.set(i, j, v);
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `left * m * right = diagonal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.diagonal.diagonal().into_iter().filter(|&d| d != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with unimodular transforms. Work is done in checked
/// 128-bit arithmetic; results that do not fit 64 bits are an overflow error.
///
/// If the transforms overflow, the transpose is reduced instead; its pivot
/// sequence differs and `(L' m^T R')^T = R'^T m L'^T` gives the same diagonal.
pub fn smith_normal_form(m: &IntegerMatrix) -> Result<SmithForm> {
    match reduce_to_smith(m, true) {
        Ok((diagonal, transforms)) => {
            let (left, right) = transforms.expect("transforms were tracked");
            Ok(SmithForm { diagonal, left, right })
        }
        Err(Error::Overflow) => {
            let (diagonal, transforms) = reduce_to_smith(&m.transpose(), true)?;
            let (left, right) = transforms.expect("transforms were tracked");
            Ok(SmithForm {
                diagonal: diagonal.transpose(),
                left: right.transpose(),
                right: left.transpose(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Nonzero invariant factors without tracking transforms.
pub fn invariant_factors(m: &IntegerMatrix) -> Result<Vec<i64>> {
    let (diagonal, _) = reduce_to_smith(m, false)?;
    Ok(diagonal.diagonal().into_iter().filter(|&d| d != 0).collect())
}

type Transforms = Option<(IntegerMatrix, IntegerMatrix)>;

fn reduce_to_smith(m: &IntegerMatrix, track: bool) -> Result<(IntegerMatrix, Transforms)> {
    let (a, tr) = reduce_wide(m, track)?;
    let tr = match tr {
        Some((left, right)) => Some((left.narrow()?, right.narrow()?)),
        None => None,
    };
    Ok((a.narrow()?, tr))
}

type WideTransforms = Option<(WideMatrix, WideMatrix)>;

fn reduce_wide(m: &IntegerMatrix, track: bool) -> Result<(WideMatrix, WideTransforms)> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = WideMatrix::widen(m);
    let mut tr: WideTransforms =
        track.then(|| (WideMatrix::identity(rows), WideMatrix::identity(cols)));

    for t in 0..rows.min(cols) {
        loop {
            // The smallest entry of the remaining block becomes the pivot; every
            // pass either clears row and column t or leaves a strictly smaller entry.
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                return Ok((a, tr));
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some((left, right)) = tr.as_mut() {
                left.swap_rows(t, pi);
                right.swap_cols(t, pj);
            }
            let pivot = a.get(t, t);
            let mut clear = true;
            for i in t + 1..rows {
                let factor = nearest_quotient(a.get(i, t), pivot);
                a.sub_row(i, t, factor)?;
                if let Some((left, _)) = tr.as_mut() {
                    left.sub_row(i, t, factor)?;
                }
                clear &= a.get(i, t) == 0;
            }
            for j in t + 1..cols {
                let factor = nearest_quotient(a.get(t, j), pivot);
                a.sub_col(j, t, factor)?;
                if let Some((_, right)) = tr.as_mut() {
                    right.sub_col(j, t, factor)?;
                }
                clear &= a.get(t, j) == 0;
            }
            if !clear {
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a.get(i, j) % pivot != 0));
            match offender {
                Some(i) => {
                    a.sub_row(t, i, -1)?;
                    if let Some((left, _)) = tr.as_mut() {
                        left.sub_row(t, i, -1)?;
                    }
                }
                None => break,
            }
        }
        if a.get(t, t) < 0 {
            a.negate_row(t)?;
            if let Some((left, _)) = tr.as_mut() {
                left.negate_row(t)?;
            }
        }
    }
    Ok((a, tr))
}

/// `x / d` rounded to the nearest integer, so the remainder is at most `|d| / 2`.
fn nearest_quotient(x: i128, d: i128) -> i128 {
    let q = x.div_euclid(d);
    let r = x.rem_euclid(d);
    if 2 * r > d.abs() {
        q + d.signum()
    } else {
        q
    }
}

fn min_abs_entry(a: &WideMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, u128)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j).unsigned_abs();
            if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                best = Some((i, j, v));
                if v == 1 {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Columns: coordinates of each element, then `q` times each basis vector
/// when the modulus is `q > 0`. The lattice is spanned by `lambda` iff this
/// matrix is surjective over `Z`.
fn relation_matrix(lambda: &WeightSet) -> Result<IntegerMatrix> {
    let spec = lambda.spec;
    let rank = spec.rank();
    let mut columns: Vec<Vec<i64>> = lambda.iter().map(Weight::coordinates).collect();
    if spec.modulus != 0 {
        let q = i64::try_from(spec.modulus).map_err(|_| Error::Overflow)?;
        for k in 0..rank {
            let mut col = vec![0; rank];
            col[k] = q;
            columns.push(col);
        }
    }
    IntegerMatrix::from_columns(rank, &columns)
}

/// Whether `lambda` generates its whole lattice (over `Z` or `Z/q`).
pub fn spans(lambda: &WeightSet) -> Result<bool> {
    let rank = lambda.spec.rank();
    if rank == 0 {
        return Ok(true);
    }
    let factors = invariant_factors(&relation_matrix(lambda)?)?;
    Ok(factors.len() == rank && factors.iter().all(|&d| d == 1))
}

/// Rank of the subgroup spanned by `lambda` over `Q` (modulus 0 only).
pub fn span_rank(lambda: &WeightSet) -> Result<usize> {
    if lambda.spec.modulus != 0 {
        return Err(Error::Precondition("span_rank is defined for integer lattices".into()));
    }
    if lambda.spec.rank() == 0 || lambda.is_empty() {
        return Ok(0);
    }
    Ok(invariant_factors(&relation_matrix(lambda)?)?.len())
}

/// Integer basis of the relation module `{c in Z[lambda] : sum c_l * l = 0}`.
///
/// Coordinates follow the canonical order of `lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelDescription {
    pub basis: Vec<Vec<i64>>,
}

impl KernelDescription {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Kernel of `phi: Z[lambda] -> lattice`.
///
/// For a modulus `q > 0` the kernel of `Z[lambda] -> (Z/q)-lattice` is
/// computed as the projection of the kernel of `[coords | q I]`; the
/// projection is injective, so the projected vectors are again a basis.
pub fn kernel_basis(lambda: &WeightSet) -> Result<KernelDescription> {
    let size = lambda.len();
    if lambda.spec.rank() == 0 {
        let basis = (0..size)
            .map(|k| {
                let mut v = vec![0; size];
                v[k] = 1;
                v
            })
            .collect();
        return Ok(KernelDescription { basis });
    }
    let matrix = relation_matrix(lambda)?;
    let snf = smith_normal_form(&matrix)?;
    let rank = snf.rank();
    let basis = (rank..matrix.cols)
        .map(|j| snf.right.column(j)[..size].to_vec())
        .collect();
    Ok(KernelDescription { basis })
}

/// Integer vectors spanning `Ker(phi) ⊗ Q`, one per non-pivot element of
/// `lambda`, each primitive. A permutation of `lambda` acts trivially on the
/// kernel iff it fixes all of them, and these stay small where an integral
/// basis from the normal form can overflow.
///
/// For a modulus `q > 0` the kernel has finite index in `Z[lambda]`, so the
/// unit vectors are returned.
pub fn rational_kernel_basis(lambda: &WeightSet) -> Result<KernelDescription> {
    let size = lambda.len();
    let unit = |k: usize| {
        let mut v = vec![0; size];
        v[k] = 1;
        v
    };
    if lambda.spec.modulus != 0 || lambda.spec.rank() == 0 {
        return Ok(KernelDescription { basis: (0..size).map(unit).collect() });
    }
    let coords: Vec<Vec<i64>> = lambda.iter().map(Weight::coordinates).collect();
    let mut rows: Vec<Vec<i128>> = (0..lambda.spec.rank())
        .map(|i| coords.iter().map(|c| c[i] as i128).collect())
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    for c in 0..size {
        let r = pivots.len();
        let Some(best) = (r..rows.len())
            .filter(|&i| rows[i][c] != 0)
            .min_by_key(|&i| rows[i][c].unsigned_abs())
        else {
            continue;
        };
        rows.swap(r, best);
        for i in 0..rows.len() {
            let x = rows[i][c];
            if i == r || x == 0 {
                continue;
            }
            let d = rows[r][c];
            let combined = rows[i]
                .iter()
                .zip(&rows[r])
                .map(|(&a, &b)| {
                    d.checked_mul(a)
                        .and_then(|a| x.checked_mul(b).and_then(|b| a.checked_sub(b)))
                        .ok_or(Error::Overflow)
                })
                .collect::<Result<Vec<_>>>()?;
            rows[i] = primitive(combined);
        }
        pivots.push(c);
        if pivots.len() == rows.len() {
            break;
        }
    }

    let mut basis = Vec::new();
    for f in (0..size).filter(|f| !pivots.contains(f)) {
        let mut scale: i128 = 1;
        for (k, &c) in pivots.iter().enumerate() {
            if rows[k][f] != 0 {
                let d = rows[k][c].abs();
                scale = (scale / gcd(scale, d)).checked_mul(d).ok_or(Error::Overflow)?;
            }
        }
        let mut v = vec![0i128; size];
        v[f] = scale;
        for (k, &c) in pivots.iter().enumerate() {
            v[c] = -(rows[k][f] * (scale / rows[k][c]));
        }
        let v = primitive(v)
            .into_iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        basis.push(v);
    }
    Ok(KernelDescription { basis })
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Divides out the content of `v`.
fn primitive(mut v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    v
}

/// Evaluates `phi(c) = sum_k c_k * lambda_k` as raw (unreduced) entries.
pub fn evaluate(lambda: &WeightSet, coefficients: &[i64]) -> Result<Vec<i64>> {
    if coefficients.len() != lambda.len() {
        return Err(Error::LengthMismatch { expected: lambda.len(), actual: coefficients.len() });
    }
    let mut acc = vec![0i64; lambda.spec.n];
    for (w, &c) in lambda.iter().zip(coefficients) {
        for (slot, &x) in acc.iter_mut().zip(w.entries()) {
            *slot = c
                .checked_mul(x)
                .and_then(|t| slot.checked_add(t))
                .ok_or(Error::Overflow)?;
        }
    }
    Ok(acc)
}

/// Whether `phi(c)` vanishes in the lattice.
pub fn in_kernel(lambda: &WeightSet, coefficients: &[i64]) -> Result<bool> {
    let value = evaluate(lambda, coefficients)?;
    Ok(value.iter().all(|&x| lambda.spec.reduce(x) == 0))
}

/// Whether `w` lies in `p` times the lattice, i.e. every entry is divisible by `p`.
pub fn in_p_multiple(w: &Weight, p: u64) -> Result<bool> {
    match w.spec.prime() {
        Some(prime) if prime == p => {}
        _ => return Err(Error::PrimeMismatch { p, modulus: w.spec.modulus }),
    }
    let p = p as i64;
    Ok(w.entries.iter().all(|&x| x % p == 0))
}

/// Row-echelon basis of a subspace of `F_p^dim`, grown one vector at a time.
#[derive(Debug, Clone)]
pub struct ModPEchelon {
    p: u64,
    dim: usize,
    // rows[k] has a leading 1 at pivots[k]
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModPEchelon {
    pub fn new(p: u64, dim: usize) -> Self {
        ModPEchelon { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn reduce(&self, v: &mut [u64]) {
        let p = self.p;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = (*x + (p - c) * r) % p;
            }
        }
    }

    /// Adds `v` (entries already reduced mod p); returns whether the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = mod_inverse(v[piv], self.p);
        for x in v.iter_mut() {
            *x = *x * inv % self.p;
        }
        // keep existing rows reduced at the new pivot
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&v) {
                    *x = (*x + (self.p - c) * y) % self.p;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and small
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Coordinates of `w` reduced modulo the prime of its modulus.
pub fn mod_p_coordinates(w: &Weight) -> Result<Vec<u64>> {
    let p = w.spec.prime().ok_or_else(|| {
        Error::Precondition("mod-p coordinates need a nonzero modulus".into())
    })?;
    Ok(w.coordinates().into_iter().map(|c| c.rem_euclid(p as i64) as u64).collect())
}

/// Span test over `Z/p^e` through the reduction `M / pM`: a subset of a free
/// `Z/p^e`-module generates it iff its image spans the `F_p` vector space.
pub fn spans_by_reduction(lambda: &WeightSet) -> Result<bool> {
    let spec = lambda.spec;
    let p = spec
        .prime()
        .ok_or_else(|| Error::Precondition("reduction test needs a nonzero modulus".into()))?;
    let mut echelon = ModPEchelon::new(p, spec.rank());
    for w in lambda {
        echelon.insert(&mod_p_coordinates(w)?);
        if echelon.is_full() {
            break;
        }
    }
    Ok(echelon.is_full())
}
