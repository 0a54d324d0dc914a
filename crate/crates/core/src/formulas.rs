//! Closed-form bigraded Betti numbers for generalized truncation polytopes,
//! the one-step truncation recurrence, and predictors for moment-angle
//! manifolds that split as connected sums of products of two spheres.
//!
//! Binomials with a negative argument or with `c > b` are zero throughout.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::constructions::GtpSpec;
use crate::error::{Error, Result};
use crate::table::{ordinary_betti, BigradedBettiTable, OrdinaryBettiVector};

/// `C(b, c)`, zero outside `0 <= c <= b`.
pub fn binom(b: i64, c: i64) -> i128 {
    if b < 0 || c < 0 || c > b {
        return 0;
    }
    let c = c.min(b - c);
    let mut acc: i128 = 1;
    for t in 0..c {
        acc = acc * (b - t) as i128 / (t + 1) as i128;
    }
    acc
}

fn binom_big(b: i64, c: i64) -> BigInt {
    if b < 0 || c < 0 || c > b {
        return BigInt::zero();
    }
    let c = c.min(b - c);
    let mut acc = BigInt::from(1);
    for t in 0..c {
        acc = acc * BigInt::from(b - t) / BigInt::from(t + 1);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaProvenance {
    /// General `(k; n_1, ..., n_r)` with `d >= 3`.
    Gtp,
    /// Iterated truncations of a simplex.
    Truncation,
    /// Polygons.
    Polygon,
}

impl FormulaProvenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaProvenance::Gtp => "gtp",
            FormulaProvenance::Truncation => "truncation",
            FormulaProvenance::Polygon => "polygon",
        }
    }
}

impl fmt::Display for FormulaProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A predicted table together with the closed form that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaTable {
    pub table: BigradedBettiTable,
    pub provenance: FormulaProvenance,
}

impl FormulaTable {
    fn new(m: usize, d: usize, provenance: FormulaProvenance) -> Self {
        let mut table = BigradedBettiTable::new(m, Some(d)).with_engine(format!("formula:{provenance}"));
        table.set(0, 0, 1);
        table.set(m - d, m, 1);
        FormulaTable { table, provenance }
    }

    fn put(&mut self, i: usize, j: usize, value: i128) -> Result<()> {
        if value < 0 {
            return Err(Error::InvalidArgument(format!("closed form is negative at (i={i}, j={j})")));
        }
        self.table.add(i, j, value as u64);
        Ok(())
    }
}

/// Closed form for `(k; n_1, ..., n_r)` with `d >= 3`.
///
/// Rows `1 < l < d - 1` collect `C(k, i - s)` over sub-multisets of `s`
/// dims summing to `l`; row `l = 1` is
/// `k C(k+r-1, i) - C(k, i+1) + a C(k, i-1)` for `1 <= i <= k + r - 1`
/// (`a` = number of dims equal to one) and row `l = d - 1` holds the same
/// values at column `k + r - i`.
pub fn gtp_formula_table(spec: &GtpSpec) -> Result<FormulaTable> {
    let (k, r, d, m, a) = (spec.k(), spec.r(), spec.d(), spec.m(), spec.a());
    if d < 3 {
        return Err(Error::InvalidArgument(format!(
            "closed form needs d >= 3 (got d = {d}); use the polygon formula for d = 2"
        )));
    }
    let mut out = FormulaTable::new(m, d, FormulaProvenance::Gtp);
    let cols = k + r - 1;
    let (ki, ri, ai) = (k as i64, r as i64, a as i128);
    for i in 1..=cols {
        let ii = i as i64;
        let value = ki as i128 * binom(ki + ri - 1, ii) - binom(ki, ii + 1) + ai * binom(ki, ii - 1);
        out.put(i, i + 1, value)?;
        let dual_i = k + r - i;
        out.put(dual_i, dual_i + d - 1, value)?;
    }
    let dims = spec.dims();
    for subset in 1u32..(1 << dims.len()) {
        let l: usize = (0..dims.len()).filter(|&t| subset >> t & 1 == 1).map(|t| dims[t]).sum();
        if l <= 1 || l >= d - 1 {
            continue;
        }
        let s = subset.count_ones() as i64;
        for i in 1..=cols {
            out.put(i, i + l, binom(ki, i as i64 - s))?;
        }
    }
    Ok(out)
}

/// `k` truncations of the `n`-simplex, `n >= 3`: row 1 is `i C(k+1, i+1)`,
/// row `n - 1` is `(k+1-i) C(k+1, k+2-i)`, `1 <= i <= k`.
pub fn truncation_formula_table(k: usize, n: usize) -> Result<FormulaTable> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("truncation formula needs n >= 3 (got {n})")));
    }
    let m = n + 1 + k;
    let mut out = FormulaTable::new(m, n, FormulaProvenance::Truncation);
    let ki = k as i64;
    for i in 1..=k {
        let ii = i as i64;
        out.put(i, i + 1, ii as i128 * binom(ki + 1, ii + 1))?;
        out.put(i, i + n - 1, (ki + 1 - ii) as i128 * binom(ki + 1, ki + 2 - ii))?;
    }
    Ok(out)
}

/// The `(k + 3)`-gon: a single row `i C(k+1, i+1) + (k+1-i) C(k+1, k+2-i)`.
pub fn polygon_formula_table(k: usize) -> FormulaTable {
    let m = k + 3;
    let mut out = FormulaTable::new(m, 2, FormulaProvenance::Polygon);
    let ki = k as i64;
    for i in 1..=k {
        let ii = i as i64;
        let value = ii as i128 * binom(ki + 1, ii + 1) + (ki + 1 - ii) as i128 * binom(ki + 1, ki + 2 - ii);
        out.put(i, i + 1, value).expect("polygon entries are nonnegative");
    }
    out
}

/// Row `l = 1` of the once-stacked complex predicted from the table of a
/// `d`-polytope with `m` facets (`d >= 3`):
/// `β'(i, i+1) = C(m-d, i) + β(i-1, i) + β(i, i+1)` for `1 <= i <= m + 1 - d`.
pub fn truncation_recurrence(prev: &BigradedBettiTable, m: usize, d: usize) -> Result<BTreeMap<usize, u64>> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("recurrence needs d >= 3 (got {d})")));
    }
    if m <= d {
        return Err(Error::InvalidArgument(format!("need m > d (got m = {m}, d = {d})")));
    }
    let mut row = BTreeMap::new();
    for i in 1..=m + 1 - d {
        let value = binom((m - d) as i64, i as i64) as u64 + prev.get(i - 1, i) + prev.get(i, i + 1);
        row.insert(i, value);
    }
    Ok(row)
}

/// `k C(k+1, i) - C(k, i+1) = i C(k+2, i+1) - C(k, i-1)` for `0 <= i <= k + 1`,
/// in exact integers.
pub fn remark_identity(k: usize) -> bool {
    let k = k as i64;
    (0..=k + 1).all(|i| {
        let lhs = BigInt::from(k) * binom_big(k + 1, i) - binom_big(k, i + 1);
        let rhs = BigInt::from(i) * binom_big(k + 2, i + 1) - binom_big(k, i - 1);
        lhs == rhs
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SphereProduct {
    pub p: usize,
    pub q: usize,
    pub mult: u64,
}

/// Connected sum of `mult` copies of `S^p × S^q` per entry, normalized to
/// `p <= q`, merged and sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SphereProductList(Vec<SphereProduct>);

impl SphereProductList {
    pub fn new(entries: impl IntoIterator<Item = SphereProduct>) -> Self {
        let mut merged: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for e in entries {
            if e.mult > 0 {
                *merged.entry((e.p.min(e.q), e.p.max(e.q))).or_insert(0) += e.mult;
            }
        }
        SphereProductList(merged.into_iter().map(|((p, q), mult)| SphereProduct { p, q, mult }).collect())
    }

    pub fn entries(&self) -> &[SphereProduct] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Common `p + q`, if all entries agree.
    pub fn total_dim(&self) -> Option<usize> {
        let mut dims = self.0.iter().map(|e| e.p + e.q);
        let first = dims.next()?;
        dims.all(|x| x == first).then_some(first)
    }
}

impl fmt::Display for SphereProductList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(sphere)");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|e| if e.mult == 1 { format!("S^{}xS^{}", e.p, e.q) } else { format!("{}(S^{}xS^{})", e.mult, e.p, e.q) })
            .collect();
        f.write_str(&parts.join(" # "))
    }
}

/// `#_{j=1}^{k} (S^{j+2} × S^{2n+k-j-1})^{# j C(k+1, j+1)}` for `k`
/// truncations of the `n`-simplex.
pub fn mcgavran_decomposition(k: usize, n: usize) -> Result<SphereProductList> {
    if k == 0 || n < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 1 and n >= 2 (got k = {k}, n = {n})")));
    }
    Ok(SphereProductList::new((1..=k).map(|j| SphereProduct {
        p: j + 2,
        q: 2 * n + k - j - 1,
        mult: (j as i128 * binom(k as i64 + 1, j as i64 + 1)) as u64,
    })))
}

/// Betti numbers of the connected sum: `b^0 = b^N = 1` and each entry adds
/// its multiplicity to `b^p` and `b^q`.
pub fn connected_sum_betti(list: &SphereProductList, total_dim: usize) -> Result<OrdinaryBettiVector> {
    if let Some(bad) = list.entries().iter().find(|e| e.p + e.q != total_dim) {
        return Err(Error::InvalidArgument(format!(
            "S^{} x S^{} has dimension {}, expected {total_dim}",
            bad.p,
            bad.q,
            bad.p + bad.q
        )));
    }
    let mut b = OrdinaryBettiVector { total_dim: Some(total_dim), ..Default::default() };
    b.add(0, 1);
    b.add(total_dim, 1);
    for e in list.entries() {
        b.add(e.p, e.mult);
        b.add(e.q, e.mult);
    }
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    Trusted,
    Heuristic,
}

/// Outcome of reading a sphere-product decomposition off a Betti table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereListPrediction {
    pub list: Option<SphereProductList>,
    pub reason: Option<String>,
    pub total_dim: usize,
    pub validity: Validity,
}

/// Trusted for truncations of a simplex, and for two factors when `m < 3d`.
pub fn sphere_list_validity(spec: Option<&GtpSpec>) -> Validity {
    match spec {
        Some(s) if s.r() == 1 || (s.r() == 2 && s.m() < 3 * s.d()) => Validity::Trusted,
        _ => Validity::Heuristic,
    }
}

/// Reads `{(q, N - q) × b^q}` off the ordinary Betti numbers (`N = m + d`)
/// when they look like a connected sum of products of two spheres:
/// `b^0 = b^N = 1`, `b^q = b^{N-q}`, `b^1 = b^2 = 0`. The middle degree is
/// halved. Betti numbers alone cannot certify such a splitting; see
/// [`crate::golod::product_below_top`] for the ring-level check.
pub fn sphere_list_from_table(table: &BigradedBettiTable, m: usize, d: usize, validity: Validity) -> SphereListPrediction {
    let n = m + d;
    let b = ordinary_betti(table);
    let fail = |reason: String| SphereListPrediction { list: None, reason: Some(reason), total_dim: n, validity };
    if b.get(0) != 1 || b.get(n) != 1 {
        return fail(format!("b^0 = {}, b^{n} = {}; both must be 1", b.get(0), b.get(n)));
    }
    if let Some((&q, _)) = b.b.iter().find(|(&q, _)| q > n) {
        return fail(format!("b^{q} is nonzero above the top degree {n}"));
    }
    for q in [1, 2] {
        if q < n && b.get(q) != 0 {
            return fail(format!("b^{q} = {} must vanish", b.get(q)));
        }
    }
    for q in 1..n {
        if b.get(q) != b.get(n - q) {
            return fail(format!("b^{q} = {} differs from b^{} = {}", b.get(q), n - q, b.get(n - q)));
        }
    }
    let mut entries = Vec::new();
    for q in 1..=n / 2 {
        let mut mult = b.get(q);
        if 2 * q == n {
            if mult % 2 == 1 {
                return fail(format!("middle Betti number b^{q} = {mult} is odd"));
            }
            mult /= 2;
        }
        entries.push(SphereProduct { p: q, q: n - q, mult });
    }
    SphereListPrediction { list: Some(SphereProductList::new(entries)), reason: None, total_dim: n, validity }
}
