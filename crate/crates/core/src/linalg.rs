//! Exact sparse linear algebra over the integers and the rationals.
//!
//! Vectors are sparse integer rows sorted by column. Rational row reduction
//! is fraction-free: a row is only ever replaced by an integer combination
//! and then divided by its content. Arithmetic is generic over [`Coeff`] so
//! the hot paths run on checked `i64` and fall back to `BigInt` when an
//! intermediate overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer coefficient with overflow-aware arithmetic.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + Zero {
    fn from_i64(v: i64) -> Self;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn add(&self, other: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    /// Exact division; callers guarantee divisibility.
    fn div_exact(&self, other: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Sparse vector: `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseVec<T> = Vec<(u32, T)>;

/// Signalled when checked arithmetic overflows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub(crate) fn to_big(v: &SparseVec<i64>) -> SparseVec<BigInt> {
    v.iter().map(|(c, x)| (*c, BigInt::from(*x))).collect()
}

/// `a * x - b * y`.
fn combine<T: Coeff>(a: &T, x: &[(u32, T)], b: &T, y: &[(u32, T)]) -> Result<SparseVec<T>, Overflow> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            let v = a.mul(&x[i].1).ok_or(Overflow)?;
            out.push((x[i].0, v));
            i += 1;
        } else if take_y {
            let v = b.mul(&y[j].1).ok_or(Overflow)?.neg().ok_or(Overflow)?;
            out.push((y[j].0, v));
            j += 1;
        } else {
            let v = a.mul(&x[i].1).ok_or(Overflow)?.sub(&b.mul(&y[j].1).ok_or(Overflow)?).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// Divides by the content and makes the leading entry positive.
fn make_primitive<T: Coeff>(v: &mut SparseVec<T>) -> Result<(), Overflow> {
    let Some(first) = v.first() else { return Ok(()) };
    let mut g = first.1.gcd(&first.1);
    for (_, x) in v.iter().skip(1) {
        if g.is_unit() {
            break;
        }
        g = g.gcd(x);
    }
    let flip = first.1.is_negative();
    if g.is_unit() && !flip {
        return Ok(());
    }
    let g = if flip { g.neg().ok_or(Overflow)? } else { g };
    for (_, x) in v.iter_mut() {
        *x = x.div_exact(&g);
    }
    Ok(())
}

/// Row echelon basis of a subspace of `Q^n`, indexed by leading column.
///
/// Rows are primitive integer vectors. Reduction only clears leading
/// entries, which is enough to decide membership.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pivot_of_col: Vec<Option<u32>>,
    rows: Vec<SparseVec<T>>,
    /// Rows are kept primitive (rational mode) or left untouched (integer mode).
    normalize: bool,
    /// Integer mode: every reduction so far was unimodular.
    unimodular: bool,
}

impl<T: Coeff> Echelon<T> {
    pub fn new(ncols: usize) -> Self {
        Echelon { pivot_of_col: vec![None; ncols], rows: Vec::new(), normalize: true, unimodular: true }
    }

    /// Integer mode: rows are never rescaled, and the echelon records
    /// whether all pivots stayed units.
    pub fn new_integral(ncols: usize) -> Self {
        Echelon { normalize: false, ..Self::new(ncols) }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<T>] {
        &self.rows
    }

    /// Leading columns of the basis rows, in insertion order.
    pub fn pivot_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_of_col[col as usize].is_some()
    }

    /// True when every pivot is a unit and every reduction was unimodular.
    pub fn all_pivots_unit(&self) -> bool {
        self.unimodular
    }

    /// Clears leading entries of `v` against the basis until its leading
    /// column is not a pivot (or `v` vanishes).
    pub fn reduce(&mut self, mut v: SparseVec<T>) -> Result<SparseVec<T>, Overflow> {
        loop {
            let Some((col, lead)) = v.first() else { return Ok(v) };
            if *col as usize >= self.pivot_of_col.len() {
                return Ok(v);
            }
            let Some(p) = self.pivot_of_col[*col as usize] else { return Ok(v) };
            let row = &self.rows[p as usize];
            let pivot = &row[0].1;
            v = if pivot.is_unit() {
                // v - (lead / pivot) * row, and 1 / pivot = pivot for units.
                let factor = lead.mul(pivot).ok_or(Overflow)?;
                combine(&T::from_i64(1), &v, &factor, row)?
            } else {
                if !self.normalize {
                    self.unimodular = false;
                }
                let g = pivot.gcd(lead);
                let a = pivot.div_exact(&g);
                let b = lead.div_exact(&g);
                if !a.is_unit() && !self.normalize {
                    self.unimodular = false;
                }
                combine(&a, &v, &b, row)?
            };
            if self.normalize {
                make_primitive(&mut v)?;
            }
        }
    }

    /// Adds `v` to the basis if independent; returns whether it was.
    pub fn insert(&mut self, v: SparseVec<T>) -> Result<bool, Overflow> {
        let mut r = self.reduce(v)?;
        if r.is_empty() {
            return Ok(false);
        }
        if self.normalize {
            make_primitive(&mut r)?;
        } else if !r[0].1.is_unit() {
            self.unimodular = false;
        }
        let col = r[0].0 as usize;
        self.pivot_of_col[col] = Some(self.rows.len() as u32);
        self.rows.push(r);
        Ok(true)
    }

    pub fn contains(&mut self, v: SparseVec<T>) -> Result<bool, Overflow> {
        Ok(self.reduce(v)?.is_empty())
    }
}

/// Rank over `Q` of a set of integer rows with `ncols` columns.
pub fn rank_rational(rows: &[SparseVec<i64>], ncols: usize) -> usize {
    let attempt = || -> Result<usize, Overflow> {
        let mut e = Echelon::<i64>::new(ncols);
        for r in rows {
            e.insert(r.clone())?;
        }
        Ok(e.rank())
    };
    attempt().unwrap_or_else(|_| {
        let mut e = Echelon::<BigInt>::new(ncols);
        for r in rows {
            e.insert(to_big(r)).expect("bigint arithmetic does not overflow");
        }
        e.rank()
    })
}

/// Nonzero invariant factors of an integer matrix given by rows, in
/// divisibility order. Unit pivots are eliminated sparsely first; the
/// remaining core is reduced densely with smallest-magnitude pivoting.
pub fn smith_invariants(rows: &[SparseVec<i64>], ncols: usize) -> Vec<BigInt> {
    let (units, core) = match eliminate_unit_pivots(rows, ncols) {
        Ok(res) => res,
        Err(Overflow) => (0, rows.iter().map(to_big).collect()),
    };
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_smith(core, ncols));
    factors
}

/// Repeatedly picks a ±1 entry, clears its column with row operations and
/// drops its row and column; each step contributes an invariant factor 1.
/// Returns the number of such steps and the residual rows.
fn eliminate_unit_pivots(rows: &[SparseVec<i64>], ncols: usize) -> Result<(usize, Vec<SparseVec<BigInt>>), Overflow> {
    let mut rows: Vec<Option<SparseVec<i64>>> = rows.iter().filter(|r| !r.is_empty()).cloned().map(Some).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r.as_ref().unwrap() {
            col_rows[*c as usize].push(i);
        }
    }
    let mut count = 0;
    loop {
        // Shortest row holding a unit; within it, the sparsest column.
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, r) in rows.iter().enumerate() {
            let Some(r) = r else { continue };
            if best.is_some_and(|(len, _, _)| r.len() >= len) {
                continue;
            }
            if let Some((c, _)) = r.iter().filter(|(_, x)| x.is_unit()).min_by_key(|(c, _)| col_rows[*c as usize].len()) {
                best = Some((r.len(), i, *c));
            }
        }
        let Some((_, pi, pc)) = best else { break };
        let prow = rows[pi].take().unwrap();
        let pval = prow.iter().find(|(c, _)| *c == pc).unwrap().1;
        let others = std::mem::take(&mut col_rows[pc as usize]);
        for i in others {
            if i == pi {
                continue;
            }
            let Some(r) = rows[i].as_ref() else { continue };
            let Some(&(_, x)) = r.iter().find(|(c, _)| *c == pc) else { continue };
            let before: Vec<u32> = r.iter().map(|(c, _)| *c).collect();
            let factor = x.checked_mul(pval).ok_or(Overflow)?;
            let new = combine(&1i64, r, &factor, &prow)?;
            for (c, _) in &new {
                if before.binary_search(c).is_err() {
                    col_rows[*c as usize].push(i);
                }
            }
            rows[i] = if new.is_empty() { None } else { Some(new) };
        }
        count += 1;
    }
    Ok((count, rows.into_iter().flatten().map(|r| to_big(&r)).collect()))
}

fn dense_smith(rows: Vec<SparseVec<BigInt>>, ncols: usize) -> Vec<BigInt> {
    if rows.is_empty() {
        return Vec::new();
    }
    // Compact the occupied columns.
    let mut used: Vec<u32> = rows.iter().flat_map(|r| r.iter().map(|(c, _)| *c)).collect();
    used.sort_unstable();
    used.dedup();
    debug_assert!(used.iter().all(|&c| (c as usize) < ncols));
    let n = used.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut dense = vec![BigInt::zero(); n];
            for (c, x) in r {
                dense[used.binary_search(c).unwrap()] = x.clone();
            }
            dense
        })
        .collect();
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero magnitude in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..n {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Enforce divisibility of the remaining block by the pivot.
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &p).is_zero()));
                match bad {
                    Some(i) => {
                        for j in t..n {
                            let x = a[i][j].clone();
                            a[t][j] += x;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest entry of row/column t into the pivot slot.
            let mut best = (t, t);
            for i in t..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            }
            if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag.sort();
    diag
}

/// Invariant factors greater than one.
pub fn torsion_coefficients(invariants: &[BigInt]) -> Vec<u64> {
    invariants.iter().filter(|x| !x.is_one()).map(|x| x.to_u64().unwrap_or(u64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> SparseVec<i64> {
        entries.to_vec()
    }

    #[test]
    fn rank_of_square_boundary() {
        // Edges 12, 23, 34, 14 against vertices 1..4.
        let rows = vec![
            v(&[(0, -1), (1, 1)]),
            v(&[(1, -1), (2, 1)]),
            v(&[(2, -1), (3, 1)]),
            v(&[(0, -1), (3, 1)]),
        ];
        assert_eq!(rank_rational(&rows, 4), 3);
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::<i64>::new(3);
        assert!(e.insert(v(&[(0, 2), (1, 4)])).unwrap());
        assert!(e.insert(v(&[(1, 3), (2, 1)])).unwrap());
        assert!(e.contains(v(&[(0, 1), (1, 5), (2, 1)])).unwrap());
        assert!(!e.contains(v(&[(2, 1)])).unwrap());
    }

    #[test]
    fn smith_detects_two_torsion() {
        let rows = vec![v(&[(0, 2)])];
        assert_eq!(torsion_coefficients(&smith_invariants(&rows, 1)), vec![2]);
        let rows = vec![v(&[(0, 1), (1, 1)]), v(&[(0, 1), (1, -1)])];
        let inv = smith_invariants(&rows, 2);
        assert_eq!(inv, vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn dense_smith_handles_non_unit_core() {
        let rows = vec![v(&[(0, 2), (1, 4)]), v(&[(0, 6), (1, 8)])];
        // det = -8, gcd of entries 2 -> factors 2, 4.
        assert_eq!(smith_invariants(&rows, 2), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn bigint_fallback_matches() {
        let big = i64::MAX / 2;
        let rows = vec![v(&[(0, big), (1, 3)]), v(&[(0, 3), (1, big)]), v(&[(0, 1), (1, 1)])];
        assert_eq!(rank_rational(&rows, 2), 2);
    }
}
