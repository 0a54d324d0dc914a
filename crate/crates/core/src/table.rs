//! Bigraded Betti tables, ordinary Betti vectors and their serializations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse table `(i, j) -> β^{-i,2j}`; zero entries are never stored.
#[derive(Clone, Debug, Default)]
pub struct BigradedBettiTable {
    pub m: usize,
    /// Polytope dimension, when known.
    pub d: Option<usize>,
    entries: BTreeMap<(usize, usize), u64>,
    /// Integer runs: whether some full subcomplex had torsion.
    pub torsion: Option<bool>,
    /// Which engine produced the table (`hochster`, `taylor`, `formula:...`).
    pub engine: Option<String>,
}

impl PartialEq for BigradedBettiTable {
    /// Tables compare by `m` and entries; metadata is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.entries == other.entries
    }
}

impl Eq for BigradedBettiTable {}

impl BigradedBettiTable {
    pub fn new(m: usize, d: Option<usize>) -> Self {
        BigradedBettiTable { m, d, ..Default::default() }
    }

    pub fn with_engine(mut self, engine: impl Into<String>) -> Self {
        self.engine = Some(engine.into());
        self
    }

    /// `β^{-i,2j}`.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, j: usize, value: u64) {
        if value == 0 {
            return;
        }
        *self.entries.entry((i, j)).or_insert(0) += value;
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        if value == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    /// Nonzero entries as `((i, j), β)`, ordered by `(i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry in row `l = j - i`, column `i`.
    pub fn row_entry(&self, l: usize, i: usize) -> u64 {
        self.get(i, i + l)
    }

    pub fn merge(&mut self, other: &BigradedBettiTable) {
        for (&(i, j), &v) in &other.entries {
            self.add(i, j, v);
        }
    }

    /// Total rank `Σ β^{-i,2j}`.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Entries sorted by `(j - i, i)` for serialization.
    fn sorted_entries(&self) -> Vec<((usize, usize), u64)> {
        let mut v: Vec<_> = self.entries().collect();
        v.sort_by_key(|&((i, j), _)| (j - i, i));
        v
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let file = TableFile {
            m: self.m,
            d: self.d,
            entries: self.sorted_entries().into_iter().map(|((i, j), beta)| TableEntry { i, j, beta }).collect(),
            engine: self.engine.clone(),
            torsion: self.torsion,
        };
        serde_json::to_value(file).expect("table serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut t = BigradedBettiTable::new(file.m, file.d);
        for e in file.entries {
            if e.i > e.j || e.j > file.m {
                return Err(Error::Parse(format!("entry (i={}, j={}) outside 0 <= i <= j <= m", e.i, e.j)));
            }
            t.add(e.i, e.j, e.beta);
        }
        t.engine = file.engine;
        t.torsion = file.torsion;
        Ok(t)
    }

    /// Text layout with rows `l = j - i` from 1 to `d - 1` and columns `i`
    /// from 1 to `m - d - 1`; the corners `β^{0,0}` and `β^{-(m-d),2m}` are
    /// printed separately, followed by any entry outside that grid.
    pub fn render_text(&self) -> String {
        let m = self.m;
        let d = self.d.unwrap_or_else(|| self.entries.keys().map(|&(i, j)| j - i).max().unwrap_or(0) + 1).min(m);
        let cols = (m - d).saturating_sub(1);
        let rows = d.saturating_sub(1);
        let mut out = String::new();
        let _ = writeln!(out, "m = {m}, d = {d}");
        let width = self.entries.values().map(|v| v.to_string().len()).max().unwrap_or(1).max(3) + 2;
        let _ = write!(out, "{:<6}", "i,l");
        for i in 1..=cols {
            let _ = write!(out, "{:>width$}", format!("i={i}"));
        }
        out.push('\n');
        let mut shown = std::collections::BTreeSet::new();
        for l in 1..=rows {
            let _ = write!(out, "{:<6}", format!("l={l}"));
            for i in 1..=cols {
                shown.insert((i, i + l));
                let _ = write!(out, "{:>width$}", self.row_entry(l, i));
            }
            out.push('\n');
        }
        let top = (m - d, m);
        shown.insert((0, 0));
        shown.insert(top);
        let _ = writeln!(out, "beta^{{0,0}} = {}, beta^{{-{},{}}} = {}", self.get(0, 0), top.0, 2 * top.1, self.get(top.0, top.1));
        let others: Vec<_> = self.entries().filter(|(k, _)| !shown.contains(k)).collect();
        if !others.is_empty() {
            out.push_str("other:");
            for ((i, j), v) in others {
                let _ = write!(out, " beta^{{-{i},{}}}={v}", 2 * j);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TableFile {
    m: usize,
    d: Option<usize>,
    entries: Vec<TableEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    engine: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torsion: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableEntry {
    i: usize,
    j: usize,
    beta: u64,
}

/// Topological Betti numbers `b^q` of the moment-angle complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinaryBettiVector {
    pub b: BTreeMap<usize, u64>,
    /// `m + d` when the polytope dimension is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_dim: Option<usize>,
}

impl OrdinaryBettiVector {
    pub fn get(&self, q: usize) -> u64 {
        self.b.get(&q).copied().unwrap_or(0)
    }

    pub fn add(&mut self, q: usize, value: u64) {
        if value > 0 {
            *self.b.entry(q).or_insert(0) += value;
        }
    }
}

/// `b^q = Σ_{2j - i = q} β^{-i,2j}`.
pub fn ordinary_betti(table: &BigradedBettiTable) -> OrdinaryBettiVector {
    let mut out = OrdinaryBettiVector { total_dim: table.d.map(|d| table.m + d), ..Default::default() };
    for ((i, j), v) in table.entries() {
        out.add(2 * j - i, v);
    }
    out
}

/// Entries where two tables differ, as `(i, j, a, b)` ordered by `(i, j)`.
pub fn table_differences(a: &BigradedBettiTable, b: &BigradedBettiTable) -> Vec<(usize, usize, u64, u64)> {
    let keys: std::collections::BTreeSet<(usize, usize)> = a.entries.keys().chain(b.entries.keys()).copied().collect();
    keys.into_iter()
        .filter_map(|(i, j)| {
            let (x, y) = (a.get(i, j), b.get(i, j));
            (x != y).then_some((i, j, x, y))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityViolation {
    pub i: usize,
    pub j: usize,
    pub beta: u64,
    pub dual_i: isize,
    pub dual_j: isize,
    pub dual_beta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub holds: bool,
    pub violations: Vec<DualityViolation>,
}

/// Checks `β^{-i,2j} = β^{-(m-n)+i, 2(m-j)}` for every stored entry.
pub fn duality_check(table: &BigradedBettiTable, m: usize, n: usize) -> DualityReport {
    let mut violations = Vec::new();
    for ((i, j), beta) in table.entries() {
        let dual_i = m as isize - n as isize - i as isize;
        let dual_j = m as isize - j as isize;
        let dual_beta =
            if dual_i < 0 || dual_j < 0 { 0 } else { table.get(dual_i as usize, dual_j as usize) };
        if dual_beta != beta {
            violations.push(DualityViolation { i, j, beta, dual_i, dual_j, dual_beta });
        }
    }
    DualityReport { holds: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_table() -> BigradedBettiTable {
        let mut t = BigradedBettiTable::new(4, Some(2));
        t.add(0, 0, 1);
        t.add(1, 2, 2);
        t.add(2, 4, 1);
        t
    }

    #[test]
    fn ordinary_betti_of_square() {
        let b = ordinary_betti(&square_table());
        assert_eq!(b.b, BTreeMap::from([(0, 1), (3, 2), (6, 1)]));
        assert_eq!(b.total_dim, Some(6));
    }

    #[test]
    fn unit_table_has_b0() {
        let mut t = BigradedBettiTable::new(3, None);
        t.add(0, 0, 1);
        assert_eq!(ordinary_betti(&t).b, BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn duality_of_square() {
        assert!(duality_check(&square_table(), 4, 2).holds);
    }

    #[test]
    fn duality_flags_perturbation() {
        let mut t = square_table();
        t.add(0, 0, 1);
        let r = duality_check(&t, 4, 2);
        assert!(!r.holds);
        assert_eq!(r.violations.len(), 2);
        assert_eq!((r.violations[0].i, r.violations[0].j, r.violations[0].beta), (0, 0, 2));
    }

    #[test]
    fn json_round_trip_sorted_by_row() {
        let t = square_table().with_engine("hochster");
        let text = t.to_json();
        assert!(text.find("\"j\":0").unwrap() < text.find("\"j\":2").unwrap());
        let back = BigradedBettiTable::from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.engine.as_deref(), Some("hochster"));
    }

    #[test]
    fn differences_cover_both_sides() {
        let a = square_table();
        let mut b = square_table();
        b.set(1, 2, 0);
        b.add(1, 3, 4);
        assert_eq!(table_differences(&a, &b), vec![(1, 2, 2, 0), (1, 3, 0, 4)]);
        assert!(table_differences(&a, &a).is_empty());
    }

    #[test]
    fn text_layout() {
        let text = square_table().render_text();
        assert!(text.contains("l=1"));
        assert!(text.contains("beta^{0,0} = 1, beta^{-2,8} = 1"));
    }
}
