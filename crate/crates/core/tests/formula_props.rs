mod common;

use std::collections::BTreeMap;

use common::gtp_types;
use gtp_core::formulas::*;
use gtp_core::hochster::nontrivial_summands;
use gtp_core::table::ordinary_betti;
use gtp_core::*;
use proptest::prelude::*;

fn nonzero(t: &BigradedBettiTable) -> BTreeMap<(usize, usize), u64> {
    t.entries().filter(|(_, b)| *b > 0).collect()
}

fn c(n: i64, r: i64) -> i128 {
    binom(n, r)
}

/// Two-factor table written out row by row: rows `n_1` and `n_2` from the
/// factor boundaries, row 1 and its dual, and the two corners.
fn two_factor_table(k: usize, n1: usize, n2: usize) -> BTreeMap<(usize, usize), u64> {
    let d = n1 + n2;
    let m = d + 2 + k;
    let top = m - d;
    let ki = k as i64;
    let mut out = BTreeMap::new();
    let mut put = |l: usize, i: usize, v: i128| {
        if v != 0 {
            *out.entry((i, i + l)).or_insert(0) += v as u64;
        }
    };
    put(0, 0, 1);
    put(d, top, 1);
    for i in 1..top {
        let ii = i as i64;
        put(1, i, ii as i128 * c(ki + 2, ii + 1) - c(ki, ii - 1));
        let dual = (top - i) as i64;
        put(d - 1, i, dual as i128 * c(ki + 2, dual + 1) - c(ki, dual - 1));
        if n1 == n2 {
            put(n1, i, 2 * c(ki, ii - 1));
        } else {
            put(n1, i, c(ki, ii - 1));
            put(n2, i, c(ki, ii - 1));
        }
    }
    out
}

#[test]
fn two_factor_rows_match_general_evaluator() {
    for n1 in 2..=6 {
        for n2 in 2..=n1 {
            for k in 0..=6 {
                let spec = GtpSpec::new(k, vec![n1, n2]).unwrap();
                let t = gtp_formula_table(&spec).unwrap();
                assert_eq!(nonzero(&t.table), two_factor_table(k, n1, n2), "({k};{n1},{n2})");
            }
        }
    }
}

#[test]
fn truncation_formula_is_the_single_factor_case() {
    for n in 3..=8 {
        for k in 0..=6 {
            let a = truncation_formula_table(k, n).unwrap();
            let b = gtp_formula_table(&GtpSpec::new(k, vec![n]).unwrap()).unwrap();
            assert_eq!(nonzero(&a.table), nonzero(&b.table), "k={k} n={n}");
            assert_eq!(a.provenance, FormulaProvenance::Truncation);
        }
    }
}

#[test]
fn formula_tables_determine_the_type() {
    let specs: Vec<_> = gtp_types(12)
        .into_iter()
        .map(|(k, dims)| GtpSpec::new(k, dims).unwrap())
        .filter(|s| s.d() >= 3)
        .collect();
    let tables: Vec<_> = specs.iter().map(|s| nonzero(&gtp_formula_table(s).unwrap().table)).collect();
    let mut coincident = 0;
    for a in 0..specs.len() {
        for b in a + 1..specs.len() {
            if same_polytope(&specs[a], &specs[b]) {
                assert_eq!(tables[a], tables[b], "{:?} vs {:?}", specs[a], specs[b]);
                coincident += 1;
            } else {
                assert_ne!(tables[a], tables[b], "{:?} vs {:?}", specs[a], specs[b]);
            }
        }
    }
    assert!(coincident > 0);
}

/// `Δ^n × Δ^1` is a vertex truncation of `Δ^{n+1}`, so the types
/// `(k; n, 1)` and `(k+1; n+1)` name the same polytope.
fn same_polytope(a: &GtpSpec, b: &GtpSpec) -> bool {
    let prism = |s: &GtpSpec, t: &GtpSpec| {
        s.dims().len() == 2 && s.dims()[1] == 1 && t.dims() == [s.dims()[0] + 1] && t.k() == s.k() + 1
    };
    prism(a, b) || prism(b, a)
}

#[test]
fn low_dimensions_are_rejected() {
    assert!(gtp_formula_table(&GtpSpec::new(2, vec![1, 1]).unwrap()).is_err());
    assert!(gtp_formula_table(&GtpSpec::new(2, vec![2]).unwrap()).is_err());
    assert!(truncation_formula_table(1, 2).is_err());
}

#[test]
fn corners_and_top_class() {
    for (k, dims) in gtp_types(10) {
        let spec = GtpSpec::new(k, dims.clone()).unwrap();
        let t = bigraded_betti(&build_gtp(&spec).unwrap(), Coefficients::Rational).unwrap();
        let (m, d) = (spec.m(), spec.d());
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.get(m - d, m), 1, "({k};{dims:?})");
        assert_eq!(ordinary_betti(&t).get(m + d), 1);
    }
}

#[test]
fn two_factor_full_subcomplexes_vanish_outside_allowed_degrees() {
    for (k, dims) in gtp_types(12).into_iter().filter(|(_, d)| d.len() == 2) {
        let spec = GtpSpec::new(k, dims.clone()).unwrap();
        let c = build_gtp(&spec).unwrap();
        let m = spec.m();
        let allowed = [0, dims[0] as isize - 1, dims[1] as isize - 1, spec.d() as isize - 2];
        for s in nontrivial_summands(&c).unwrap() {
            if s.subset.is_empty() || s.subset.len() == m {
                continue;
            }
            for deg in s.ranks.keys() {
                assert!(allowed.contains(deg), "({k};{dims:?}) {:?} degree {deg}", s.subset);
            }
        }
    }
}

#[test]
fn binomial_conventions() {
    assert_eq!(binom(5, 2), 10);
    assert_eq!(binom(5, -1), 0);
    assert_eq!(binom(5, 6), 0);
    assert_eq!(binom(0, 0), 1);
}

#[test]
fn mcgavran_examples() {
    // one truncation of a 3-simplex: m + d = 5 + 3, a single S^3 x S^5
    let one = mcgavran_decomposition(1, 3).unwrap();
    assert_eq!(one.entries(), &[SphereProduct { p: 3, q: 5, mult: 1 }]);
    assert!(mcgavran_decomposition(0, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn recurrence_follows_seeded_chains(seed in any::<u64>(), pick in 0usize..6) {
        let dims = [vec![3], vec![4], vec![2, 1], vec![2, 2], vec![1, 1, 1], vec![3, 2]][pick].clone();
        let spec0 = GtpSpec::with_strategy(0, dims.clone(), StackingStrategy::SeededRandom(seed)).unwrap();
        let mut k = build_gtp(&spec0).unwrap();
        let d = spec0.d();
        let mut prev = bigraded_betti(&k, Coefficients::Rational).unwrap();
        while k.num_vertices() < 11 {
            let facet = k.facets()[(seed as usize) % k.facets().len()].clone();
            k = gtp_core::constructions::stack(&k, &facet).unwrap();
            let next = bigraded_betti(&k, Coefficients::Rational).unwrap();
            let row = truncation_recurrence(&prev, prev.m, d).unwrap();
            for (&i, &b) in &row {
                prop_assert_eq!(next.get(i, i + 1), b);
            }
            let max_i = next.entries().filter(|((i, j), b)| *b > 0 && j - i == 1).map(|((i, _), _)| i).max();
            prop_assert_eq!(max_i, row.iter().filter(|(_, b)| **b > 0).map(|(i, _)| *i).max());
            prev = next;
        }
    }

    #[test]
    fn seeded_tables_match_formula(seed in any::<u64>(), k in 0usize..4, pick in 0usize..5) {
        let dims = [vec![3], vec![2, 1], vec![2, 2], vec![1, 1, 1], vec![3, 1]][pick].clone();
        let spec = GtpSpec::with_strategy(k, dims, StackingStrategy::SeededRandom(seed)).unwrap();
        let t = bigraded_betti(&build_gtp(&spec).unwrap(), Coefficients::Rational).unwrap();
        prop_assert_eq!(nonzero(&t), nonzero(&gtp_formula_table(&spec).unwrap().table));
    }
}
