mod common;

use common::{brute_bigraded, brute_reduced_betti, gtp_types, random_complex, rp2};
use gtp_core::constructions::{boundary_simplex, cyclic_boundary, join, simplex};
use gtp_core::hochster::{hochster_torsion_free, torsion_witnesses};
use gtp_core::homology::{boundary_matrices, is_torsion_free};
use gtp_core::table::table_differences;
use gtp_core::*;
use proptest::prelude::*;

fn assert_matches_oracle(k: &SimplicialComplex, label: &str) {
    let table = bigraded_betti(k, Coefficients::Rational).unwrap();
    let oracle = brute_bigraded(k);
    let got: Vec<_> = table.entries().filter(|(_, b)| *b > 0).collect();
    let want: Vec<_> = oracle.into_iter().collect();
    assert_eq!(got, want, "{label}");
}

#[test]
fn small_gtp_tables_match_brute_force() {
    for (k, dims) in gtp_types(8) {
        let spec = GtpSpec::new(k, dims.clone()).unwrap();
        assert_matches_oracle(&build_gtp(&spec).unwrap(), &format!("({k};{dims:?})"));
    }
}

#[test]
fn random_complexes_match_brute_force() {
    for seed in 0..40 {
        assert_matches_oracle(&random_complex(seed, 7), &format!("seed {seed}"));
    }
}

#[test]
fn cyclic_and_joins_match_brute_force() {
    assert_matches_oracle(&cyclic_boundary(7, 4).unwrap(), "C(7,4)");
    let j = join(&boundary_simplex(2).unwrap(), &cyclic_boundary(5, 2).unwrap());
    assert_matches_oracle(&j, "triangle * pentagon");
}

#[test]
fn simplex_has_trivial_table() {
    let t = bigraded_betti(&simplex(4).unwrap(), Coefficients::Rational).unwrap();
    assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1)]);
}

#[test]
fn projective_plane_has_two_torsion() {
    let k = rp2();
    let h = reduced_homology(&k, Coefficients::Integer).unwrap();
    assert_eq!(h.torsion.get(&1), Some(&vec![2]));
    assert_eq!(h.rank(1), 0);
    assert!(!is_torsion_free(&k).unwrap());
    assert!(!hochster_torsion_free(&k).unwrap());
    let witnesses = torsion_witnesses(&k, &HochsterOptions::default()).unwrap();
    assert!(witnesses.contains(&(vec![1, 2, 3, 4, 5, 6], 1, vec![2])));
}

#[test]
fn rational_and_integer_tables_agree_without_torsion() {
    for (k, dims) in gtp_types(8).into_iter().step_by(5) {
        let c = build_gtp(&GtpSpec::new(k, dims).unwrap()).unwrap();
        let q = bigraded_betti(&c, Coefficients::Rational).unwrap();
        let z = bigraded_betti(&c, Coefficients::Integer).unwrap();
        assert!(table_differences(&q, &z).is_empty());
        assert_eq!(z.torsion, Some(false));
    }
}

#[test]
fn thread_counts_give_identical_tables() {
    let c = build_gtp(&GtpSpec::new(2, vec![3, 2]).unwrap()).unwrap();
    let base = bigraded_betti_with(&c, &HochsterOptions { threads: Some(1), ..Default::default() }).unwrap();
    for threads in [None, Some(2), Some(3)] {
        let t = bigraded_betti_with(&c, &HochsterOptions { threads, ..Default::default() }).unwrap();
        assert_eq!(t.to_json(), base.to_json());
    }
}

#[test]
fn vertex_bound_is_enforced() {
    let c = build_gtp(&GtpSpec::new(3, vec![2, 2]).unwrap()).unwrap();
    let opts = HochsterOptions { max_vertices: 8, ..Default::default() };
    assert!(bigraded_betti_with(&c, &opts).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hochster_equals_oracle(seed in any::<u64>()) {
        let k = random_complex(seed, 6);
        let table = bigraded_betti(&k, Coefficients::Rational).unwrap();
        let got: Vec<_> = table.entries().filter(|(_, b)| *b > 0).collect();
        let want: Vec<_> = brute_bigraded(&k).into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn boundary_squares_to_zero(seed in any::<u64>()) {
        let k = random_complex(seed, 7);
        prop_assert!(boundary_matrices(&k).unwrap().squares_to_zero());
    }

    #[test]
    fn euler_characteristic_matches_f_vector(seed in any::<u64>()) {
        let k = random_complex(seed, 7);
        let h = reduced_homology(&k, Coefficients::Rational).unwrap();
        prop_assert_eq!(h.euler_characteristic(), k.reduced_euler_characteristic().unwrap());
    }

    #[test]
    fn reduced_ranks_match_oracle(seed in any::<u64>()) {
        let k = random_complex(seed, 7);
        let facets: Vec<Vec<VertexId>> = k.facets().iter().map(|f| f.vertices().to_vec()).collect();
        let want = brute_reduced_betti(&facets, k.ground());
        let h = reduced_homology(&k, Coefficients::Rational).unwrap();
        for (idx, &b) in want.iter().enumerate() {
            prop_assert_eq!(h.rank(idx as isize - 1), b);
        }
    }

    #[test]
    fn table_json_round_trips(seed in any::<u64>()) {
        let k = random_complex(seed, 6);
        let t = bigraded_betti(&k, Coefficients::Integer).unwrap();
        let back = BigradedBettiTable::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), t.to_json());
    }
}
