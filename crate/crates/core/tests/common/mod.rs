//! Shared helpers for the integration tests: type enumeration, seeded random
//! complexes and a brute-force Betti oracle that shares no code with the
//! library engines.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gtp_core::{Face, SimplicialComplex, VertexId};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every type `(k; n_1 >= ... >= n_r)` with `m = sum n_i + r + k <= max_m`,
/// except the segments `(k; 1)`.
pub fn gtp_types(max_m: usize) -> Vec<(usize, Vec<usize>)> {
    fn dims(budget: usize, largest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for n in 1..=largest {
            if n < budget {
                prefix.push(n);
                dims(budget - n - 1, n, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut all = Vec::new();
    dims(max_m, max_m, &mut Vec::new(), &mut all);
    let mut out = Vec::new();
    for d in all {
        if d == [1] {
            continue;
        }
        let m0: usize = d.iter().sum::<usize>() + d.len();
        for k in 0..=max_m - m0 {
            out.push((k, d.clone()));
        }
    }
    out.sort_by_key(|(k, d)| (d.iter().sum::<usize>() + d.len() + k, d.clone(), *k));
    out
}

/// Random facet set on `1..=m` with `m` in `3..=max_m`, normalized to an
/// antichain by the constructor. Ghost vertices can occur.
pub fn random_complex(seed: u64, max_m: usize) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(3..=max_m);
    let count = rng.gen_range(1..=2 * m);
    let mut faces = Vec::with_capacity(count);
    for _ in 0..count {
        let size = rng.gen_range(1..m);
        let mut vs: Vec<VertexId> = (1..=m as VertexId).collect();
        for i in 0..size {
            let j = rng.gen_range(i..vs.len());
            vs.swap(i, j);
        }
        vs.truncate(size);
        faces.push(Face::new(vs).unwrap());
    }
    SimplicialComplex::new(1..=m as VertexId, faces).unwrap()
}

pub fn faces_of(facets: &[Vec<VertexId>], subset: &[VertexId]) -> BTreeMap<usize, Vec<Vec<VertexId>>> {
    let mut seen = std::collections::BTreeSet::new();
    for f in facets {
        let inside: Vec<VertexId> = f.iter().copied().filter(|v| subset.contains(v)).collect();
        for bits in 1u64..(1 << inside.len()) {
            let face: Vec<VertexId> =
                inside.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &v)| v).collect();
            seen.insert(face);
        }
    }
    let mut by_size: BTreeMap<usize, Vec<Vec<VertexId>>> = BTreeMap::new();
    by_size.entry(0).or_default().push(Vec::new());
    for f in seen {
        by_size.entry(f.len()).or_default().push(f);
    }
    by_size
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                let v = (&a[rank][c] * &a[r][cc] - &a[r][c] * &a[rank][cc]) / &prev;
                a[r][cc] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].abs();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Reduced rational Betti numbers of the full subcomplex on `subset`,
/// indexed by dimension `-1, 0, 1, ...` (offset by one).
pub fn brute_reduced_betti(facets: &[Vec<VertexId>], subset: &[VertexId]) -> Vec<usize> {
    let faces = faces_of(facets, subset);
    let top = *faces.keys().max().unwrap();
    // boundary rank from size s to size s-1
    let mut ranks = vec![0usize; top + 2];
    for s in 1..=top {
        let lower = &faces[&(s - 1)];
        let index: BTreeMap<&Vec<VertexId>, usize> = lower.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut mat = vec![vec![BigInt::zero(); faces[&s].len()]; lower.len()];
        for (col, f) in faces[&s].iter().enumerate() {
            for drop in 0..f.len() {
                let mut g = f.clone();
                g.remove(drop);
                mat[index[&g]][col] = BigInt::from(if drop % 2 == 0 { 1 } else { -1 });
            }
        }
        ranks[s] = bareiss_rank(mat);
    }
    (0..=top).map(|s| faces[&s].len() - ranks[s] - ranks[s + 1]).collect()
}

/// Bigraded Betti numbers by summing reduced cohomology of every full
/// subcomplex, `(i, j) -> beta^{-i, 2j}`.
pub fn brute_bigraded(k: &SimplicialComplex) -> BTreeMap<(usize, usize), u64> {
    let facets: Vec<Vec<VertexId>> = k.facets().iter().map(|f| f.vertices().to_vec()).collect();
    let ground = k.ground();
    let mut out = BTreeMap::new();
    for bits in 0u64..(1 << ground.len()) {
        let subset: Vec<VertexId> =
            ground.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &v)| v).collect();
        let j = subset.len();
        for (idx, &b) in brute_reduced_betti(&facets, &subset).iter().enumerate() {
            if b == 0 {
                continue;
            }
            // dimension p = idx - 1, i = j - p - 1
            let p = idx as isize - 1;
            let i = (j as isize - p - 1) as usize;
            *out.entry((i, j)).or_insert(0) += b as u64;
        }
    }
    out
}

/// The 6-vertex real projective plane.
pub fn rp2() -> SimplicialComplex {
    SimplicialComplex::from_facet_lists(&[
        &[1, 2, 3],
        &[1, 3, 4],
        &[1, 4, 5],
        &[1, 5, 6],
        &[1, 2, 6],
        &[2, 3, 5],
        &[3, 4, 6],
        &[2, 4, 5],
        &[3, 5, 6],
        &[2, 4, 6],
    ])
    .unwrap()
}
