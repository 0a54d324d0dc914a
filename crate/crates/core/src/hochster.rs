//! Bigraded Betti numbers of the face ring by summing reduced cohomology of
//! full subcomplexes over all vertex subsets.
//!
//! Subsets are bitmasks over the ground set. The mask range is cut into
//! contiguous chunks; each chunk accumulates `(i, j, rank)` contributions
//! independently and the partial tables are merged by addition, so the
//! result does not depend on the schedule.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::homology::{subset_homology, Coefficients, SubsetHomology, Workspace};
use crate::lattice::{FaceLattice, Mask};
use crate::table::BigradedBettiTable;

pub const DEFAULT_MAX_VERTICES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HochsterOptions {
    pub coeff: Coefficients,
    /// Largest accepted ground set.
    pub max_vertices: usize,
    /// `None`: ambient rayon pool; `Some(1)`: sequential; `Some(n)`: a
    /// dedicated pool of `n` threads.
    pub threads: Option<usize>,
}

impl Default for HochsterOptions {
    fn default() -> Self {
        HochsterOptions { coeff: Coefficients::Rational, max_vertices: DEFAULT_MAX_VERTICES, threads: None }
    }
}

impl HochsterOptions {
    pub fn with_coeff(coeff: Coefficients) -> Self {
        HochsterOptions { coeff, ..Default::default() }
    }
}

/// Runs `f` under the requested parallelism.
pub(crate) fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn check_bound(k: &SimplicialComplex, max_vertices: usize) -> Result<()> {
    let m = k.num_vertices();
    if m > max_vertices {
        return Err(Error::BoundExceeded { what: "ground-set size", actual: m, bound: max_vertices });
    }
    Ok(())
}

/// Splits `0..2^m` into contiguous mask ranges.
fn chunks(m: usize) -> Vec<(Mask, Mask)> {
    let total: u128 = 1u128 << m;
    let pieces: u128 = total.min(512);
    (0..pieces)
        .map(|c| ((total * c / pieces) as Mask, (total * (c + 1) / pieces) as Mask))
        .filter(|(a, b)| a < b)
        .collect()
}

/// Applies `visit` to every subset's homology, chunk by chunk, and merges
/// the per-chunk accumulators with `merge`.
fn scan_subsets<A, V, M>(lat: &FaceLattice, opts: &HochsterOptions, init: impl Fn() -> A + Sync, visit: V, merge: M) -> A
where
    A: Send,
    V: Fn(&mut A, Mask, &SubsetHomology) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    let run_chunk = |(lo, hi): (Mask, Mask)| {
        let mut ws = Workspace::new(lat);
        let mut acc = init();
        for mask in lo..hi {
            // Simplices other than the empty one are contractible.
            if mask != 0 && lat.is_face(mask) {
                continue;
            }
            let h = subset_homology(lat, mask, opts.coeff, &mut ws);
            visit(&mut acc, mask, &h);
        }
        acc
    };
    let ranges = chunks(lat.m());
    if opts.threads == Some(1) {
        ranges.into_iter().map(run_chunk).fold(init(), &merge)
    } else {
        with_threads(opts.threads, || ranges.into_par_iter().map(run_chunk).reduce(&init, &merge))
    }
}

/// `β^{-i,2j} = Σ_{|J|=j} dim H̃^{j-i-1}(K_J)` with default options.
pub fn bigraded_betti(k: &SimplicialComplex, coeff: Coefficients) -> Result<BigradedBettiTable> {
    bigraded_betti_with(k, &HochsterOptions::with_coeff(coeff))
}

pub fn bigraded_betti_with(k: &SimplicialComplex, opts: &HochsterOptions) -> Result<BigradedBettiTable> {
    check_bound(k, opts.max_vertices)?;
    let lat = FaceLattice::new(k)?;
    let (table, torsion) = scan_subsets(
        &lat,
        opts,
        || (BigradedBettiTable::new(lat.m(), None), false),
        |(table, torsion), mask, h| {
            let j = mask.count_ones() as usize;
            for (deg, rank) in h.nonzero() {
                table.add((j as isize - deg - 1) as usize, j, rank as u64);
            }
            *torsion |= h.has_torsion();
        },
        |(mut a, ta), (b, tb)| {
            a.merge(&b);
            (a, ta || tb)
        },
    );
    let mut table = table.with_engine("hochster");
    table.d = k.gtp_meta().map(|meta| meta.d());
    if opts.coeff == Coefficients::Integer {
        table.torsion = Some(torsion);
    }
    Ok(table)
}

/// A full subcomplex with nonzero reduced cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HochsterSummand {
    pub subset: Vec<VertexId>,
    /// Reduced cohomology ranks of `K_J` by degree (nonzero only).
    pub ranks: BTreeMap<isize, usize>,
    #[serde(skip)]
    pub(crate) mask: Mask,
}

impl HochsterSummand {
    /// Bidegree `(i, j)` receiving the rank in cohomological degree `deg`.
    pub fn bidegree(&self, deg: isize) -> (usize, usize) {
        let j = self.subset.len();
        ((j as isize - deg - 1) as usize, j)
    }
}

/// Every subset `J` (including `∅`) with nonzero reduced cohomology of
/// `K_J`, ordered by mask.
pub fn nontrivial_summands(k: &SimplicialComplex) -> Result<Vec<HochsterSummand>> {
    nontrivial_summands_with(k, &HochsterOptions::default())
}

pub fn nontrivial_summands_with(k: &SimplicialComplex, opts: &HochsterOptions) -> Result<Vec<HochsterSummand>> {
    check_bound(k, opts.max_vertices)?;
    let lat = FaceLattice::new(k)?;
    Ok(summands_of_lattice(&lat, opts))
}

pub(crate) fn summands_of_lattice(lat: &FaceLattice, opts: &HochsterOptions) -> Vec<HochsterSummand> {
    let mut out = scan_subsets(
        lat,
        opts,
        Vec::new,
        |acc: &mut Vec<HochsterSummand>, mask, h| {
            let ranks: BTreeMap<isize, usize> = h.nonzero().collect();
            if !ranks.is_empty() {
                acc.push(HochsterSummand { subset: lat.labels_of(mask), ranks, mask });
            }
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    );
    out.sort_by_key(|s| s.mask);
    out
}

/// True iff no full subcomplex has torsion in its integral homology.
pub fn hochster_torsion_free(k: &SimplicialComplex) -> Result<bool> {
    hochster_torsion_free_with(k, &HochsterOptions::with_coeff(Coefficients::Integer))
}

pub fn hochster_torsion_free_with(k: &SimplicialComplex, opts: &HochsterOptions) -> Result<bool> {
    let opts = HochsterOptions { coeff: Coefficients::Integer, ..*opts };
    check_bound(k, opts.max_vertices)?;
    let lat = FaceLattice::new(k)?;
    let torsion = scan_subsets(&lat, &opts, || false, |t, _, h| *t |= h.has_torsion(), |a, b| a || b);
    Ok(!torsion)
}

/// `(subset, dimension, invariant factors)` of a full subcomplex with torsion.
pub type TorsionWitness = (Vec<VertexId>, isize, Vec<u64>);

/// Full subcomplexes with torsion; used to report where torsion lives.
pub fn torsion_witnesses(k: &SimplicialComplex, opts: &HochsterOptions) -> Result<Vec<TorsionWitness>> {
    let opts = HochsterOptions { coeff: Coefficients::Integer, ..*opts };
    check_bound(k, opts.max_vertices)?;
    let lat = FaceLattice::new(k)?;
    let mut out = scan_subsets(
        &lat,
        &opts,
        Vec::new,
        |acc: &mut Vec<(Mask, isize, Vec<u64>)>, mask, h| {
            for (dim, t) in &h.torsion {
                acc.push((mask, *dim, t.clone()));
            }
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    );
    out.sort();
    Ok(out.into_iter().map(|(mask, dim, t)| (lat.labels_of(mask), dim, t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boundary_simplex, simplex};

    fn square() -> SimplicialComplex {
        SimplicialComplex::from_facet_lists(&[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap()
    }

    #[test]
    fn square_table() {
        let t = bigraded_betti(&square(), Coefficients::Rational).unwrap();
        let entries: Vec<_> = t.entries().collect();
        assert_eq!(entries, vec![((0, 0), 1), ((1, 2), 2), ((2, 4), 1)]);
    }

    #[test]
    fn simplex_has_only_unit() {
        let t = bigraded_betti(&simplex(3).unwrap(), Coefficients::Integer).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1)]);
        assert_eq!(t.torsion, Some(false));
    }

    #[test]
    fn bound_is_enforced() {
        let k = boundary_simplex(5).unwrap();
        let opts = HochsterOptions { max_vertices: 4, ..Default::default() };
        assert!(matches!(bigraded_betti_with(&k, &opts), Err(Error::BoundExceeded { .. })));
        assert!(nontrivial_summands_with(&k, &opts).is_err());
    }

    #[test]
    fn square_summands() {
        let s = nontrivial_summands(&square()).unwrap();
        let got: Vec<(Vec<VertexId>, Vec<(isize, usize)>)> =
            s.iter().map(|h| (h.subset.clone(), h.ranks.iter().map(|(a, b)| (*a, *b)).collect())).collect();
        assert_eq!(
            got,
            vec![
                (vec![], vec![(-1, 1)]),
                (vec![1, 3], vec![(0, 1)]),
                (vec![2, 4], vec![(0, 1)]),
                (vec![1, 2, 3, 4], vec![(1, 1)]),
            ]
        );
    }

    #[test]
    fn simplex_boundary_summands() {
        let s = nontrivial_summands(&boundary_simplex(3).unwrap()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].subset, vec![1, 2, 3, 4]);
        assert_eq!(s[1].ranks, BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn schedules_agree() {
        let k = square();
        let seq = bigraded_betti_with(&k, &HochsterOptions { threads: Some(1), ..Default::default() }).unwrap();
        let par = bigraded_betti_with(&k, &HochsterOptions { threads: Some(3), ..Default::default() }).unwrap();
        assert_eq!(seq, par);
    }
}
