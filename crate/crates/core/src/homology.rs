//! Reduced simplicial (co)homology over the rationals and the integers.
//!
//! Chain complexes are augmented: the empty face spans degree -1 and
//! `∂_0` sends every vertex to it. Simplices are oriented by increasing
//! label, and the face obtained by dropping the vertex at position `t`
//! carries the sign `(-1)^t`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::Result;
use crate::lattice::{FaceLattice, Mask};
use crate::linalg::{self, to_big, Coeff, Echelon, Overflow, SparseVec};

/// Coefficient ring for homology computations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    #[default]
    Rational,
    Integer,
}

impl std::str::FromStr for Coefficients {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rational" | "q" | "Q" => Ok(Coefficients::Rational),
            "integer" | "z" | "Z" => Ok(Coefficients::Integer),
            other => Err(format!("unknown coefficients '{other}' (expected rational or integer)")),
        }
    }
}

/// Sparse integer matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub columns: Vec<SparseVec<i64>>,
}

impl SparseIntMatrix {
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.columns[col].iter().find(|(r, _)| *r as usize == row).map(|(_, x)| *x).unwrap_or(0)
    }

    /// `self * other` as a dense matrix.
    pub fn compose_dense(&self, other: &SparseIntMatrix) -> Vec<Vec<i64>> {
        assert_eq!(self.ncols, other.nrows);
        let mut out = vec![vec![0i64; other.ncols]; self.nrows];
        for (j, col) in other.columns.iter().enumerate() {
            for &(k, x) in col {
                for &(i, y) in &self.columns[k as usize] {
                    out[i as usize][j] += x * y;
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        linalg::rank_rational(&self.columns, self.nrows)
    }
}

/// Augmented boundary maps of a complex.
#[derive(Clone, Debug)]
pub struct ChainBoundaryStack {
    /// `faces[p + 1]` lists the `p`-faces in increasing order, `p >= -1`.
    pub faces: Vec<Vec<Face>>,
    /// `boundaries[p]` is `∂_p` from `p`-chains to `(p-1)`-chains, `p >= 0`.
    pub boundaries: Vec<SparseIntMatrix>,
}

impl ChainBoundaryStack {
    /// `∂_p`, for `0 <= p <= dim`.
    pub fn matrix(&self, p: usize) -> &SparseIntMatrix {
        &self.boundaries[p]
    }

    pub fn squares_to_zero(&self) -> bool {
        self.boundaries.windows(2).all(|w| w[0].compose_dense(&w[1]).iter().flatten().all(|&x| x == 0))
    }
}

pub fn boundary_matrices(k: &SimplicialComplex) -> Result<ChainBoundaryStack> {
    let lat = FaceLattice::new(k)?;
    let top = lat.max_face_size();
    let faces: Vec<Vec<Face>> =
        (0..=top).map(|s| lat.ids_of_size(s).map(|id| lat.face_of_mask(lat.face_mask(id))).collect()).collect();
    let boundaries = (1..=top)
        .map(|s| {
            let lower = lat.ids_of_size(s - 1).start;
            let columns = lat
                .ids_of_size(s)
                .map(|id| {
                    let mut col: SparseVec<i64> =
                        lat.boundary(id).iter().map(|&(f, sign)| (f - lower, sign as i64)).collect();
                    col.sort_unstable_by_key(|e| e.0);
                    col
                })
                .collect();
            SparseIntMatrix { nrows: lat.ids_of_size(s - 1).len(), ncols: lat.ids_of_size(s).len(), columns }
        })
        .collect();
    Ok(ChainBoundaryStack { faces, boundaries })
}

/// Ranks and torsion of reduced homology by dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedHomologySummary {
    pub ranks: BTreeMap<isize, usize>,
    #[serde(default)]
    pub torsion: BTreeMap<isize, Vec<u64>>,
}

impl ReducedHomologySummary {
    pub fn rank(&self, dim: isize) -> usize {
        self.ranks.get(&dim).copied().unwrap_or(0)
    }

    pub fn is_acyclic(&self) -> bool {
        self.ranks.values().all(|&r| r == 0) && self.torsion.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.values().any(|t| !t.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().map(|(&d, &r)| if d.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let ranks: serde_json::Map<String, serde_json::Value> =
            self.ranks.iter().map(|(d, r)| (d.to_string(), (*r).into())).collect();
        let torsion: serde_json::Map<String, serde_json::Value> =
            self.torsion.iter().map(|(d, t)| (d.to_string(), serde_json::json!(t))).collect();
        serde_json::json!({ "ranks": ranks, "torsion": torsion })
    }
}

pub fn reduced_homology(k: &SimplicialComplex, coeff: Coefficients) -> Result<ReducedHomologySummary> {
    let lat = FaceLattice::new(k)?;
    let mut ws = Workspace::new(&lat);
    let h = subset_homology(&lat, lat.full_mask(), coeff, &mut ws);
    Ok(h.summary())
}

/// True iff no reduced homology group of `k` itself has torsion.
pub fn is_torsion_free(k: &SimplicialComplex) -> Result<bool> {
    Ok(!reduced_homology(k, Coefficients::Integer)?.has_torsion())
}

/// Per-thread scratch for repeated subset computations.
pub(crate) struct Workspace {
    local: Vec<u32>,
}

impl Workspace {
    pub(crate) fn new(lat: &FaceLattice) -> Self {
        Workspace { local: vec![u32::MAX; lat.num_faces()] }
    }
}

/// Homology of one full subcomplex. `betti[t]` is the rank in dimension `t - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SubsetHomology {
    pub betti: Vec<usize>,
    /// `(dimension, invariant factors > 1)`.
    pub torsion: Vec<(isize, Vec<u64>)>,
}

impl SubsetHomology {
    pub(crate) fn summary(&self) -> ReducedHomologySummary {
        ReducedHomologySummary {
            ranks: self.betti.iter().enumerate().map(|(t, &r)| (t as isize - 1, r)).collect(),
            torsion: self.torsion.iter().cloned().collect(),
        }
    }

    pub(crate) fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    /// Nonzero `(dimension, rank)` pairs.
    pub(crate) fn nonzero(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.betti.iter().enumerate().filter(|(_, &r)| r > 0).map(|(t, &r)| (t as isize - 1, r))
    }
}

/// Face ids of `K_mask` grouped by size; sizes run from 0 to the top size.
pub(crate) fn faces_by_size(lat: &FaceLattice, mask: Mask) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for s in 0..=lat.max_face_size() {
        let ids: Vec<u32> = lat.ids_of_size(s).filter(|&id| lat.face_mask(id) & !mask == 0).collect();
        if ids.is_empty() {
            break;
        }
        out.push(ids);
    }
    out
}

/// Rows of `∂` on faces of one size, as sparse vectors over the local
/// indices of the faces one size down.
fn boundary_row(lat: &FaceLattice, id: u32, local: &[u32]) -> SparseVec<i64> {
    let mut row: SparseVec<i64> = lat.boundary(id).iter().map(|&(f, s)| (local[f as usize], s as i64)).collect();
    row.sort_unstable_by_key(|e| e.0);
    row
}

pub(crate) fn subset_homology(lat: &FaceLattice, mask: Mask, coeff: Coefficients, ws: &mut Workspace) -> SubsetHomology {
    let by_size = faces_by_size(lat, mask);
    for ids in &by_size {
        for (i, &id) in ids.iter().enumerate() {
            ws.local[id as usize] = i as u32;
        }
    }
    let result = match coeff {
        Coefficients::Rational => SubsetHomology { betti: rational_betti(lat, &by_size, &ws.local), torsion: Vec::new() },
        Coefficients::Integer => integer_homology(lat, &by_size, &ws.local),
    };
    for ids in &by_size {
        for &id in ids {
            ws.local[id as usize] = u32::MAX;
        }
    }
    result
}

fn betti_from_ranks(by_size: &[Vec<u32>], rank: &[usize]) -> Vec<usize> {
    let top = by_size.len();
    (0..top).map(|s| by_size[s].len() - rank[s] - if s + 1 < top { rank[s + 1] } else { 0 }).collect()
}

/// Ranks of the boundary maps from the top size down. Rows whose face was
/// a pivot column one level up are skipped: those faces lead boundaries,
/// so the remaining rows span the same image.
fn rational_betti(lat: &FaceLattice, by_size: &[Vec<u32>], local: &[u32]) -> Vec<usize> {
    let top = by_size.len();
    let mut rank = vec![0usize; top];
    let mut cleared: Vec<bool> = Vec::new();
    for s in (1..top).rev() {
        let rows: Vec<SparseVec<i64>> = by_size[s]
            .iter()
            .enumerate()
            .filter(|(i, _)| !cleared.get(*i).copied().unwrap_or(false))
            .map(|(_, &id)| boundary_row(lat, id, local))
            .collect();
        let ncols = by_size[s - 1].len();
        let pivots: Vec<u32> = match echelon_pivots::<i64>(rows.iter().cloned(), ncols, true) {
            Ok((p, _)) => p,
            Err(Overflow) => echelon_pivots::<BigInt>(rows.iter().map(to_big), ncols, true).expect("bigint").0,
        };
        rank[s] = pivots.len();
        cleared = vec![false; ncols];
        for p in pivots {
            cleared[p as usize] = true;
        }
    }
    betti_from_ranks(by_size, &rank)
}

fn echelon_pivots<T: Coeff>(
    rows: impl Iterator<Item = SparseVec<T>>,
    ncols: usize,
    normalize: bool,
) -> std::result::Result<(Vec<u32>, bool), Overflow> {
    let mut e = if normalize { Echelon::new(ncols) } else { Echelon::new_integral(ncols) };
    for r in rows {
        e.insert(r)?;
    }
    Ok((e.pivot_columns().collect(), e.all_pivots_unit()))
}

/// Integer homology: unimodular echelon with clearing when every pivot is
/// a unit (then all invariant factors are 1); Smith normal form otherwise.
fn integer_homology(lat: &FaceLattice, by_size: &[Vec<u32>], local: &[u32]) -> SubsetHomology {
    let top = by_size.len();
    let mut rank = vec![0usize; top];
    let mut cleared: Vec<bool> = Vec::new();
    let mut unit_path = true;
    for s in (1..top).rev() {
        let rows = by_size[s]
            .iter()
            .enumerate()
            .filter(|(i, _)| !cleared.get(*i).copied().unwrap_or(false))
            .map(|(_, &id)| boundary_row(lat, id, local));
        let ncols = by_size[s - 1].len();
        match echelon_pivots::<i64>(rows, ncols, false) {
            Ok((pivots, true)) => {
                rank[s] = pivots.len();
                cleared = vec![false; ncols];
                for p in pivots {
                    cleared[p as usize] = true;
                }
            }
            _ => {
                unit_path = false;
                break;
            }
        }
    }
    if unit_path {
        return SubsetHomology { betti: betti_from_ranks(by_size, &rank), torsion: Vec::new() };
    }
    let mut torsion = Vec::new();
    for s in 1..top {
        let rows: Vec<SparseVec<i64>> = by_size[s].iter().map(|&id| boundary_row(lat, id, local)).collect();
        let inv = linalg::smith_invariants(&rows, by_size[s - 1].len());
        rank[s] = inv.len();
        let t = linalg::torsion_coefficients(&inv);
        if !t.is_empty() {
            // ∂ out of size-s faces: its cokernel torsion sits in dimension s - 2.
            torsion.push((s as isize - 2, t));
        }
    }
    SubsetHomology { betti: betti_from_ranks(by_size, &rank), torsion }
}

/// Cocycle representatives of `H̃^p` and a basis of the coboundaries `B^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyBasis {
    pub p: isize,
    /// The `p`-faces indexing cochain coordinates.
    pub faces: Vec<Face>,
    pub representatives: Vec<Vec<BigInt>>,
    pub coboundary_basis: Vec<Vec<BigInt>>,
    pub rank: usize,
}

pub fn cohomology_basis(k: &SimplicialComplex, p: isize) -> Result<CohomologyBasis> {
    let lat = FaceLattice::new(k)?;
    let mask = lat.full_mask();
    let faces: Vec<Face> = if p < -1 {
        Vec::new()
    } else {
        cochain_faces(&lat, mask, (p + 1) as usize).iter().map(|&id| lat.face_of_mask(lat.face_mask(id))).collect()
    };
    let n = faces.len();
    let dense = |v: &SparseVec<BigInt>| {
        let mut out = vec![BigInt::from(0); n];
        for (c, x) in v {
            out[*c as usize] = x.clone();
        }
        out
    };
    let basis = match class_basis::<i64>(&lat, mask, p) {
        Ok(b) => b.map(|(_, reps, cob)| (reps.iter().map(to_big).collect::<Vec<_>>(), cob.iter().map(to_big).collect::<Vec<_>>())),
        Err(Overflow) => class_basis::<BigInt>(&lat, mask, p).expect("bigint").map(|(_, r, c)| (r, c)),
    };
    let (reps, cob) = basis.unwrap_or_default();
    Ok(CohomologyBasis {
        p,
        faces,
        rank: reps.len(),
        representatives: reps.iter().map(dense).collect(),
        coboundary_basis: cob.iter().map(dense).collect(),
    })
}

/// Face ids of `K_mask` with `size` vertices, increasing.
pub(crate) fn cochain_faces(lat: &FaceLattice, mask: Mask, size: usize) -> Vec<u32> {
    lat.ids_of_size(size).filter(|&id| lat.face_mask(id) & !mask == 0).collect()
}

/// `δ(e_τ)` for each face `τ` of the given size in `K_mask`, as sparse
/// vectors over the faces one size up (local indices).
pub(crate) fn coboundary_images<T: Coeff>(lat: &FaceLattice, mask: Mask, size: usize) -> Vec<SparseVec<T>> {
    let lower = cochain_faces(lat, mask, size);
    let upper = cochain_faces(lat, mask, size + 1);
    let mut images: Vec<SparseVec<T>> = vec![Vec::new(); lower.len()];
    for (j, &sigma) in upper.iter().enumerate() {
        for &(tau, sign) in lat.boundary(sigma) {
            let i = lower.binary_search(&tau).expect("boundary face lies in the subcomplex");
            images[i].push((j as u32, T::from_i64(sign as i64)));
        }
    }
    images
}

/// Coboundary space `B^p` of `K_mask` as an echelon basis over the
/// `p`-faces.
pub(crate) fn coboundary_echelon<T: Coeff>(lat: &FaceLattice, mask: Mask, p: isize) -> std::result::Result<Echelon<T>, Overflow> {
    let n = if p < -1 { 0 } else { cochain_faces(lat, mask, (p + 1) as usize).len() };
    let mut e = Echelon::new(n);
    if p >= 0 {
        for img in coboundary_images::<T>(lat, mask, p as usize) {
            e.insert(img)?;
        }
    }
    Ok(e)
}

/// Cocycle representatives of `H̃^p(K_mask)`: a basis of `ker δ^p`
/// complemented against `B^p`. Returns `(faces, representatives,
/// coboundary basis)`, or `None` when there are no `p`-faces.
#[allow(clippy::type_complexity)]
pub(crate) fn class_basis<T: Coeff>(
    lat: &FaceLattice,
    mask: Mask,
    p: isize,
) -> std::result::Result<Option<(Vec<u32>, Vec<SparseVec<T>>, Vec<SparseVec<T>>)>, Overflow> {
    if p < -1 {
        return Ok(None);
    }
    let size = (p + 1) as usize;
    let faces = cochain_faces(lat, mask, size);
    if faces.is_empty() {
        return Ok(None);
    }
    let images = coboundary_images::<T>(lat, mask, size);
    let n_img = cochain_faces(lat, mask, size + 1).len() as u32;
    let mut img_echelon = Echelon::<T>::new(n_img as usize);
    let mut kernel = Vec::new();
    for (i, img) in images.into_iter().enumerate() {
        let mut aug = img;
        aug.push((n_img + i as u32, T::from_i64(1)));
        let r = img_echelon.reduce(aug)?;
        if r[0].0 < n_img {
            img_echelon.insert(r)?;
        } else {
            kernel.push(r.into_iter().map(|(c, x)| (c - n_img, x)).collect::<SparseVec<T>>());
        }
    }
    let mut b = coboundary_echelon::<T>(lat, mask, p)?;
    let cob = b.rows().to_vec();
    let mut reps = Vec::new();
    for z in kernel {
        if b.insert(z.clone())? {
            reps.push(z);
        }
    }
    Ok(Some((faces, reps, cob)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boundary_simplex, join};

    fn square() -> SimplicialComplex {
        SimplicialComplex::from_facet_lists(&[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap()
    }

    #[test]
    fn edge_boundary_matrices() {
        let k = SimplicialComplex::from_facet_lists(&[&[1, 2]]).unwrap();
        let st = boundary_matrices(&k).unwrap();
        assert_eq!(st.matrix(0).columns, vec![vec![(0, 1)], vec![(0, 1)]]);
        assert_eq!(st.matrix(1).columns, vec![vec![(0, -1), (1, 1)]]);
    }

    #[test]
    fn square_boundary_rank() {
        let st = boundary_matrices(&square()).unwrap();
        assert_eq!(st.matrix(1).rank(), 3);
        assert!(st.squares_to_zero());
    }

    #[test]
    fn tetrahedron_boundary_squares_to_zero() {
        assert!(boundary_matrices(&boundary_simplex(3).unwrap()).unwrap().squares_to_zero());
    }

    #[test]
    fn square_homology() {
        let h = reduced_homology(&square(), Coefficients::Rational).unwrap();
        assert_eq!(h.rank(1), 1);
        assert_eq!(h.rank(0), 0);
        assert_eq!(h.rank(-1), 0);
        assert!(!h.has_torsion());
    }

    #[test]
    fn empty_complex_lives_in_degree_minus_one() {
        let e = SimplicialComplex::new(Vec::<u32>::new(), Vec::new()).unwrap();
        let h = reduced_homology(&e, Coefficients::Rational).unwrap();
        assert_eq!(h.rank(-1), 1);
        let ghost = SimplicialComplex::new([1u32], Vec::new()).unwrap();
        assert_eq!(reduced_homology(&ghost, Coefficients::Integer).unwrap().rank(-1), 1);
    }

    #[test]
    fn two_sphere_from_join() {
        let k = join(&boundary_simplex(2).unwrap(), &boundary_simplex(1).unwrap());
        let h = reduced_homology(&k, Coefficients::Integer).unwrap();
        assert_eq!(h.rank(2), 1);
        assert_eq!(h.ranks.values().sum::<usize>(), 1);
    }

    #[test]
    fn cone_is_acyclic() {
        let pt = SimplicialComplex::from_facet_lists(&[&[1]]).unwrap();
        let cone = join(&square(), &pt);
        assert!(reduced_homology(&cone, Coefficients::Rational).unwrap().is_acyclic());
    }

    #[test]
    fn two_points_degree_zero_class() {
        let k = boundary_simplex(1).unwrap();
        let b = cohomology_basis(&k, 0).unwrap();
        assert_eq!(b.rank, 1);
        let rep = &b.representatives[0];
        assert_ne!(rep[0], rep[1]);
    }

    #[test]
    fn square_degree_one_class() {
        let b = cohomology_basis(&square(), 1).unwrap();
        assert_eq!(b.rank, 1);
        assert_eq!(b.coboundary_basis.len(), 3);
        let support = b.representatives[0].iter().filter(|x| **x != BigInt::from(0)).count();
        assert_eq!(support, 1);
    }

    #[test]
    fn contractible_has_no_classes() {
        let k = SimplicialComplex::from_facet_lists(&[&[1, 2, 3], &[3, 4]]).unwrap();
        for p in 0..=2 {
            assert_eq!(cohomology_basis(&k, p).unwrap().rank, 0);
        }
    }
}
