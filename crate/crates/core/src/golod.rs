//! Ring-level Golodness: products in the Hochster decomposition of Tor,
//! computed on cochain representatives.
//!
//! For disjoint `I`, `J` the product `H̃^p(K_I) ⊗ H̃^q(K_J) → H̃^{p+q+1}(K_{I∪J})`
//! sends cocycles `α`, `β` to the cochain
//! `(αβ)(σ) = ε(σ∩I, σ∩J) α(σ∩I) β(σ∩J)` on faces `σ` of `K_{I∪J}` with
//! `p + q + 2` vertices, where `ε` is the sign of the permutation sorting
//! the concatenation of the two ascending vertex lists. A product is
//! nontrivial when this cochain is not a coboundary.
//!
//! Only ring multiplication is examined; higher Massey products are not,
//! and every report says so.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::chordal::one_skeleton_chordal;
use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::hochster::{summands_of_lattice, with_threads, HochsterOptions, HochsterSummand};
use crate::homology::{class_basis, coboundary_echelon, cochain_faces, subset_homology, Coefficients, Workspace};
use crate::lattice::{bits, FaceLattice, Mask};
use crate::linalg::{Coeff, Echelon, Overflow, SparseVec};

pub const MASSEY_CAVEAT: &str = "massey-untested";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GolodVerdict {
    RingGolod,
    RingNonGolod,
    MinimallyNonGolod,
    NotMinimallyNonGolod,
}

impl GolodVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            GolodVerdict::RingGolod => "ring-golod",
            GolodVerdict::RingNonGolod => "ring-non-golod",
            GolodVerdict::MinimallyNonGolod => "minimally-non-golod",
            GolodVerdict::NotMinimallyNonGolod => "not-minimally-non-golod",
        }
    }
}

/// A nontrivial product: classes `a` of `H̃^p(K_I)` and `b` of `H̃^q(K_J)`
/// (indices into the chosen bases) multiply to a nonzero class of
/// `H̃^{p+q+1}(K_{I∪J})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness {
    #[serde(rename = "I")]
    pub i: Vec<VertexId>,
    #[serde(rename = "J")]
    pub j: Vec<VertexId>,
    pub p: isize,
    pub q: isize,
    pub classes: (usize, usize),
    pub target_degree: isize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefilterReport {
    pub chordal: bool,
    pub induced_cycle: Option<Vec<VertexId>>,
    /// Whether the product on the cycle was confirmed nonzero by the engine.
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighbourlyCertificate {
    pub n: usize,
    pub subset_size: usize,
    pub even: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailingVertex {
    pub vertex: VertexId,
    pub witness: Option<ProductWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GolodReport {
    pub verdict: GolodVerdict,
    pub ring_level: bool,
    pub witness: Option<ProductWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefilter: Option<PrefilterReport>,
    pub caveat: &'static str,
    /// Minimality runs: vertices whose deletion is still non-golod.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failing_vertices: Vec<FailingVertex>,
    /// Minimality runs where `K` itself is ring-golod.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_golod: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighbourly: Option<NeighbourlyCertificate>,
}

impl GolodReport {
    fn new(verdict: GolodVerdict, witness: Option<ProductWitness>, prefilter: Option<PrefilterReport>) -> Self {
        GolodReport {
            verdict,
            ring_level: true,
            witness,
            prefilter,
            caveat: MASSEY_CAVEAT,
            failing_vertices: Vec::new(),
            self_golod: None,
            neighbourly: None,
        }
    }

    pub fn is_golod(&self) -> bool {
        self.verdict == GolodVerdict::RingGolod
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GolodOptions {
    pub prefilter: bool,
    pub max_vertices: usize,
    pub threads: Option<usize>,
}

impl Default for GolodOptions {
    fn default() -> Self {
        GolodOptions { prefilter: true, max_vertices: crate::hochster::DEFAULT_MAX_VERTICES, threads: None }
    }
}

impl GolodOptions {
    fn hochster(&self) -> HochsterOptions {
        HochsterOptions { coeff: Coefficients::Rational, max_vertices: self.max_vertices, threads: self.threads }
    }
}

/// Cocycle representatives of one cohomology group of a full subcomplex.
struct Classes<T> {
    /// Lattice ids of the cochain faces, increasing.
    faces: Vec<u32>,
    reps: Vec<SparseVec<T>>,
}

impl<T: Coeff> Classes<T> {
    fn compute(lat: &FaceLattice, mask: Mask, p: isize) -> std::result::Result<Self, Overflow> {
        Ok(match class_basis::<T>(lat, mask, p)? {
            Some((faces, reps, _)) => Classes { faces, reps },
            None => Classes { faces: Vec::new(), reps: Vec::new() },
        })
    }

    fn dense(&self, idx: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.faces.len()];
        for (c, x) in &self.reps[idx] {
            out[*c as usize] = x.clone();
        }
        out
    }

    fn coordinate<'a>(&self, lat: &FaceLattice, dense: &'a [T], face: Mask) -> Option<&'a T> {
        let id = lat.id_of(face)?;
        self.faces.binary_search(&id).ok().map(|i| &dense[i])
    }
}

/// `+1` or `-1` by the parity of pairs `l ∈ L`, `m ∈ M` with `l > m`.
fn shuffle_sign(l: Mask, m: Mask) -> i64 {
    let inversions: u32 = bits(m).map(|b| if b >= 63 { 0 } else { (l >> (b + 1)).count_ones() }).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The product cochain over `target` (faces of `K_{I∪J}` of size
/// `p + q + 2`).
#[allow(clippy::too_many_arguments)]
fn product_cochain<T: Coeff>(
    lat: &FaceLattice,
    i_mask: Mask,
    target: &[u32],
    p: isize,
    a: &Classes<T>,
    alpha: &[T],
    b: &Classes<T>,
    beta: &[T],
) -> std::result::Result<SparseVec<T>, Overflow> {
    let mut out = Vec::new();
    for (idx, &sigma) in target.iter().enumerate() {
        let face = lat.face_mask(sigma);
        let l = face & i_mask;
        let m = face & !i_mask;
        if l.count_ones() as isize != p + 1 {
            continue;
        }
        let (Some(x), Some(y)) = (a.coordinate(lat, alpha, l), b.coordinate(lat, beta, m)) else { continue };
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let mut v = x.mul(y).ok_or(Overflow)?;
        if shuffle_sign(l, m) < 0 {
            v = v.neg().ok_or(Overflow)?;
        }
        out.push((idx as u32, v));
    }
    Ok(out)
}

/// The map `H̃^p(K_I) ⊗ H̃^q(K_J) → H̃^{p+q+1}(K_{I∪J})` on chosen bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupProductMap {
    pub p: isize,
    pub q: isize,
    pub target_degree: isize,
    pub source_ranks: (usize, usize),
    pub rank: usize,
    /// Basis pairs `(a, b)` whose products extend the span of the earlier
    /// ones modulo coboundaries.
    pub independent_products: Vec<(usize, usize)>,
}

fn product_rank<T: Coeff>(
    lat: &FaceLattice,
    i_mask: Mask,
    j_mask: Mask,
    p: isize,
    q: isize,
    first_only: bool,
) -> std::result::Result<Vec<(usize, usize)>, Overflow> {
    let u = i_mask | j_mask;
    let t = p + q + 1;
    let a = Classes::<T>::compute(lat, i_mask, p)?;
    let b = Classes::<T>::compute(lat, j_mask, q)?;
    if a.reps.is_empty() || b.reps.is_empty() {
        return Ok(Vec::new());
    }
    let target = cochain_faces(lat, u, (t + 1) as usize);
    if target.is_empty() {
        return Ok(Vec::new());
    }
    let mut image: Echelon<T> = coboundary_echelon(lat, u, t)?;
    let betas: Vec<Vec<T>> = (0..b.reps.len()).map(|y| b.dense(y)).collect();
    let mut found = Vec::new();
    for x in 0..a.reps.len() {
        let alpha = a.dense(x);
        for (y, beta) in betas.iter().enumerate() {
            let v = product_cochain(lat, i_mask, &target, p, &a, &alpha, &b, beta)?;
            if image.insert(v)? {
                found.push((x, y));
                if first_only {
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}

fn product_rank_any(lat: &FaceLattice, i_mask: Mask, j_mask: Mask, p: isize, q: isize, first_only: bool) -> Vec<(usize, usize)> {
    product_rank::<i64>(lat, i_mask, j_mask, p, q, first_only)
        .or_else(|_| product_rank::<BigInt>(lat, i_mask, j_mask, p, q, first_only))
        .expect("bigint arithmetic does not overflow")
}

fn disjoint_masks(lat: &FaceLattice, i: &[VertexId], j: &[VertexId]) -> Result<(Mask, Mask)> {
    let i_mask = lat.mask_of(i)?;
    let j_mask = lat.mask_of(j)?;
    if i_mask & j_mask != 0 {
        return Err(Error::InvalidArgument("product subsets must be disjoint".into()));
    }
    Ok((i_mask, j_mask))
}

/// Product maps for every `(p, q)` where both factors are nonzero.
pub fn cup_product_map(k: &SimplicialComplex, i: &[VertexId], j: &[VertexId]) -> Result<Vec<CupProductMap>> {
    let lat = FaceLattice::new(k)?;
    let (i_mask, j_mask) = disjoint_masks(&lat, i, j)?;
    let mut ws = Workspace::new(&lat);
    let hi = subset_homology(&lat, i_mask, Coefficients::Rational, &mut ws);
    let hj = subset_homology(&lat, j_mask, Coefficients::Rational, &mut ws);
    let mut out = Vec::new();
    for (p, rp) in hi.nonzero() {
        for (q, rq) in hj.nonzero() {
            let pairs = product_rank_any(&lat, i_mask, j_mask, p, q, false);
            out.push(CupProductMap {
                p,
                q,
                target_degree: p + q + 1,
                source_ranks: (rp, rq),
                rank: pairs.len(),
                independent_products: pairs,
            });
        }
    }
    Ok(out)
}

/// The product cochain of basis classes `a` and `b`, as `(faces, values)`
/// over the `(p + q + 1)`-faces of `K_{I∪J}`.
pub fn cup_product_cochain(
    k: &SimplicialComplex,
    i: &[VertexId],
    j: &[VertexId],
    (p, a): (isize, usize),
    (q, b): (isize, usize),
) -> Result<(Vec<Face>, Vec<BigInt>)> {
    let lat = FaceLattice::new(k)?;
    let (i_mask, j_mask) = disjoint_masks(&lat, i, j)?;
    let ca = Classes::<BigInt>::compute(&lat, i_mask, p).expect("bigint");
    let cb = Classes::<BigInt>::compute(&lat, j_mask, q).expect("bigint");
    if a >= ca.reps.len() || b >= cb.reps.len() {
        return Err(Error::InvalidArgument("class index out of range".into()));
    }
    let target = cochain_faces(&lat, i_mask | j_mask, (p + q + 2) as usize);
    let v = product_cochain(&lat, i_mask, &target, p, &ca, &ca.dense(a), &cb, &cb.dense(b)).expect("bigint");
    let mut values = vec![BigInt::from(0); target.len()];
    for (c, x) in v {
        values[c as usize] = x;
    }
    let faces = target.iter().map(|&id| lat.face_of_mask(lat.face_mask(id))).collect();
    Ok((faces, values))
}

#[derive(Clone, Copy, Debug)]
struct Query {
    a: usize,
    b: usize,
    p: isize,
    q: isize,
}

/// Scans every product between cohomologically nontrivial, disjoint,
/// nonempty subsets whose target group is nonzero, and returns the first
/// nontrivial one in (target, I, J, p, q) order.
fn find_nontrivial_product(
    lat: &FaceLattice,
    summands: &[HochsterSummand],
    skip_target: Option<Mask>,
    threads: Option<usize>,
) -> Option<ProductWitness> {
    let index: HashMap<Mask, &BTreeMap<isize, usize>> = summands.iter().map(|s| (s.mask, &s.ranks)).collect();
    let mut groups: BTreeMap<(Mask, isize), Vec<Query>> = BTreeMap::new();
    let nonempty: Vec<usize> = (0..summands.len()).filter(|&x| summands[x].mask != 0).collect();
    for (pos, &a) in nonempty.iter().enumerate() {
        for &b in &nonempty[pos + 1..] {
            let (ma, mb) = (summands[a].mask, summands[b].mask);
            if ma & mb != 0 {
                continue;
            }
            if skip_target == Some(ma | mb) {
                continue;
            }
            let Some(target) = index.get(&(ma | mb)) else { continue };
            for &p in summands[a].ranks.keys() {
                for &q in summands[b].ranks.keys() {
                    if target.contains_key(&(p + q + 1)) {
                        groups.entry((ma | mb, p + q + 1)).or_default().push(Query { a, b, p, q });
                    }
                }
            }
        }
    }
    let groups: Vec<_> = groups.into_values().collect();
    let test = |queries: &Vec<Query>| {
        queries.iter().find_map(|query| {
            let (sa, sb) = (&summands[query.a], &summands[query.b]);
            let found = product_rank_any(lat, sa.mask, sb.mask, query.p, query.q, true);
            found.first().map(|&classes| ProductWitness {
                i: sa.subset.clone(),
                j: sb.subset.clone(),
                p: query.p,
                q: query.q,
                classes,
                target_degree: query.p + query.q + 1,
            })
        })
    };
    if threads == Some(1) {
        groups.iter().find_map(test)
    } else {
        with_threads(threads, || groups.par_iter().find_map_first(test))
    }
}

/// Fast certificate of non-Golodness: an induced cycle of length >= 4 in
/// the 1-skeleton, with the product of its two diagonal-split classes.
pub fn chordal_prefilter(k: &SimplicialComplex) -> Result<(PrefilterReport, Option<ProductWitness>)> {
    let report = one_skeleton_chordal(k);
    let Some(cycle) = report.induced_cycle.clone() else {
        return Ok((PrefilterReport { chordal: report.chordal, induced_cycle: None, confirmed: false }, None));
    };
    let lat = FaceLattice::new(k)?;
    let mut i: Vec<VertexId> = vec![cycle[0], cycle[2]];
    i.sort_unstable();
    let j: Vec<VertexId> = cycle.iter().copied().filter(|v| !i.contains(v)).sorted().collect();
    let (i_mask, j_mask) = disjoint_masks(&lat, &i, &j)?;
    let found = product_rank_any(&lat, i_mask, j_mask, 0, 0, true);
    let witness = found.first().map(|&classes| ProductWitness { i, j, p: 0, q: 0, classes, target_degree: 1 });
    let confirmed = witness.is_some();
    Ok((PrefilterReport { chordal: false, induced_cycle: Some(cycle), confirmed }, witness))
}

pub fn is_ring_golod(k: &SimplicialComplex) -> Result<GolodReport> {
    is_ring_golod_with(k, &GolodOptions::default())
}

pub fn is_ring_golod_with(k: &SimplicialComplex, opts: &GolodOptions) -> Result<GolodReport> {
    if k.num_vertices() > opts.max_vertices {
        return Err(Error::BoundExceeded { what: "ground-set size", actual: k.num_vertices(), bound: opts.max_vertices });
    }
    let mut prefilter = None;
    if opts.prefilter {
        let (report, witness) = chordal_prefilter(k)?;
        if witness.is_some() {
            return Ok(GolodReport::new(GolodVerdict::RingNonGolod, witness, Some(report)));
        }
        prefilter = Some(report);
    }
    let lat = FaceLattice::new(k)?;
    let summands = summands_of_lattice(&lat, &opts.hochster());
    let witness = find_nontrivial_product(&lat, &summands, None, opts.threads);
    let verdict = if witness.is_some() { GolodVerdict::RingNonGolod } else { GolodVerdict::RingGolod };
    Ok(GolodReport::new(verdict, witness, prefilter))
}

pub fn is_minimally_non_golod(k: &SimplicialComplex) -> Result<GolodReport> {
    is_minimally_non_golod_with(k, &GolodOptions::default())
}

/// Non-golod with every single-vertex deletion golod. All vertices are
/// examined so the report lists every failing one.
pub fn is_minimally_non_golod_with(k: &SimplicialComplex, opts: &GolodOptions) -> Result<GolodReport> {
    let own = is_ring_golod_with(k, opts)?;
    if own.is_golod() {
        let mut report = GolodReport::new(GolodVerdict::NotMinimallyNonGolod, None, own.prefilter);
        report.self_golod = Some(true);
        return Ok(report);
    }
    let mut failing = Vec::new();
    for &v in k.ground() {
        let deleted = is_ring_golod_with(&k.delete_vertex(v)?, opts)?;
        if !deleted.is_golod() {
            failing.push(FailingVertex { vertex: v, witness: deleted.witness });
        }
    }
    let verdict = if failing.is_empty() { GolodVerdict::MinimallyNonGolod } else { GolodVerdict::NotMinimallyNonGolod };
    let mut report = GolodReport::new(verdict, own.witness, own.prefilter);
    report.failing_vertices = failing;
    report.self_golod = Some(false);
    if k.is_pure() && k.dim() >= 0 {
        let n = (k.dim() + 1) as usize;
        if neighbourly_degree_argument(k, n) {
            report.neighbourly = Some(NeighbourlyCertificate { n, subset_size: n / 2, even: n.is_multiple_of(2) });
        }
    }
    Ok(report)
}

/// Whether every `⌊n/2⌋`-subset of the ground set is a face.
pub fn neighbourly_degree_argument(k: &SimplicialComplex, n: usize) -> bool {
    let size = n / 2;
    k.ground().iter().copied().combinations(size).all(|c| k.is_face(&Face::from_sorted_unchecked(c)))
}

/// A nonzero triple product of classes on pairwise disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleProductWitness {
    pub supports: [Vec<VertexId>; 3],
    pub degrees: [isize; 3],
    pub target_degree: isize,
}

/// Ring-level test of whether the cohomology of the moment-angle complex
/// can be that of a connected sum of products of two spheres: every
/// nonzero product of two positive classes must land in the top class
/// (the full ground set), and all triple products must vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingCheck {
    pub consistent: bool,
    pub product_below_top: Option<ProductWitness>,
    pub triple_product: Option<TripleProductWitness>,
}

/// First nontrivial product whose target is a proper full subcomplex.
pub fn product_below_top(k: &SimplicialComplex) -> Result<Option<ProductWitness>> {
    let lat = FaceLattice::new(k)?;
    let summands = summands_of_lattice(&lat, &HochsterOptions::default());
    Ok(find_nontrivial_product(&lat, &summands, Some(lat.full_mask()), None))
}

fn triple_nonzero<T: Coeff>(
    lat: &FaceLattice,
    masks: [Mask; 3],
    degrees: [isize; 3],
) -> std::result::Result<bool, Overflow> {
    let [ma, mb, mc] = masks;
    let [p, q, r] = degrees;
    let a = Classes::<T>::compute(lat, ma, p)?;
    let b = Classes::<T>::compute(lat, mb, q)?;
    let c = Classes::<T>::compute(lat, mc, r)?;
    if a.reps.is_empty() || b.reps.is_empty() || c.reps.is_empty() {
        return Ok(false);
    }
    let ab_faces = cochain_faces(lat, ma | mb, (p + q + 2) as usize);
    let u = ma | mb | mc;
    let t = p + q + r + 2;
    let target = cochain_faces(lat, u, (t + 1) as usize);
    if ab_faces.is_empty() || target.is_empty() {
        return Ok(false);
    }
    let image: Echelon<T> = coboundary_echelon(lat, u, t)?;
    let gammas: Vec<Vec<T>> = (0..c.reps.len()).map(|z| c.dense(z)).collect();
    for x in 0..a.reps.len() {
        let alpha = a.dense(x);
        for y in 0..b.reps.len() {
            let beta = b.dense(y);
            let ab = product_cochain(lat, ma, &ab_faces, p, &a, &alpha, &b, &beta)?;
            if ab.is_empty() {
                continue;
            }
            let ab_classes = Classes { faces: ab_faces.clone(), reps: vec![ab] };
            let ab_dense = ab_classes.dense(0);
            for gamma in &gammas {
                let v = product_cochain(lat, ma | mb, &target, p + q + 1, &ab_classes, &ab_dense, &c, gamma)?;
                let mut probe = image.clone();
                if !probe.contains(v)? {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// First nonzero triple product over pairwise disjoint nontrivial supports.
pub fn triple_product_witness(k: &SimplicialComplex) -> Result<Option<TripleProductWitness>> {
    let lat = FaceLattice::new(k)?;
    let summands = summands_of_lattice(&lat, &HochsterOptions::default());
    let index: HashMap<Mask, &BTreeMap<isize, usize>> = summands.iter().map(|s| (s.mask, &s.ranks)).collect();
    let nonempty: Vec<&HochsterSummand> = summands.iter().filter(|s| s.mask != 0).collect();
    for (x, a) in nonempty.iter().enumerate() {
        for (y, b) in nonempty.iter().enumerate().skip(x + 1) {
            if a.mask & b.mask != 0 {
                continue;
            }
            for c in &nonempty[y + 1..] {
                if c.mask & (a.mask | b.mask) != 0 {
                    continue;
                }
                let Some(target) = index.get(&(a.mask | b.mask | c.mask)) else { continue };
                for &p in a.ranks.keys() {
                    for &q in b.ranks.keys() {
                        for &r in c.ranks.keys() {
                            let t = p + q + r + 2;
                            if !target.contains_key(&t) {
                                continue;
                            }
                            let masks = [a.mask, b.mask, c.mask];
                            let degrees = [p, q, r];
                            let nonzero = triple_nonzero::<i64>(&lat, masks, degrees)
                                .or_else(|_| triple_nonzero::<BigInt>(&lat, masks, degrees))
                                .expect("bigint arithmetic does not overflow");
                            if nonzero {
                                return Ok(Some(TripleProductWitness {
                                    supports: [a.subset.clone(), b.subset.clone(), c.subset.clone()],
                                    degrees,
                                    target_degree: t,
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn connected_sum_ring_check(k: &SimplicialComplex) -> Result<SplittingCheck> {
    let product_below_top = product_below_top(k)?;
    let triple_product = triple_product_witness(k)?;
    Ok(SplittingCheck { consistent: product_below_top.is_none() && triple_product.is_none(), product_below_top, triple_product })
}
