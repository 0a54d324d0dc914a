//! Constructors: simplex boundaries, joins, stacking (dual vertex
//! truncation), generalized truncation polytopes, gluing and cyclic
//! polytope boundaries.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{normalize_antichain, Face, GtpMeta, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

/// `∂Δ^n` on the labels `1..=n+1`.
pub fn boundary_simplex(n: usize) -> Result<SimplicialComplex> {
    if n == 0 {
        return Err(Error::InvalidArgument("boundary of a 0-simplex is not supported".into()));
    }
    let ground: Vec<VertexId> = (1..=n as VertexId + 1).collect();
    let facets = ground.iter().combinations(n).map(|c| Face::from_sorted_unchecked(c.into_iter().copied().collect()));
    SimplicialComplex::new(ground.clone(), facets)
}

/// The full simplex on `1..=n+1`.
pub fn simplex(n: usize) -> Result<SimplicialComplex> {
    let ground: Vec<VertexId> = (1..=n as VertexId + 1).collect();
    SimplicialComplex::new(ground.clone(), [Face::from_sorted_unchecked(ground)])
}

/// Join `K1 * K2`; the labels of `K2` are shifted past the largest label of `K1`.
pub fn join(k1: &SimplicialComplex, k2: &SimplicialComplex) -> SimplicialComplex {
    let shift = k1.max_label();
    let ground: Vec<VertexId> = k1.ground().iter().copied().chain(k2.ground().iter().map(|v| v + shift)).collect();
    let left = facets_or_empty(k1);
    let right: Vec<Vec<VertexId>> =
        facets_or_empty(k2).into_iter().map(|f| f.iter().map(|v| v + shift).collect()).collect();
    let mut facets = Vec::with_capacity(left.len() * right.len());
    for a in &left {
        for b in &right {
            let mut f = a.clone();
            f.extend_from_slice(b);
            if !f.is_empty() {
                facets.push(Face::from_sorted_unchecked(f));
            }
        }
    }
    facets.sort();
    SimplicialComplex::from_parts_unchecked(ground, facets)
}

fn facets_or_empty(k: &SimplicialComplex) -> Vec<Vec<VertexId>> {
    if k.facets().is_empty() {
        vec![Vec::new()]
    } else {
        k.facets().iter().map(|f| f.vertices().to_vec()).collect()
    }
}

/// Stellar subdivision of the facet `facet` by a new vertex (the label
/// after the current maximum): `facet` is replaced by the cone over its
/// boundary.
pub fn stack(k: &SimplicialComplex, facet: &Face) -> Result<SimplicialComplex> {
    if !k.is_facet(facet) {
        return Err(Error::NotAFacet(facet.to_string()));
    }
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    let v = k.max_label() + 1;
    let mut ground = k.ground().to_vec();
    ground.push(v);
    let mut facets: Vec<Face> = k.facets().iter().filter(|f| *f != facet).cloned().collect();
    for &x in facet.vertices() {
        let mut f: Vec<VertexId> = facet.vertices().iter().copied().filter(|&y| y != x).collect();
        f.push(v);
        facets.push(Face::from_sorted_unchecked(f));
    }
    facets.sort();
    let stacked = SimplicialComplex::from_parts_unchecked(ground, facets);
    // Stacking a gtp complex gives type (k + 1; dims) whatever the facet.
    let meta = k.gtp_meta().map(|mut meta| {
        meta.k += 1;
        meta.new_vertices.push(v);
        meta.strategy = Some("manual".into());
        meta.seed = None;
        serde_json::to_value(meta).expect("meta serializes")
    });
    Ok(stacked.with_meta(meta))
}

/// How the facet is chosen at each stacking step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StackingStrategy {
    /// Lexicographically least facet of the current complex.
    Lexicographic,
    /// Uniform choice from a ChaCha8 stream seeded with the given value.
    SeededRandom(u64),
}

impl StackingStrategy {
    fn name(&self) -> &'static str {
        match self {
            StackingStrategy::Lexicographic => "lex",
            StackingStrategy::SeededRandom(_) => "random",
        }
    }
}

/// Type `(k; n_1, ..., n_r)` of a generalized truncation polytope together
/// with the stacking policy used to realize it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtpSpec {
    k: usize,
    dims: Vec<usize>,
    strategy: StackingStrategy,
}

impl GtpSpec {
    pub fn new(k: usize, dims: Vec<usize>) -> Result<Self> {
        Self::with_strategy(k, dims, StackingStrategy::Lexicographic)
    }

    pub fn with_strategy(k: usize, dims: Vec<usize>, strategy: StackingStrategy) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("at least one simplex factor is required".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument("simplex dimensions must be positive".into()));
        }
        if dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("dimensions {dims:?} must be non-increasing")));
        }
        Ok(GtpSpec { k, dims, strategy })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn strategy(&self) -> StackingStrategy {
        self.strategy
    }

    pub fn r(&self) -> usize {
        self.dims.len()
    }

    /// Polytope dimension `n_1 + ... + n_r`.
    pub fn d(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Number of facets `d + r + k`.
    pub fn m(&self) -> usize {
        self.d() + self.r() + self.k
    }

    /// Number of one-dimensional factors.
    pub fn a(&self) -> usize {
        self.dims.iter().filter(|&&n| n == 1).count()
    }

    pub fn is_simplex(&self) -> bool {
        self.k == 0 && self.r() == 1
    }
}

/// Dual boundary complex of `vc^k(Δ^{n_1} × ... × Δ^{n_r})`: the join of
/// the factor simplex boundaries, stacked `k` times. The stacked vertices
/// are recorded in the `new_vertices` metadata.
pub fn build_gtp(spec: &GtpSpec) -> Result<SimplicialComplex> {
    if spec.r() == 1 && spec.dims[0] == 1 {
        return Err(Error::InvalidArgument("type (k; 1) is a segment and has no dual sphere of interest".into()));
    }
    let mut k = boundary_simplex(spec.dims[0])?;
    for &n in &spec.dims[1..] {
        k = join(&k, &boundary_simplex(n)?);
    }
    let mut rng = match spec.strategy {
        StackingStrategy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        StackingStrategy::Lexicographic => None,
    };
    let mut new_vertices = Vec::with_capacity(spec.k);
    for _ in 0..spec.k {
        let idx = match rng.as_mut() {
            Some(rng) => rng.gen_range(0..k.facets().len()),
            None => 0,
        };
        let facet = k.facets()[idx].clone();
        k = stack(&k, &facet)?;
        new_vertices.push(k.max_label());
    }
    let meta = GtpMeta {
        kind: "gtp".into(),
        k: spec.k,
        dims: spec.dims.clone(),
        new_vertices,
        strategy: Some(spec.strategy.name().into()),
        seed: match spec.strategy {
            StackingStrategy::SeededRandom(s) => Some(s),
            StackingStrategy::Lexicographic => None,
        },
    };
    Ok(k.with_meta(Some(serde_json::to_value(meta).expect("meta serializes"))))
}

/// Glues `K2` onto `K1` by identifying `sigma2` with `sigma1` vertex by
/// vertex in sorted order. The remaining vertices of `K2` get fresh labels
/// after the largest label of `K1`, in increasing order.
pub fn glue(k1: &SimplicialComplex, k2: &SimplicialComplex, sigma1: &Face, sigma2: &Face) -> Result<SimplicialComplex> {
    if sigma1.len() != sigma2.len() {
        return Err(Error::InvalidArgument(format!("cannot glue {sigma1} to {sigma2}: sizes differ")));
    }
    if !k1.is_face(sigma1) {
        return Err(Error::NotAFace(sigma1.to_string()));
    }
    if !k2.is_face(sigma2) {
        return Err(Error::NotAFace(sigma2.to_string()));
    }
    let mut relabel: BTreeMap<VertexId, VertexId> =
        sigma2.vertices().iter().copied().zip(sigma1.vertices().iter().copied()).collect();
    let mut next = k1.max_label() + 1;
    for &v in k2.ground() {
        relabel.entry(v).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    let ground: Vec<VertexId> = k1.ground().iter().copied().chain(relabel.values().copied()).collect();
    let mut faces: Vec<Face> = k1.facets().to_vec();
    for f in k2.facets() {
        let mapped: Vec<VertexId> = f.vertices().iter().map(|v| relabel[v]).collect();
        faces.push(Face::new(mapped)?);
    }
    SimplicialComplex::new(ground, normalize_antichain(faces))
}

/// Boundary of the cyclic polytope `C(m, n)`: the `n`-subsets of `[m]`
/// satisfying Gale's evenness condition.
pub fn cyclic_boundary(m: usize, n: usize) -> Result<SimplicialComplex> {
    if n < 2 {
        return Err(Error::InvalidArgument("cyclic polytopes need dimension n >= 2".into()));
    }
    if m <= n {
        return Err(Error::InvalidArgument(format!("C(m, n) needs m > n, got m = {m}, n = {n}")));
    }
    let ground: Vec<VertexId> = (1..=m as VertexId).collect();
    let facets = ground
        .iter()
        .copied()
        .combinations(n)
        .filter(|s| gale_evenness(s, m as VertexId))
        .map(Face::from_sorted_unchecked);
    SimplicialComplex::new(ground.clone(), facets)
}

/// Any two labels outside `subset` are separated by an even number of its
/// members.
fn gale_evenness(subset: &[VertexId], m: VertexId) -> bool {
    let outside: Vec<VertexId> = (1..=m).filter(|v| subset.binary_search(v).is_err()).collect();
    outside
        .iter()
        .tuple_combinations()
        .all(|(&i, &j)| subset.iter().filter(|&&s| i < s && s < j).count() % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(v: &[VertexId]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simplex_boundaries() {
        let b1 = boundary_simplex(1).unwrap();
        assert_eq!(b1.facets(), &[face(&[1]), face(&[2])]);
        let b2 = boundary_simplex(2).unwrap();
        assert_eq!(b2.facets(), &[face(&[1, 2]), face(&[1, 3]), face(&[2, 3])]);
        assert_eq!(boundary_simplex(3).unwrap().f_vector().unwrap(), vec![1, 4, 6, 4]);
        assert!(boundary_simplex(0).is_err());
    }

    #[test]
    fn join_of_two_point_pairs_is_square() {
        let b1 = boundary_simplex(1).unwrap();
        let sq = join(&b1, &b1);
        assert_eq!(sq.facets(), &[face(&[1, 3]), face(&[1, 4]), face(&[2, 3]), face(&[2, 4])]);
        sq.check_invariants().unwrap();
    }

    #[test]
    fn join_triangle_with_points() {
        let k = join(&boundary_simplex(2).unwrap(), &boundary_simplex(1).unwrap());
        assert_eq!(k.num_vertices(), 5);
        assert_eq!(k.facets().len(), 6);
    }

    #[test]
    fn stack_triangle_edge_gives_square() {
        let tri = boundary_simplex(2).unwrap();
        let sq = stack(&tri, &face(&[1, 2])).unwrap();
        assert_eq!(sq.facets(), &[face(&[1, 3]), face(&[1, 4]), face(&[2, 3]), face(&[2, 4])]);
    }

    #[test]
    fn stack_rejects_non_facets_and_impure() {
        let tri = boundary_simplex(2).unwrap();
        assert!(matches!(stack(&tri, &face(&[1])), Err(Error::NotAFacet(_))));
        let impure = SimplicialComplex::from_facet_lists(&[&[1, 2, 3], &[3, 4]]).unwrap();
        assert_eq!(stack(&impure, &face(&[3, 4])), Err(Error::NotPure));
    }

    #[test]
    fn stack_facet_count() {
        let t = boundary_simplex(3).unwrap();
        let s = stack(&t, &face(&[1, 2, 3])).unwrap();
        assert_eq!(s.num_vertices(), 5);
        assert_eq!(s.facets().len(), 4 - 1 + 3);
    }

    #[test]
    fn gtp_sizes() {
        let k = build_gtp(&GtpSpec::new(1, vec![4, 3, 2]).unwrap()).unwrap();
        assert_eq!(k.num_vertices(), 13);
        assert_eq!(k.dim(), 8);
        let meta = k.gtp_meta().unwrap();
        assert_eq!(meta.new_vertices, vec![13]);

        let tri = build_gtp(&GtpSpec::new(0, vec![2]).unwrap()).unwrap();
        assert_eq!(tri.facets(), boundary_simplex(2).unwrap().facets());

        let pent = build_gtp(&GtpSpec::new(2, vec![2]).unwrap()).unwrap();
        assert_eq!(pent.num_vertices(), 5);
        assert_eq!(pent.facets().len(), 5);
    }

    #[test]
    fn gtp_spec_validation() {
        assert!(GtpSpec::new(0, vec![]).is_err());
        assert!(GtpSpec::new(0, vec![2, 3]).is_err());
        assert!(GtpSpec::new(0, vec![2, 0]).is_err());
        assert!(build_gtp(&GtpSpec::new(3, vec![1]).unwrap()).is_err());
        let s = GtpSpec::new(2, vec![3, 1, 1]).unwrap();
        assert_eq!((s.r(), s.d(), s.m(), s.a()), (3, 5, 10, 2));
    }

    #[test]
    fn seeded_random_is_reproducible() {
        let spec = GtpSpec::with_strategy(3, vec![2, 2], StackingStrategy::SeededRandom(7)).unwrap();
        assert_eq!(build_gtp(&spec).unwrap(), build_gtp(&spec).unwrap());
    }

    #[test]
    fn glue_edges_at_a_vertex() {
        let e = SimplicialComplex::from_facet_lists(&[&[1, 2]]).unwrap();
        let p = glue(&e, &e, &face(&[2]), &face(&[1])).unwrap();
        assert_eq!(p.facets(), &[face(&[1, 2]), face(&[2, 3])]);
        assert_eq!(p.num_vertices(), 3);
    }

    #[test]
    fn glue_rejects_bad_simplices() {
        let e = SimplicialComplex::from_facet_lists(&[&[1, 2]]).unwrap();
        assert!(glue(&e, &e, &face(&[1, 2]), &face(&[1])).is_err());
        let two_points = boundary_simplex(1).unwrap();
        assert!(glue(&e, &two_points, &face(&[1, 2]), &face(&[1, 2])).is_err());
    }

    #[test]
    fn cyclic_polytope_facets() {
        assert_eq!(cyclic_boundary(6, 4).unwrap().facets().len(), 9);
        assert_eq!(cyclic_boundary(5, 4).unwrap().facets(), boundary_simplex(4).unwrap().facets());
        assert!(cyclic_boundary(4, 4).is_err());
        assert!(cyclic_boundary(5, 1).is_err());
    }
}
