//! Tor of the face ring over the polynomial ring, from the Taylor complex of
//! the Stanley–Reisner ideal.
//!
//! The Taylor complex has one basis element per subset `S` of the minimal
//! generators, in homological degree `|S|` and multidegree `lcm(S)`, the
//! union of the supports. After tensoring with the field only the terms of
//! the differential that keep the lcm survive, so the complex splits into
//! independent strands indexed by the lcm mask.
//!
//! With many generators the full basis is out of reach. The Lyubeznik
//! subcomplex (subsets `g_{i_1} < ... < g_{i_k}` such that no `g_q` with
//! `q < i_t` divides `lcm(g_{i_t}, ..., g_{i_k})`) is closed under the
//! differential and is itself a resolution, so it can stand in for the full
//! basis with the same differential.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::hochster::with_threads;
use crate::lattice::{FaceLattice, Mask};
use crate::linalg::{rank_rational, SparseVec};
use crate::table::BigradedBettiTable;

pub const DEFAULT_MAX_GENERATORS: usize = 18;
/// Cap on the number of basis elements of a Lyubeznik complex.
pub const DEFAULT_MAX_CELLS: usize = 4_000_000;

/// Squarefree monomial generators, stored as supports over a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSet {
    ground: Vec<VertexId>,
    generators: Vec<Face>,
    masks: Vec<Mask>,
}

impl MonomialSet {
    /// Generators must form an antichain of nonempty supports inside `ground`.
    pub fn new(ground: Vec<VertexId>, mut generators: Vec<Face>) -> Result<Self> {
        let mut ground = ground;
        ground.sort_unstable();
        ground.dedup();
        if ground.len() > 64 {
            return Err(Error::BoundExceeded { what: "ground-set size", actual: ground.len(), bound: 64 });
        }
        generators.sort();
        generators.dedup();
        let mut masks = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.is_empty() {
                return Err(Error::InvalidArgument("the unit monomial cannot be a generator".into()));
            }
            let mut mask = 0;
            for v in g.vertices() {
                let pos = ground.binary_search(v).map_err(|_| Error::UnknownVertex(*v))?;
                mask |= 1 << pos;
            }
            masks.push(mask);
        }
        for (a, &x) in masks.iter().enumerate() {
            for (b, &y) in masks.iter().enumerate() {
                if a != b && x & !y == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "generator {} divides {}",
                        generators[a], generators[b]
                    )));
                }
            }
        }
        Ok(MonomialSet { ground, generators, masks })
    }

    /// Minimal non-faces of `k`.
    pub fn from_complex(k: &SimplicialComplex) -> Result<Self> {
        let lat = FaceLattice::new(k)?;
        Ok(Self::from_lattice(&lat))
    }

    fn from_lattice(lat: &FaceLattice) -> Self {
        let masks = lat.minimal_nonface_masks();
        let generators = masks.iter().map(|&m| lat.face_of_mask(m)).collect();
        MonomialSet { ground: lat.ground().to_vec(), generators, masks }
    }

    pub fn ground(&self) -> &[VertexId] {
        &self.ground
    }

    pub fn generators(&self) -> &[Face] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TaylorBasis {
    /// Every subset of the generators.
    #[default]
    Full,
    /// The Lyubeznik subcomplex for the sorted generator order.
    Lyubeznik,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaylorOptions {
    pub basis: TaylorBasis,
    /// Generator bound for the full basis.
    pub max_generators: usize,
    /// Cell bound for the Lyubeznik basis.
    pub max_cells: usize,
    pub threads: Option<usize>,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions {
            basis: TaylorBasis::Full,
            max_generators: DEFAULT_MAX_GENERATORS,
            max_cells: DEFAULT_MAX_CELLS,
            threads: None,
        }
    }
}

impl TaylorOptions {
    pub fn lyubeznik() -> Self {
        TaylorOptions { basis: TaylorBasis::Lyubeznik, ..Default::default() }
    }
}

/// All cells with one lcm. `cells[i]` holds generator-subset masks of size
/// `i`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorStrand {
    pub lcm: Mask,
    pub cells: Vec<Vec<u64>>,
}

impl TaylorStrand {
    /// Tensored differential out of degree `deg`, one sparse row per cell,
    /// indexed against `cells[deg - 1]`.
    pub fn differential(&self, deg: usize) -> Vec<SparseVec<i64>> {
        if deg == 0 || deg >= self.cells.len() {
            return Vec::new();
        }
        let target = &self.cells[deg - 1];
        self.cells[deg].iter().map(|&s| boundary_row(s, target)).collect()
    }

    fn num_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// Homology ranks by homological degree.
    pub fn homology(&self) -> Vec<usize> {
        let n = self.cells.len();
        let ranks: Vec<usize> = (0..=n)
            .map(|deg| {
                if deg == 0 || deg >= n {
                    0
                } else {
                    rank_rational(&self.differential(deg), self.cells[deg - 1].len())
                }
            })
            .collect();
        (0..n).map(|deg| self.cells[deg].len() - ranks[deg] - ranks[deg + 1]).collect()
    }
}

/// `∂S = Σ_t (-1)^{t+1} S∖{g_t}` restricted to terms present in `target`
/// (the faces of `S` with the same lcm).
fn boundary_row(s: u64, target: &[u64]) -> SparseVec<i64> {
    let mut row = Vec::new();
    let mut rest = s;
    let mut position = 0;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest ^= bit;
        position += 1;
        if let Ok(idx) = target.binary_search(&(s ^ bit)) {
            row.push((idx as u32, if position % 2 == 1 { 1 } else { -1 }));
        }
    }
    row.sort_unstable_by_key(|e| e.0);
    row
}

/// The tensored Taylor complex (or its Lyubeznik subcomplex), split into
/// strands ordered by lcm mask.
#[derive(Clone, Debug)]
pub struct TaylorComplexData {
    pub generators: MonomialSet,
    pub basis: TaylorBasis,
    pub strands: Vec<TaylorStrand>,
}

impl TaylorComplexData {
    pub fn num_cells(&self) -> usize {
        self.strands.iter().map(TaylorStrand::num_cells).sum()
    }

    /// Checks `∂∂ = 0` on every cell.
    pub fn squares_to_zero(&self) -> bool {
        self.strands.iter().all(|strand| {
            (2..strand.cells.len()).all(|deg| {
                let outer = strand.differential(deg);
                let inner = strand.differential(deg - 1);
                outer.iter().all(|row| {
                    let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                    for &(c, x) in row {
                        for &(c2, y) in &inner[c as usize] {
                            *acc.entry(c2).or_insert(0) += x * y;
                        }
                    }
                    acc.values().all(|&v| v == 0)
                })
            })
        })
    }

    /// `β_{i,U}` for every strand `U`, as `(lcm, degree, rank)` with rank > 0.
    pub fn multigraded_ranks(&self, threads: Option<usize>) -> Vec<(Mask, usize, usize)> {
        let run = |strand: &TaylorStrand| {
            strand
                .homology()
                .into_iter()
                .enumerate()
                .filter(|&(_, r)| r > 0)
                .map(|(deg, r)| (strand.lcm, deg, r))
                .collect::<Vec<_>>()
        };
        let mut out: Vec<(Mask, usize, usize)> = if threads == Some(1) {
            self.strands.iter().flat_map(run).collect()
        } else {
            with_threads(threads, || self.strands.par_iter().flat_map_iter(run).collect())
        };
        out.sort_unstable();
        out
    }
}

/// Builds the full tensored Taylor complex under the default bound.
pub fn taylor_complex(gens: &MonomialSet) -> Result<TaylorComplexData> {
    taylor_complex_with(gens, &TaylorOptions::default())
}

pub fn taylor_complex_with(gens: &MonomialSet, opts: &TaylorOptions) -> Result<TaylorComplexData> {
    let g = gens.len();
    let cells: Vec<(u64, Mask)> = match opts.basis {
        TaylorBasis::Full => {
            let bound = opts.max_generators.min(40);
            if g > bound {
                return Err(Error::BoundExceeded { what: "Taylor generators", actual: g, bound });
            }
            full_cells(&gens.masks)
        }
        TaylorBasis::Lyubeznik => {
            if g > 64 {
                return Err(Error::BoundExceeded { what: "Taylor generators", actual: g, bound: 64 });
            }
            lyubeznik_cells(&gens.masks, opts.max_cells)?
        }
    };
    let mut by_lcm: HashMap<Mask, Vec<Vec<u64>>> = HashMap::new();
    for (s, lcm) in cells {
        let deg = s.count_ones() as usize;
        let strand = by_lcm.entry(lcm).or_default();
        if strand.len() <= deg {
            strand.resize(deg + 1, Vec::new());
        }
        strand[deg].push(s);
    }
    let mut strands: Vec<TaylorStrand> = by_lcm
        .into_iter()
        .map(|(lcm, mut cells)| {
            for c in &mut cells {
                c.sort_unstable();
            }
            TaylorStrand { lcm, cells }
        })
        .collect();
    strands.sort_by_key(|s| s.lcm);
    Ok(TaylorComplexData { generators: gens.clone(), basis: opts.basis, strands })
}

fn full_cells(masks: &[Mask]) -> Vec<(u64, Mask)> {
    let n = 1usize << masks.len();
    let mut lcm = vec![0 as Mask; n];
    for s in 1..n {
        let low = s.trailing_zeros() as usize;
        lcm[s] = lcm[s & (s - 1)] | masks[low];
    }
    lcm.into_iter().enumerate().map(|(s, l)| (s as u64, l)).collect()
}

/// Lyubeznik cells, grown from the largest index downwards: prepending
/// `g_j` to an admissible tail is admissible iff no earlier generator
/// divides the new tail lcm.
fn lyubeznik_cells(masks: &[Mask], max_cells: usize) -> Result<Vec<(u64, Mask)>> {
    let mut out = vec![(0u64, 0 as Mask)];
    let mut stack: Vec<(u64, Mask, usize)> = vec![(0, 0, masks.len())];
    while let Some((s, lcm, below)) = stack.pop() {
        for j in 0..below {
            let new_lcm = lcm | masks[j];
            if masks[..j].iter().any(|&q| q & !new_lcm == 0) {
                continue;
            }
            let cell = s | (1u64 << j);
            out.push((cell, new_lcm));
            if out.len() > max_cells {
                return Err(Error::BoundExceeded { what: "Lyubeznik cells", actual: out.len(), bound: max_cells });
            }
            stack.push((cell, new_lcm, j));
        }
    }
    Ok(out)
}

/// Bigraded Betti numbers from the full Taylor complex (default bound).
pub fn taylor_betti(k: &SimplicialComplex) -> Result<BigradedBettiTable> {
    taylor_betti_with(k, &TaylorOptions::default())
}

pub fn taylor_betti_with(k: &SimplicialComplex, opts: &TaylorOptions) -> Result<BigradedBettiTable> {
    let lat = FaceLattice::new(k)?;
    let gens = MonomialSet::from_lattice(&lat);
    let data = taylor_complex_with(&gens, opts)?;
    let mut table = BigradedBettiTable::new(lat.m(), k.gtp_meta().map(|meta| meta.d())).with_engine("taylor");
    for (lcm, deg, rank) in data.multigraded_ranks(opts.threads) {
        table.add(deg, lcm.count_ones() as usize, rank as u64);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boundary_simplex, join, simplex};

    fn square() -> SimplicialComplex {
        SimplicialComplex::from_facet_lists(&[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap()
    }

    fn face(v: &[u32]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    #[test]
    fn square_generators() {
        let gens = MonomialSet::from_complex(&square()).unwrap();
        assert_eq!(gens.generators(), &[face(&[1, 3]), face(&[2, 4])]);
    }

    #[test]
    fn disjoint_generators_have_zero_differential() {
        let gens = MonomialSet::new(vec![1, 2, 3, 4], vec![face(&[1, 3]), face(&[2, 4])]).unwrap();
        let data = taylor_complex(&gens).unwrap();
        assert_eq!(data.num_cells(), 4);
        assert!(data.strands.iter().all(|s| (1..s.cells.len()).all(|d| s.differential(d).iter().all(Vec::is_empty))));
        let ranks = data.multigraded_ranks(Some(1));
        assert_eq!(ranks, vec![(0, 0, 1), (0b0101, 1, 1), (0b1010, 1, 1), (0b1111, 2, 1)]);
    }

    #[test]
    fn rejects_non_antichain() {
        assert!(MonomialSet::new(vec![1, 2, 3], vec![face(&[1]), face(&[1, 2])]).is_err());
    }

    #[test]
    fn single_generator() {
        let gens = MonomialSet::new(vec![1, 2, 3], vec![face(&[1, 2, 3])]).unwrap();
        let ranks = taylor_complex(&gens).unwrap().multigraded_ranks(Some(1));
        assert_eq!(ranks, vec![(0, 0, 1), (0b111, 1, 1)]);
    }

    #[test]
    fn simplex_has_no_generators() {
        let t = taylor_betti(&simplex(4).unwrap()).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1)]);
    }

    #[test]
    fn square_table() {
        let t = taylor_betti(&square()).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1), ((1, 2), 2), ((2, 4), 1)]);
        assert_eq!(t.engine.as_deref(), Some("taylor"));
    }

    #[test]
    fn join_of_boundaries() {
        let k = join(&boundary_simplex(3).unwrap(), &boundary_simplex(2).unwrap());
        let t = taylor_betti(&k).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 0), 1), ((1, 3), 1), ((1, 4), 1), ((2, 7), 1)]);
    }

    #[test]
    fn pentagon_full_and_lyubeznik() {
        let k = SimplicialComplex::from_facet_lists(&[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[1, 5]]).unwrap();
        let full = taylor_betti(&k).unwrap();
        let want = vec![((0, 0), 1), ((1, 2), 5), ((2, 3), 5), ((3, 5), 1)];
        assert_eq!(full.entries().collect::<Vec<_>>(), want);
        let lyu = taylor_betti_with(&k, &TaylorOptions::lyubeznik()).unwrap();
        assert_eq!(lyu, full);
        let data = taylor_complex_with(&MonomialSet::from_complex(&k).unwrap(), &TaylorOptions::lyubeznik()).unwrap();
        assert!(data.num_cells() < 32);
        assert!(data.squares_to_zero());
    }

    #[test]
    fn bound_is_enforced() {
        let k = SimplicialComplex::from_facet_lists(&[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[1, 5]]).unwrap();
        let opts = TaylorOptions { max_generators: 4, ..Default::default() };
        assert!(matches!(taylor_betti_with(&k, &opts), Err(Error::BoundExceeded { .. })));
    }
}
