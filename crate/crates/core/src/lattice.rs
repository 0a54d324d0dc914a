//! Bitmask face lattice of a complex with at most 64 ground vertices.
//!
//! Bit `t` of a mask stands for the `t`-th ground label in increasing
//! order, so mask order and label order agree. The engines (Hochster,
//! Taylor, Golod) work exclusively on this view.

use std::collections::{HashMap, HashSet};

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

/// Hard ceiling of the bitmask representation.
pub const MAX_LATTICE_VERTICES: usize = 64;

pub type Mask = u64;

#[derive(Clone, Debug)]
pub struct FaceLattice {
    ground: Vec<VertexId>,
    facet_masks: Vec<Mask>,
    /// All faces including the empty one, sorted by (size, mask).
    faces: Vec<Mask>,
    /// `offsets[s]..offsets[s + 1]` are the faces with `s` vertices.
    offsets: Vec<usize>,
    index: HashMap<Mask, u32>,
    /// Codimension-one faces of each face with the sign `(-1)^position`.
    boundary: Vec<Vec<(u32, i8)>>,
}

impl FaceLattice {
    pub fn new(k: &SimplicialComplex) -> Result<Self> {
        let m = k.num_vertices();
        if m > MAX_LATTICE_VERTICES {
            return Err(Error::BoundExceeded { what: "ground-set size", actual: m, bound: MAX_LATTICE_VERTICES });
        }
        let ground = k.ground().to_vec();
        let facet_masks: Vec<Mask> = k
            .facets()
            .iter()
            .map(|f| {
                f.vertices()
                    .iter()
                    .map(|v| 1u64 << ground.binary_search(v).expect("facet within ground"))
                    .fold(0, |a, b| a | b)
            })
            .collect();

        let mut seen: HashSet<Mask> = HashSet::new();
        seen.insert(0);
        for &fm in &facet_masks {
            if seen.contains(&fm) {
                continue;
            }
            // Enumerate submasks of the facet.
            let mut sub = fm;
            loop {
                seen.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & fm;
            }
        }
        let mut faces: Vec<Mask> = seen.into_iter().collect();
        faces.sort_unstable_by_key(|&f| (f.count_ones(), f));
        let max_size = faces.last().map(|f| f.count_ones() as usize).unwrap_or(0);
        let mut offsets = vec![0usize; max_size + 2];
        for &f in &faces {
            offsets[f.count_ones() as usize + 1] += 1;
        }
        for s in 1..offsets.len() {
            offsets[s] += offsets[s - 1];
        }
        let index: HashMap<Mask, u32> = faces.iter().enumerate().map(|(i, &f)| (f, i as u32)).collect();
        let boundary = faces
            .iter()
            .map(|&f| {
                let mut out = Vec::with_capacity(f.count_ones() as usize);
                let mut rest = f;
                let mut pos = 0;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    rest ^= bit;
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    out.push((index[&(f ^ bit)], sign));
                    pos += 1;
                }
                out
            })
            .collect();
        Ok(FaceLattice { ground, facet_masks, faces, offsets, index, boundary })
    }

    pub fn m(&self) -> usize {
        self.ground.len()
    }

    pub fn ground(&self) -> &[VertexId] {
        &self.ground
    }

    pub fn full_mask(&self) -> Mask {
        if self.ground.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.ground.len()) - 1
        }
    }

    pub fn facet_masks(&self) -> &[Mask] {
        &self.facet_masks
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Largest face size (`dim + 1`).
    pub fn max_face_size(&self) -> usize {
        self.offsets.len() - 2
    }

    pub fn face_mask(&self, id: u32) -> Mask {
        self.faces[id as usize]
    }

    /// Ids of faces with exactly `size` vertices.
    pub fn ids_of_size(&self, size: usize) -> std::ops::Range<u32> {
        if size + 1 >= self.offsets.len() {
            let n = self.faces.len() as u32;
            return n..n;
        }
        self.offsets[size] as u32..self.offsets[size + 1] as u32
    }

    pub fn id_of(&self, mask: Mask) -> Option<u32> {
        self.index.get(&mask).copied()
    }

    pub fn is_face(&self, mask: Mask) -> bool {
        self.index.contains_key(&mask)
    }

    pub fn boundary(&self, id: u32) -> &[(u32, i8)] {
        &self.boundary[id as usize]
    }

    pub fn mask_of(&self, labels: &[VertexId]) -> Result<Mask> {
        labels.iter().try_fold(0u64, |acc, v| {
            self.ground.binary_search(v).map(|t| acc | (1 << t)).map_err(|_| Error::UnknownVertex(*v))
        })
    }

    pub fn labels_of(&self, mask: Mask) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            out.push(self.ground[t]);
            rest &= rest - 1;
        }
        out
    }

    pub fn face_of_mask(&self, mask: Mask) -> Face {
        Face::from_sorted_unchecked(self.labels_of(mask))
    }

    pub fn f_vector(&self) -> Vec<u64> {
        (0..self.offsets.len() - 1).map(|s| (self.offsets[s + 1] - self.offsets[s]) as u64).collect()
    }

    /// Dimension of the full subcomplex on `mask`.
    pub fn dim_of_restriction(&self, mask: Mask) -> isize {
        self.facet_masks.iter().map(|f| (f & mask).count_ones() as isize).max().unwrap_or(0) - 1
    }

    /// Minimal non-faces as masks, in lexicographic order of their labels.
    pub fn minimal_nonface_masks(&self) -> Vec<Mask> {
        let full = self.full_mask();
        let mut out = Vec::new();
        for &sigma in &self.faces {
            let top = if sigma == 0 { 0 } else { 64 - sigma.leading_zeros() };
            let mut above = full & !(if top >= 64 { u64::MAX } else { (1u64 << top) - 1 });
            while above != 0 {
                let bit = above & above.wrapping_neg();
                above ^= bit;
                let cand = sigma | bit;
                if self.is_face(cand) {
                    continue;
                }
                let mut rest = sigma;
                let mut minimal = true;
                while rest != 0 {
                    let b = rest & rest.wrapping_neg();
                    rest ^= b;
                    if !self.is_face(cand ^ b) {
                        minimal = false;
                        break;
                    }
                }
                if minimal {
                    out.push(cand);
                }
            }
        }
        out.sort_by_cached_key(|&mask| self.labels_of(mask));
        out
    }
}

/// Iterates over the set bits of a mask, lowest first.
pub(crate) fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let t = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(t)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_boundary_lattice() {
        let k = SimplicialComplex::from_facet_lists(&[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]).unwrap();
        let l = FaceLattice::new(&k).unwrap();
        assert_eq!(l.f_vector(), vec![1, 4, 6, 4]);
        assert_eq!(l.max_face_size(), 3);
        assert!(!l.is_face(0b1111));
        assert_eq!(l.minimal_nonface_masks(), vec![0b1111]);
    }

    #[test]
    fn boundary_signs_follow_positions() {
        let k = SimplicialComplex::from_facet_lists(&[&[1, 2, 3]]).unwrap();
        let l = FaceLattice::new(&k).unwrap();
        let tri = l.id_of(0b111).unwrap();
        let b: Vec<(Mask, i8)> = l.boundary(tri).iter().map(|&(id, s)| (l.face_mask(id), s)).collect();
        // Removing vertex 1 (+), vertex 2 (-), vertex 3 (+).
        assert_eq!(b, vec![(0b110, 1), (0b101, -1), (0b011, 1)]);
    }

    #[test]
    fn bits_iterates_in_order() {
        assert_eq!(bits(0b10110).collect::<Vec<_>>(), vec![1, 2, 4]);
    }
}
