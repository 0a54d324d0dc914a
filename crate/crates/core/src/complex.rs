//! Finite simplicial complexes on labeled ground sets.
//!
//! A complex is stored as its ground set and its facet antichain only; the
//! face lattice is never materialized here (see [`crate::lattice`] for the
//! bitmask view used by the engines).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::FaceLattice;

/// Vertex label. Labels are positive and distinct within a complex.
pub type VertexId = u32;

/// A face: a strictly increasing sequence of vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<VertexId>);

impl Face {
    /// Sorts the labels; rejects duplicates and the label 0.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFace(format!("duplicate label in {vertices:?}")));
        }
        if vertices.first() == Some(&0) {
            return Err(Error::InvalidFace("labels are 1-based".into()));
        }
        Ok(Face(vertices))
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension `|F| - 1`; the empty face has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A simplicial complex: a ground set of labels plus the antichain of
/// maximal faces.
///
/// The complex always contains the empty face. A complex with no facets is
/// `{∅}`: every ground vertex is a ghost. Ghost vertices (ground members in
/// no facet) are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    ground: Vec<VertexId>,
    facets: Vec<Face>,
    meta: Option<Value>,
}

impl SimplicialComplex {
    /// Builds a complex from a ground set and a list of faces; the faces
    /// are deduplicated and reduced to their maximal members.
    pub fn new(ground: impl IntoIterator<Item = VertexId>, faces: impl IntoIterator<Item = Face>) -> Result<Self> {
        let ground: BTreeSet<VertexId> = ground.into_iter().collect();
        if ground.contains(&0) {
            return Err(Error::InvalidComplex("labels are 1-based".into()));
        }
        let facets = normalize_antichain(faces.into_iter().collect());
        for f in &facets {
            if let Some(v) = f.vertices().iter().find(|v| !ground.contains(v)) {
                return Err(Error::InvalidComplex(format!("facet {f} uses vertex {v} outside the ground set")));
            }
        }
        Ok(SimplicialComplex { ground: ground.into_iter().collect(), facets, meta: None })
    }

    /// Ground set is the union of the faces.
    pub fn from_faces(faces: impl IntoIterator<Item = Face>) -> Result<Self> {
        let faces: Vec<Face> = faces.into_iter().collect();
        let ground: BTreeSet<VertexId> = faces.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        Self::new(ground, faces)
    }

    /// Convenience for literals in tests and examples.
    pub fn from_facet_lists(lists: &[&[VertexId]]) -> Result<Self> {
        let faces = lists.iter().map(|l| Face::new(l.to_vec())).collect::<Result<Vec<_>>>()?;
        Self::from_faces(faces)
    }

    pub fn ground(&self) -> &[VertexId] {
        &self.ground
    }

    /// Number of ground vertices `m`.
    pub fn num_vertices(&self) -> usize {
        self.ground.len()
    }

    /// Facets in lexicographic order.
    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn meta(&self) -> Option<&Value> {
        self.meta.as_ref()
    }

    pub fn with_meta(mut self, meta: Option<Value>) -> Self {
        self.meta = meta;
        self
    }

    /// Typed view of `meta` when it describes a generalized truncation polytope.
    pub fn gtp_meta(&self) -> Option<GtpMeta> {
        let meta = self.meta.as_ref()?;
        serde_json::from_value(meta.clone()).ok()
    }

    /// Dimension of the complex; `{∅}` has dimension -1.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(Face::dim).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        match self.facets.first() {
            None => true,
            Some(f) => self.facets.iter().all(|g| g.len() == f.len()),
        }
    }

    pub fn is_face(&self, face: &Face) -> bool {
        face.vertices().iter().all(|v| self.ground.binary_search(v).is_ok())
            && (face.is_empty() || self.facets.iter().any(|f| face.is_subset_of(f)))
    }

    pub fn is_facet(&self, face: &Face) -> bool {
        self.facets.binary_search(face).is_ok()
    }

    /// Ground vertices contained in no facet.
    pub fn ghost_vertices(&self) -> Vec<VertexId> {
        let used: BTreeSet<VertexId> = self.facets.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        self.ground.iter().copied().filter(|v| !used.contains(v)).collect()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.ground.binary_search(&v).is_ok()
    }

    pub fn max_label(&self) -> VertexId {
        self.ground.last().copied().unwrap_or(0)
    }

    /// Restriction to `subset`: ground set `subset`, faces of `self`
    /// contained in it. Labels are preserved.
    pub fn full_subcomplex(&self, subset: &[VertexId]) -> Result<Self> {
        let keep: BTreeSet<VertexId> = subset.iter().copied().collect();
        if let Some(v) = keep.iter().find(|v| !self.contains_vertex(**v)) {
            return Err(Error::UnknownVertex(*v));
        }
        let faces = self.facets.iter().map(|f| {
            Face::from_sorted_unchecked(f.vertices().iter().copied().filter(|v| keep.contains(v)).collect())
        });
        Self::new(keep.iter().copied(), faces)
    }

    /// `K - v`: the full subcomplex on the ground set without `v`.
    pub fn delete_vertex(&self, v: VertexId) -> Result<Self> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let rest: Vec<VertexId> = self.ground.iter().copied().filter(|&w| w != v).collect();
        self.full_subcomplex(&rest)
    }

    /// Inclusion-minimal non-faces (the generators of the Stanley–Reisner
    /// ideal), in lexicographic order. Ghost vertices appear as singletons.
    pub fn minimal_nonfaces(&self) -> Result<Vec<Face>> {
        let lattice = FaceLattice::new(self)?;
        Ok(lattice
            .minimal_nonface_masks()
            .into_iter()
            .map(|mask| lattice.face_of_mask(mask))
            .collect())
    }

    /// `(f_{-1}, f_0, ..., f_dim)`.
    pub fn f_vector(&self) -> Result<Vec<u64>> {
        let lattice = FaceLattice::new(self)?;
        Ok(lattice.f_vector())
    }

    /// Reduced Euler characteristic `-f_{-1} + f_0 - f_1 + ...`.
    pub fn reduced_euler_characteristic(&self) -> Result<i64> {
        let f = self.f_vector()?;
        Ok(f.iter().enumerate().map(|(s, &c)| if s % 2 == 0 { -(c as i64) } else { c as i64 }).sum())
    }

    /// All vertex pairs `{u, v}` that are edges of the complex, `u < v`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut edges = BTreeSet::new();
        for f in &self.facets {
            let vs = f.vertices();
            for (a, &u) in vs.iter().enumerate() {
                for &w in &vs[a + 1..] {
                    edges.insert((u, w));
                }
            }
        }
        edges.into_iter().collect()
    }

    /// Checks the structural invariants: sorted distinct ground, sorted
    /// facets within the ground set, antichain.
    pub fn check_invariants(&self) -> Result<()> {
        if self.ground.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidComplex("ground set not strictly increasing".into()));
        }
        if self.facets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidComplex("facets not sorted".into()));
        }
        for (a, f) in self.facets.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::InvalidComplex("empty facet stored".into()));
            }
            if f.vertices().windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidComplex(format!("facet {f} not strictly increasing")));
            }
            if !f.vertices().iter().all(|v| self.contains_vertex(*v)) {
                return Err(Error::InvalidComplex(format!("facet {f} leaves the ground set")));
            }
            for (b, g) in self.facets.iter().enumerate() {
                if a != b && f.is_subset_of(g) {
                    return Err(Error::InvalidComplex(format!("facet {f} is contained in {g}")));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(ground: Vec<VertexId>, facets: Vec<Face>) -> Self {
        SimplicialComplex { ground, facets, meta: None }
    }
}

/// Sorts, deduplicates and keeps only maximal faces. The empty face is
/// dropped (it is implicit).
pub(crate) fn normalize_antichain(mut faces: Vec<Face>) -> Vec<Face> {
    faces.retain(|f| !f.is_empty());
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
    for f in faces {
        if !kept.iter().any(|g| f.is_subset_of(g)) {
            kept.push(f);
        }
    }
    kept.sort();
    kept
}

/// Construction metadata of a generalized truncation polytope's dual
/// boundary complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtpMeta {
    #[serde(rename = "type")]
    pub kind: String,
    pub k: usize,
    pub dims: Vec<usize>,
    pub new_vertices: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GtpMeta {
    pub fn d(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn m(&self) -> usize {
        self.d() + self.dims.len() + self.k
    }
}

/// On-disk complex format.
#[derive(Debug, Serialize, Deserialize)]
struct ComplexFile {
    m: usize,
    /// Present only when the ground set is not `1..=m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ground: Option<Vec<VertexId>>,
    facets: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

impl SimplicialComplex {
    pub fn to_json_value(&self) -> Value {
        let contiguous = self.ground.iter().enumerate().all(|(i, &v)| v as usize == i + 1);
        let file = ComplexFile {
            m: self.ground.len(),
            ground: (!contiguous).then(|| self.ground.clone()),
            facets: self.facets.iter().map(|f| f.vertices().to_vec()).collect(),
            meta: self.meta.clone(),
        };
        serde_json::to_value(file).expect("complex serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("complex serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let ground = match file.ground {
            Some(g) => {
                if g.len() != file.m {
                    return Err(Error::Parse(format!("m = {} but ground has {} labels", file.m, g.len())));
                }
                g
            }
            None => (1..=file.m as VertexId).collect(),
        };
        let faces = file.facets.into_iter().map(Face::new).collect::<Result<Vec<_>>>()?;
        let k = Self::new(ground, faces)?;
        if k.ground.len() != file.m {
            return Err(Error::Parse("duplicate labels in ground set".into()));
        }
        Ok(k.with_meta(file.meta))
    }
}
