//! Simplicial complexes, face-ring Betti numbers and Golodness tests for
//! generalized truncation polytopes.

pub mod chordal;
pub mod complex;
pub mod constructions;
pub mod error;
pub mod formulas;
pub mod golod;
pub mod hochster;
pub mod homology;
pub mod lattice;
pub mod linalg;
pub mod table;
pub mod taylor;

pub use complex::{Face, GtpMeta, SimplicialComplex, VertexId};
pub use constructions::{build_gtp, GtpSpec, StackingStrategy};
pub use error::{Error, Result};
pub use hochster::{bigraded_betti, bigraded_betti_with, HochsterOptions};
pub use homology::{reduced_homology, Coefficients, ReducedHomologySummary};
pub use table::{duality_check, ordinary_betti, BigradedBettiTable, OrdinaryBettiVector};
