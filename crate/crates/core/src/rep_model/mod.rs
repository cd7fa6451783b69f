//! Bidirected graphs, quivers, their matrix representations, and the
//! action of isomorphisms on them.
//!
//! Matrix conventions (vertices `i ≤ j` for the two kinds of forms):
//!
//! | edge            | stored matrix | image under `(S_v)`   |
//! |-----------------|---------------|-----------------------|
//! | map `i → j`     | `n_j × n_i`   | `S_j M S_i⁻¹`         |
//! | form `i – j`    | `n_i × n_j`   | `S_i⁻ᵀ M S_j⁻¹`       |
//! | dual form `i↔j` | `n_i × n_j`   | `S_i M S_jᵀ`          |
//!
//! Transposes are plain transposes, never conjugate transposes.

mod graph;
mod isomorphism;
pub mod random;
mod representation;

pub use graph::{Arrow, BidirectedGraph, Edge, EdgeKind, EdgeView, GraphShape, Involution, Quiver};
pub use isomorphism::{Isomorphism, IsomorphismDoc};
pub use random::{random_near_identity_iso, random_representation};
pub use representation::{apply_isomorphism, DimensionVector, Representation};

pub type BidirectedRep = Representation<BidirectedGraph>;
pub type QuiverRep = Representation<Quiver>;

impl BidirectedRep {
    /// Reinterprets a representation whose edges are all directed as a
    /// quiver representation.
    pub fn to_quiver_rep(&self) -> crate::Result<QuiverRep> {
        let quiver = self.graph().to_quiver()?;
        Representation::from_edge_matrices(quiver, self.dims().clone(), self.matrices().to_vec())
    }
}
