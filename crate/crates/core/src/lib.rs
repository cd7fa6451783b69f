//! Representations of bidirected graphs (systems of linear maps and
//! bilinear forms), their reduction to quiver representations, and the
//! recovery of isomorphisms that stay close to the identity.

pub mod doubling;
pub mod error;
pub mod iso_solver;
pub mod linalg;
pub mod lipschitz_lab;
pub mod matfun;
pub mod pair_encoding;
pub mod rep_model;

pub use doubling::{underline_graph, underline_iso, underline_rep, DoubledQuiver};
pub use error::{Error, Result};
pub use iso_solver::{recover_near_identity, recover_with_route, Recovery, Route};
pub use linalg::{CMatrix, CVector};
pub use lipschitz_lab::{ExperimentConfig, ExperimentReport, ReportFormat, TrialRecord};
pub use num_complex::Complex64;
pub use pair_encoding::{encode_pair, MatrixPair, PairLayout};
pub use rep_model::{
    apply_isomorphism, BidirectedGraph, BidirectedRep, DimensionVector, Edge, EdgeKind, GraphShape,
    Isomorphism, Quiver, QuiverRep, Representation,
};
