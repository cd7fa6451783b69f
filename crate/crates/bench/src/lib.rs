//! Fixtures shared by the benchmarks.

use quivlip_core::linalg::{self, CMatrix};
use quivlip_core::rep_model::random::{random_bidirected_graph, rng_from_seed};
use quivlip_core::rep_model::{
    apply_isomorphism, random_near_identity_iso, random_representation, EdgeKind,
};
use quivlip_core::BidirectedRep;

pub const ALL_KINDS: [EdgeKind; 3] = [
    EdgeKind::Directed,
    EdgeKind::Undirected,
    EdgeKind::Bidirected,
];

/// `I + 0.1·G` for a Gaussian `G`, comfortably off the branch cut.
pub fn near_identity_matrix(n: usize, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    linalg::identity(n) + linalg::gaussian_matrix(n, n, &mut rng).scale(0.1)
}

/// A representation with `t` vertices of dimension `dim` and a nearby
/// isomorphic copy.
pub fn perturbed_pair(
    t: usize,
    edges: usize,
    dim: usize,
    kinds: &[EdgeKind],
    seed: u64,
) -> (BidirectedRep, BidirectedRep) {
    let g = random_bidirected_graph(t, edges, kinds, seed).expect("valid graph parameters");
    let a = random_representation(&g, vec![dim; t], 1.0, seed + 1).expect("dims match the graph");
    let phi = random_near_identity_iso(a.dims(), 1e-3, seed + 2).expect("small perturbation");
    let b = apply_isomorphism(&a, &phi).expect("dims match");
    (a, b)
}
