//! Seeded generators for graphs, representations and near-identity
//! isomorphisms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::{BidirectedGraph, Edge, EdgeKind, GraphShape};
use super::isomorphism::Isomorphism;
use super::representation::{DimensionVector, Representation};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. standard complex Gaussian times `scale`, drawn in edge order.
pub fn random_representation<G: GraphShape>(
    graph: &G,
    dims: impl Into<DimensionVector>,
    scale: f64,
    seed: u64,
) -> Result<Representation<G>> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "scale must be finite and non-negative, got {scale}"
        )));
    }
    let dims = dims.into();
    if dims.len() != graph.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} dimensions for {} vertices",
            dims.len(),
            graph.vertex_count()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mats = graph
        .edges()
        .map(|e| {
            let (r, c) = e.matrix_shape(dims.as_slice());
            linalg::gaussian_matrix(r, c, &mut rng).scale(scale)
        })
        .collect();
    Representation::from_edge_matrices(graph.clone(), dims, mats)
}

/// `S_i = I + εE_i` with `E_i` complex Gaussian rescaled to `‖E_i‖_F = 1`.
/// Draws that land on a singular `S_i` are discarded and redrawn.
pub fn random_near_identity_iso(
    dims: &DimensionVector,
    eps: f64,
    seed: u64,
) -> Result<Isomorphism> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "eps must be finite and non-negative, got {eps}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mats = dims
        .as_slice()
        .iter()
        .map(|&n| loop {
            if n == 0 {
                break CMatrix::zeros(0, 0);
            }
            let e = linalg::gaussian_matrix(n, n, &mut rng);
            let e = e.unscale(e.norm());
            let s = linalg::identity(n) + e.scale(eps);
            if linalg::is_invertible(&s) {
                break s;
            }
        })
        .collect();
    Isomorphism::new(mats)
}

/// Random invertible isomorphism with standard Gaussian components.
pub fn random_isomorphism(dims: &DimensionVector, seed: u64) -> Result<Isomorphism> {
    let mut rng = rng_from_seed(seed);
    let mats = dims
        .as_slice()
        .iter()
        .map(|&n| loop {
            let s = linalg::gaussian_matrix(n, n, &mut rng);
            // Keep the draws reasonably conditioned.
            if linalg::singular_value_ratio(&s) > 1e-3 {
                break s;
            }
        })
        .collect();
    Isomorphism::new(mats)
}

/// Random bidirected graph on `t` vertices with `edge_count` edges whose
/// kinds cycle through `kinds`. Non-directed edges are stored normalized.
pub fn random_bidirected_graph(
    t: usize,
    edge_count: usize,
    kinds: &[EdgeKind],
    seed: u64,
) -> Result<BidirectedGraph> {
    if kinds.is_empty() && edge_count > 0 {
        return Err(Error::InvalidArgument("need at least one edge kind".into()));
    }
    let mut rng = rng_from_seed(seed);
    let edges = (0..edge_count)
        .map(|k| {
            let kind = kinds[k % kinds.len()];
            let a = rng.random_range(1..=t);
            let b = rng.random_range(1..=t);
            let (tail, head) = match kind {
                EdgeKind::Directed => (a, b),
                _ => (a.min(b), a.max(b)),
            };
            Edge::new(format!("e{k}"), tail, head, kind)
        })
        .collect();
    BidirectedGraph::new(t, edges)
}

pub fn random_dims(t: usize, min: usize, max: usize, seed: u64) -> DimensionVector {
    let mut rng = rng_from_seed(seed);
    DimensionVector((0..t).map(|_| rng.random_range(min..=max)).collect())
}
