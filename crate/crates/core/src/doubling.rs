//! Reduction of bidirected graphs to quivers with involution.
//!
//! Every vertex `i` splits into `i` and `i*`, and every edge becomes a pair
//! of arrows swapped by the involution:
//!
//! * map `β: i → j`      ↦ `β: i → j`,   `β*: j* → i*`
//! * form `α: i – j`     ↦ `α: j → i*`,  `α*: i → j*`
//! * dual form `γ: i ↔ j` ↦ `γ: j* → i`,  `γ*: i* → j`
//!
//! The representation of the doubled quiver keeps each stored matrix on the
//! unstarred arrow and puts its transpose on the starred one. With the
//! conventions of [`crate::rep_model`], doubling commutes exactly with the
//! action of isomorphisms.

use crate::error::{Error, Result};
use crate::linalg;
use crate::rep_model::{
    Arrow, BidirectedGraph, BidirectedRep, DimensionVector, EdgeKind, GraphShape, Involution,
    Isomorphism, Quiver, QuiverRep, Representation,
};

/// The doubled quiver of a bidirected graph on `t` vertices. Vertices are
/// ordered `1..t, 1*..t*` (indices `0..t` and `t..2t`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledQuiver {
    quiver: Quiver,
    t: usize,
}

impl DoubledQuiver {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn into_quiver(self) -> Quiver {
        self.quiver
    }

    /// Vertex count of the original graph.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Index of `v*`.
    pub fn star(&self, v: usize) -> usize {
        if v < self.t {
            v + self.t
        } else {
            v - self.t
        }
    }

    /// Arrow indices `(e, e*)` produced by edge `k` of the original graph.
    pub fn provenance(&self, edge: usize) -> (usize, usize) {
        (2 * edge, 2 * edge + 1)
    }

    /// `(n_1..n_t, n_1..n_t)`.
    pub fn doubled_dims(dims: &DimensionVector) -> DimensionVector {
        DimensionVector(
            dims.as_slice()
                .iter()
                .chain(dims.as_slice())
                .copied()
                .collect(),
        )
    }

    /// Recognizes a quiver laid out by [`underline_graph`].
    pub fn from_quiver(quiver: Quiver) -> Result<Self> {
        let n = quiver.vertex_count();
        let not_doubled =
            |why: &str| Err(Error::InvalidGraph(format!("not a doubled quiver: {why}")));
        if !n.is_multiple_of(2) {
            return not_doubled("odd vertex count");
        }
        let t = n / 2;
        let Some(inv) = quiver.involution() else {
            return not_doubled("no involution");
        };
        if (0..n).any(|v| inv.vertex[v] != (v + t) % n) {
            return not_doubled("vertex involution is not i <-> i*");
        }
        if !quiver.edge_count().is_multiple_of(2)
            || (0..quiver.edge_count()).any(|k| inv.arrow[k] != k ^ 1)
        {
            return not_doubled("arrows are not listed in (e, e*) pairs");
        }
        Ok(DoubledQuiver { quiver, t })
    }
}

pub fn underline_graph(graph: &BidirectedGraph) -> DoubledQuiver {
    let t = graph.t();
    let star = |v: usize| v + t;
    let labels = (1..=t)
        .map(|v| v.to_string())
        .chain((1..=t).map(|v| format!("{v}*")))
        .collect();
    let mut arrows = Vec::with_capacity(2 * graph.edge_count());
    for e in graph.edges() {
        let (i, j) = (e.tail, e.head);
        let ((a_tail, a_head), (s_tail, s_head)) = match e.kind {
            EdgeKind::Directed => ((i, j), (star(j), star(i))),
            EdgeKind::Undirected => ((j, star(i)), (i, star(j))),
            EdgeKind::Bidirected => ((star(j), i), (star(i), j)),
        };
        arrows.push(Arrow::new(e.id, a_tail, a_head));
        arrows.push(Arrow::new(format!("{}*", e.id), s_tail, s_head));
    }
    let involution = Involution {
        vertex: (0..2 * t).map(|v| (v + t) % (2 * t)).collect(),
        arrow: (0..arrows.len()).map(|k| k ^ 1).collect(),
    };
    let quiver =
        Quiver::new(labels, arrows, Some(involution)).expect("doubling yields a valid quiver");
    DoubledQuiver { quiver, t }
}

pub fn underline_rep(rep: &BidirectedRep) -> QuiverRep {
    let doubled = underline_graph(rep.graph());
    let mats = rep
        .matrices()
        .iter()
        .flat_map(|m| [m.clone(), m.transpose()])
        .collect();
    Representation::from_edge_matrices(
        doubled.into_quiver(),
        DoubledQuiver::doubled_dims(rep.dims()),
        mats,
    )
    .expect("doubled shapes are forced by the original ones")
}

/// `(Φ_1..Φ_t, Φ_1⁻ᵀ..Φ_t⁻ᵀ)`.
pub fn underline_iso(iso: &Isomorphism) -> Result<Isomorphism> {
    let inv = iso.inverse()?;
    let mats = iso
        .components()
        .iter()
        .cloned()
        .chain(inv.components().iter().map(|m| m.transpose()))
        .collect();
    Isomorphism::new(mats)
}

/// Checks that `rep` lives on a doubled quiver and that each starred arrow
/// carries exactly the transpose of its partner.
pub fn check_selfdual(rep: &QuiverRep) -> Result<DoubledQuiver> {
    let doubled = DoubledQuiver::from_quiver(rep.graph().clone())?;
    let t = doubled.t();
    let dims = rep.dims().as_slice();
    if dims[..t] != dims[t..] {
        return Err(Error::NotSelfDual("dimension of i* differs from i".into()));
    }
    for pair in rep.matrices().chunks(2) {
        if pair[1] != pair[0].transpose() {
            return Err(Error::NotSelfDual(format!(
                "starred arrow does not carry the transpose (norm gap {:e})",
                linalg::frobenius(&(&pair[1] - pair[0].transpose()))
            )));
        }
    }
    Ok(doubled)
}
