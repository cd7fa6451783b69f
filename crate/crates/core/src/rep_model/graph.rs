use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// A linear map `tail → head`.
    Directed,
    /// A bilinear form on the two endpoint spaces.
    Undirected,
    /// A bilinear form on the two dual spaces.
    Bidirected,
}

/// Borrowed view of one edge with 0-based endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeView<'a> {
    pub id: &'a str,
    pub tail: usize,
    pub head: usize,
    pub kind: EdgeKind,
}

impl EdgeView<'_> {
    /// Shape `(rows, cols)` of the matrix carried by this edge.
    ///
    /// A map `i → j` is `n_j × n_i`; both kinds of forms on `i, j` (with
    /// `i ≤ j`) are stored as `n_i × n_j`.
    pub fn matrix_shape(&self, dims: &[usize]) -> (usize, usize) {
        match self.kind {
            EdgeKind::Directed => (dims[self.head], dims[self.tail]),
            EdgeKind::Undirected | EdgeKind::Bidirected => (dims[self.tail], dims[self.head]),
        }
    }
}

/// Anything that can carry a matrix representation: a vertex count and an
/// ordered list of typed edges.
pub trait GraphShape: Clone + PartialEq + std::fmt::Debug {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn edge(&self, k: usize) -> EdgeView<'_>;
    fn vertex_label(&self, v: usize) -> String;

    fn edges(&self) -> impl Iterator<Item = EdgeView<'_>> {
        (0..self.edge_count()).map(move |k| self.edge(k))
    }

    fn edge_index(&self, id: &str) -> Option<usize> {
        (0..self.edge_count()).find(|&k| self.edge(k).id == id)
    }

    fn vertex_index(&self, label: &str) -> Option<usize> {
        (0..self.vertex_count()).find(|&v| self.vertex_label(v) == label)
    }

    /// True when every edge is directed, so the graph is a plain quiver.
    fn is_quiver(&self) -> bool {
        self.edges().all(|e| e.kind == EdgeKind::Directed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    /// 1-based.
    pub tail: usize,
    /// 1-based.
    pub head: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn new(id: impl Into<String>, tail: usize, head: usize, kind: EdgeKind) -> Self {
        Edge {
            id: id.into(),
            tail,
            head,
            kind,
        }
    }

    pub fn directed(id: impl Into<String>, tail: usize, head: usize) -> Self {
        Edge::new(id, tail, head, EdgeKind::Directed)
    }

    pub fn undirected(id: impl Into<String>, tail: usize, head: usize) -> Self {
        Edge::new(id, tail, head, EdgeKind::Undirected)
    }

    pub fn bidirected(id: impl Into<String>, tail: usize, head: usize) -> Self {
        Edge::new(id, tail, head, EdgeKind::Bidirected)
    }
}

/// A graph on vertices `1..=t` whose edges are directed, undirected or
/// bidirected. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BidirectedGraphDoc")]
pub struct BidirectedGraph {
    t: usize,
    edges: Vec<Edge>,
}

#[derive(Deserialize)]
struct BidirectedGraphDoc {
    t: usize,
    edges: Vec<Edge>,
}

impl TryFrom<BidirectedGraphDoc> for BidirectedGraph {
    type Error = Error;

    fn try_from(doc: BidirectedGraphDoc) -> Result<Self> {
        BidirectedGraph::new(doc.t, doc.edges)
    }
}

impl BidirectedGraph {
    pub fn new(t: usize, edges: Vec<Edge>) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut seen = HashSet::new();
        for e in &edges {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::DuplicateEdge(e.id.clone()));
            }
            for end in [e.tail, e.head] {
                if end == 0 || end > t {
                    return Err(Error::BadEndpoint {
                        edge: e.id.clone(),
                        reason: format!("endpoint {end} outside 1..={t}"),
                    });
                }
            }
            if e.kind != EdgeKind::Directed && e.tail > e.head {
                return Err(Error::BadEndpoint {
                    edge: e.id.clone(),
                    reason: format!(
                        "{:?} edge must be stored with tail <= head, got {} > {}",
                        e.kind, e.tail, e.head
                    ),
                });
            }
        }
        Ok(BidirectedGraph { t, edges })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn edge_list(&self) -> &[Edge] {
        &self.edges
    }

    /// The same graph viewed as a quiver with vertex labels `"1".."t"`.
    /// Fails when some edge is not directed.
    pub fn to_quiver(&self) -> Result<Quiver> {
        if let Some(e) = self.edges.iter().find(|e| e.kind != EdgeKind::Directed) {
            return Err(Error::InvalidGraph(format!(
                "edge `{}` is {:?}; only directed edges fit in a quiver",
                e.id, e.kind
            )));
        }
        let arrows = self
            .edges
            .iter()
            .map(|e| Arrow::new(e.id.clone(), e.tail - 1, e.head - 1))
            .collect();
        Quiver::new((1..=self.t).map(|v| v.to_string()).collect(), arrows, None)
    }
}

impl GraphShape for BidirectedGraph {
    fn vertex_count(&self) -> usize {
        self.t
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn edge(&self, k: usize) -> EdgeView<'_> {
        let e = &self.edges[k];
        EdgeView {
            id: &e.id,
            tail: e.tail - 1,
            head: e.head - 1,
            kind: e.kind,
        }
    }

    fn vertex_label(&self, v: usize) -> String {
        (v + 1).to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    /// 0-based vertex index.
    pub tail: usize,
    /// 0-based vertex index.
    pub head: usize,
}

impl Arrow {
    pub fn new(id: impl Into<String>, tail: usize, head: usize) -> Self {
        Arrow {
            id: id.into(),
            tail,
            head,
        }
    }
}

/// Paired involutions on the vertices and arrows of a quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    pub vertex: Vec<usize>,
    pub arrow: Vec<usize>,
}

/// A quiver with labelled vertices, optionally carrying an involution that
/// sends each arrow `i → j` to an arrow `j* → i*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<String>,
    arrows: Vec<Arrow>,
    involution: Option<Involution>,
}

impl Quiver {
    pub fn new(
        labels: Vec<String>,
        arrows: Vec<Arrow>,
        involution: Option<Involution>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGraph(
                "quiver needs at least one vertex".into(),
            ));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidGraph(format!("duplicate vertex label `{l}`")));
            }
        }
        let mut seen = HashSet::new();
        for a in &arrows {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::DuplicateEdge(a.id.clone()));
            }
            if a.tail >= n || a.head >= n {
                return Err(Error::BadEndpoint {
                    edge: a.id.clone(),
                    reason: format!("endpoint outside the {n} vertices"),
                });
            }
        }
        if let Some(inv) = &involution {
            check_involution(inv, n, &arrows)?;
        }
        Ok(Quiver {
            labels,
            arrows,
            involution,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn involution(&self) -> Option<&Involution> {
        self.involution.as_ref()
    }
}

fn check_involution(inv: &Involution, n: usize, arrows: &[Arrow]) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidGraph(msg));
    if inv.vertex.len() != n || inv.arrow.len() != arrows.len() {
        return bad("involution does not cover every vertex and arrow".into());
    }
    for (v, &w) in inv.vertex.iter().enumerate() {
        if w >= n || inv.vertex[w] != v {
            return bad(format!("vertex map is not self-inverse at {v}"));
        }
    }
    for (k, &l) in inv.arrow.iter().enumerate() {
        if l >= arrows.len() || inv.arrow[l] != k {
            return bad(format!(
                "arrow map is not self-inverse at `{}`",
                arrows[k].id
            ));
        }
        let (a, b) = (&arrows[k], &arrows[l]);
        if b.tail != inv.vertex[a.head] || b.head != inv.vertex[a.tail] {
            return bad(format!(
                "arrow `{}` must map to an arrow from head* to tail*, got `{}`",
                a.id, b.id
            ));
        }
    }
    Ok(())
}

impl GraphShape for Quiver {
    fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    fn edge_count(&self) -> usize {
        self.arrows.len()
    }

    fn edge(&self, k: usize) -> EdgeView<'_> {
        let a = &self.arrows[k];
        EdgeView {
            id: &a.id,
            tail: a.tail,
            head: a.head,
            kind: EdgeKind::Directed,
        }
    }

    fn vertex_label(&self, v: usize) -> String {
        self.labels[v].clone()
    }

    fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Serialize, Deserialize)]
struct ArrowDoc {
    id: String,
    tail: String,
    head: String,
}

#[derive(Serialize, Deserialize)]
struct InvolutionDoc {
    vertices: BTreeMap<String, String>,
    arrows: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct QuiverDoc {
    vertices: Vec<String>,
    arrows: Vec<ArrowDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    involution: Option<InvolutionDoc>,
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| ArrowDoc {
                id: a.id.clone(),
                tail: self.labels[a.tail].clone(),
                head: self.labels[a.head].clone(),
            })
            .collect();
        let involution = self.involution.as_ref().map(|inv| InvolutionDoc {
            vertices: inv
                .vertex
                .iter()
                .enumerate()
                .map(|(v, &w)| (self.labels[v].clone(), self.labels[w].clone()))
                .collect(),
            arrows: inv
                .arrow
                .iter()
                .enumerate()
                .map(|(k, &l)| (self.arrows[k].id.clone(), self.arrows[l].id.clone()))
                .collect(),
        });
        QuiverDoc {
            vertices: self.labels.clone(),
            arrows,
            involution,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = QuiverDoc::deserialize(d)?;
        let index: HashMap<&str, usize> = doc
            .vertices
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| D::Error::custom(format!("unknown vertex label `{l}`")))
        };
        let mut arrows = Vec::with_capacity(doc.arrows.len());
        for a in &doc.arrows {
            arrows.push(Arrow::new(a.id.clone(), lookup(&a.tail)?, lookup(&a.head)?));
        }
        let involution = match &doc.involution {
            None => None,
            Some(inv) => {
                let mut vertex = vec![usize::MAX; doc.vertices.len()];
                for (from, to) in &inv.vertices {
                    vertex[lookup(from)?] = lookup(to)?;
                }
                let arrow_index: HashMap<&str, usize> = arrows
                    .iter()
                    .enumerate()
                    .map(|(k, a)| (a.id.as_str(), k))
                    .collect();
                let arrow_lookup = |id: &str| {
                    arrow_index
                        .get(id)
                        .copied()
                        .ok_or_else(|| D::Error::custom(format!("unknown arrow `{id}`")))
                };
                let mut arrow = vec![usize::MAX; arrows.len()];
                for (from, to) in &inv.arrows {
                    arrow[arrow_lookup(from)?] = arrow_lookup(to)?;
                }
                Some(Involution { vertex, arrow })
            }
        };
        Quiver::new(doc.vertices.clone(), arrows, involution).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unnormalized_undirected_edge_is_rejected() {
        let err = BidirectedGraph::new(2, vec![Edge::undirected("a", 2, 1)]).unwrap_err();
        assert!(matches!(err, Error::BadEndpoint { .. }));
        // Directed edges may point either way.
        assert!(BidirectedGraph::new(2, vec![Edge::directed("a", 2, 1)]).is_ok());
    }

    #[test]
    fn endpoint_out_of_range() {
        let err = BidirectedGraph::new(2, vec![Edge::directed("a", 1, 3)]).unwrap_err();
        assert!(matches!(err, Error::BadEndpoint { .. }));
        let err = BidirectedGraph::new(2, vec![Edge::directed("a", 0, 1)]).unwrap_err();
        assert!(matches!(err, Error::BadEndpoint { .. }));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = BidirectedGraph::new(
            1,
            vec![Edge::directed("a", 1, 1), Edge::undirected("a", 1, 1)],
        )
        .unwrap_err();
        assert_eq!(err, Error::DuplicateEdge("a".into()));
    }

    #[test]
    fn loops_and_parallel_edges_allowed() {
        let g = BidirectedGraph::new(
            1,
            vec![
                Edge::directed("a", 1, 1),
                Edge::directed("b", 1, 1),
                Edge::undirected("c", 1, 1),
                Edge::bidirected("d", 1, 1),
            ],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(!g.is_quiver());
    }

    #[test]
    fn malformed_kind_is_a_parse_error() {
        let text = r#"{"t": 1, "edges": [{"id": "a", "tail": 1, "head": 1, "kind": "sideways"}]}"#;
        let err: Error = serde_json::from_str::<BidirectedGraph>(text)
            .unwrap_err()
            .into();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column > 0);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn involution_must_reverse_arrows() {
        let labels = vec!["1".into(), "1*".into()];
        let arrows = vec![Arrow::new("a", 0, 1), Arrow::new("a*", 0, 1)];
        // a: 1 → 1* must map to 1** → 1* = 1 → 1*, which a* is.
        let good = Involution {
            vertex: vec![1, 0],
            arrow: vec![1, 0],
        };
        assert!(Quiver::new(labels.clone(), arrows.clone(), Some(good)).is_ok());
        let arrows = vec![Arrow::new("a", 0, 1), Arrow::new("a*", 1, 0)];
        let bad = Involution {
            vertex: vec![1, 0],
            arrow: vec![1, 0],
        };
        assert!(Quiver::new(labels, arrows, Some(bad)).is_err());
    }

    #[test]
    fn quiver_json_round_trip() {
        let labels = vec!["1".into(), "1*".into()];
        let arrows = vec![Arrow::new("a", 0, 1), Arrow::new("a*", 0, 1)];
        let inv = Involution {
            vertex: vec![1, 0],
            arrow: vec![1, 0],
        };
        let q = Quiver::new(labels, arrows, Some(inv)).unwrap();
        let text = serde_json::to_string(&q).unwrap();
        let back: Quiver = serde_json::from_str(&text).unwrap();
        assert_eq!(q, back);
    }
}
