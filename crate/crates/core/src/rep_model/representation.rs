use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::graph::{EdgeKind, GraphShape};
use super::isomorphism::Isomorphism;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, MatrixDoc};

/// `(n_1, …, n_t)`: one space dimension per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(pub Vec<usize>);

impl DimensionVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Start of each vertex inside the direct sum `⊕ ℂ^{n_i}`.
    pub fn offsets(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &n| {
                let start = *acc;
                *acc += n;
                Some(start)
            })
            .collect()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for DimensionVector {
    fn from(v: Vec<usize>) -> Self {
        DimensionVector(v)
    }
}

impl From<&[usize]> for DimensionVector {
    fn from(v: &[usize]) -> Self {
        DimensionVector(v.to_vec())
    }
}

impl std::ops::Index<usize> for DimensionVector {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// A matrix representation: one complex matrix per edge, shaped by the
/// dimension vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<G> {
    graph: G,
    dims: DimensionVector,
    mats: Vec<CMatrix>,
}

impl<G: GraphShape> Representation<G> {
    /// Builds a representation from `(edge id, matrix)` pairs in any order.
    pub fn new(
        graph: G,
        dims: impl Into<DimensionVector>,
        matrices: impl IntoIterator<Item = (String, CMatrix)>,
    ) -> Result<Self> {
        let dims = dims.into();
        let mut slots: Vec<Option<CMatrix>> = vec![None; graph.edge_count()];
        for (id, m) in matrices {
            let k = graph
                .edge_index(&id)
                .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
            if slots[k].replace(m).is_some() {
                return Err(Error::DuplicateEdge(id));
            }
        }
        let mats = slots
            .into_iter()
            .enumerate()
            .map(|(k, m)| m.ok_or_else(|| Error::MissingMatrix(graph.edge(k).id.to_owned())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edge_matrices(graph, dims, mats)
    }

    /// Builds a representation from matrices listed in edge order.
    pub fn from_edge_matrices(
        graph: G,
        dims: impl Into<DimensionVector>,
        mats: Vec<CMatrix>,
    ) -> Result<Self> {
        let rep = Representation {
            graph,
            dims: dims.into(),
            mats,
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn zero(graph: G, dims: impl Into<DimensionVector>) -> Result<Self> {
        let dims = dims.into();
        if dims.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} dimensions for {} vertices",
                dims.len(),
                graph.vertex_count()
            )));
        }
        let mats = graph
            .edges()
            .map(|e| {
                let (r, c) = e.matrix_shape(dims.as_slice());
                CMatrix::zeros(r, c)
            })
            .collect();
        Self::from_edge_matrices(graph, dims, mats)
    }

    /// Checks the dimension vector and every matrix shape.
    pub fn validate(&self) -> Result<()> {
        if self.dims.len() != self.graph.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} dimensions for {} vertices",
                self.dims.len(),
                self.graph.vertex_count()
            )));
        }
        if self.mats.len() != self.graph.edge_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} edges",
                self.mats.len(),
                self.graph.edge_count()
            )));
        }
        for (e, m) in self.graph.edges().zip(&self.mats) {
            let (rows, cols) = e.matrix_shape(self.dims.as_slice());
            if m.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch {
                    edge: e.id.to_owned(),
                    expected_rows: rows,
                    expected_cols: cols,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &G {
        &self.graph
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    /// Matrices in edge order.
    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn matrix(&self, id: &str) -> Option<&CMatrix> {
        self.graph.edge_index(id).map(|k| &self.mats[k])
    }

    pub fn into_parts(self) -> (G, DimensionVector, Vec<CMatrix>) {
        (self.graph, self.dims, self.mats)
    }

    /// `‖A‖`: sum of the Frobenius norms of the edge matrices.
    pub fn norm(&self) -> f64 {
        self.mats.iter().map(linalg::frobenius).sum()
    }

    /// `‖self − other‖` for two representations of the same graph and
    /// dimension.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.ensure_compatible(other)?;
        Ok(self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| linalg::frobenius(&(a - b)))
            .sum())
    }

    pub(crate) fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.graph != other.graph {
            return Err(Error::InvalidArgument(
                "representations live on different graphs".into(),
            ));
        }
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims.0, other.dims.0
            )));
        }
        Ok(())
    }

    /// Replaces the matrices, keeping graph and dimensions.
    pub fn with_matrices(&self, mats: Vec<CMatrix>) -> Result<Self> {
        Self::from_edge_matrices(self.graph.clone(), self.dims.clone(), mats)
    }
}

/// Transforms `rep` by `iso = (S_1, …, S_t)`.
///
/// Per edge: a map `i → j` becomes `S_j M S_i⁻¹`, a form on `i, j` becomes
/// `S_i⁻ᵀ M S_j⁻¹`, and a form on the duals becomes `S_i M S_jᵀ`.
pub fn apply_isomorphism<G: GraphShape>(
    rep: &Representation<G>,
    iso: &Isomorphism,
) -> Result<Representation<G>> {
    if iso.dims() != rep.dims {
        return Err(Error::DimensionMismatch(format!(
            "isomorphism has dimensions {:?}, representation {:?}",
            iso.dims().0,
            rep.dims.0
        )));
    }
    let inv = iso.inverse()?;
    let s = iso.components();
    let s_inv = inv.components();
    let mats = rep
        .graph
        .edges()
        .zip(&rep.mats)
        .map(|(e, m)| {
            let (i, j) = (e.tail, e.head);
            match e.kind {
                EdgeKind::Directed => &s[j] * m * &s_inv[i],
                EdgeKind::Undirected => s_inv[i].transpose() * m * &s_inv[j],
                EdgeKind::Bidirected => &s[i] * m * s[j].transpose(),
            }
        })
        .collect();
    Ok(Representation {
        graph: rep.graph.clone(),
        dims: rep.dims.clone(),
        mats,
    })
}

#[derive(Serialize, Deserialize)]
struct RepDoc<G> {
    graph: G,
    dims: DimensionVector,
    matrices: BTreeMap<String, MatrixDoc>,
}

impl<G: GraphShape + Serialize> Serialize for Representation<G> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepDoc {
            graph: self.graph.clone(),
            dims: self.dims.clone(),
            matrices: self
                .graph
                .edges()
                .zip(&self.mats)
                .map(|(e, m)| (e.id.to_owned(), MatrixDoc::from(m)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<G: GraphShape + Serialize + DeserializeOwned> Representation<G> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("representation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RepDoc<G> = serde_json::from_str(text)?;
        let mats = doc
            .matrices
            .into_iter()
            .map(|(id, m)| Ok((id, CMatrix::try_from(m)?)))
            .collect::<Result<Vec<_>>>()?;
        Representation::new(doc.graph, doc.dims, mats)
    }
}
