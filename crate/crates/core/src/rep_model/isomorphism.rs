use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graph::GraphShape;
use super::representation::{apply_isomorphism, DimensionVector, Representation};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, MatrixDoc};

/// A tuple `(S_1, …, S_t)` of invertible matrices, one per vertex.
///
/// The direction (which representation is the source) is fixed by whichever
/// function produced it; see [`Isomorphism::residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct Isomorphism {
    mats: Vec<CMatrix>,
}

impl Isomorphism {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        for (v, m) in mats.iter().enumerate() {
            if !linalg::is_invertible(m) {
                return Err(Error::SingularComponent { vertex: v });
            }
        }
        Ok(Isomorphism { mats })
    }

    pub fn identity(dims: &DimensionVector) -> Self {
        Isomorphism {
            mats: dims
                .as_slice()
                .iter()
                .map(|&n| linalg::identity(n))
                .collect(),
        }
    }

    pub fn components(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn into_components(self) -> Vec<CMatrix> {
        self.mats
    }

    pub fn dims(&self) -> DimensionVector {
        DimensionVector(self.mats.iter().map(|m| m.nrows()).collect())
    }

    /// `Σ_i ‖S_i − I‖_F`.
    pub fn deviation(&self) -> f64 {
        self.mats.iter().map(linalg::distance_to_identity).sum()
    }

    pub fn inverse(&self) -> Result<Isomorphism> {
        let mats = self
            .mats
            .iter()
            .enumerate()
            .map(|(v, m)| linalg::inverse(m).ok_or(Error::SingularComponent { vertex: v }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Isomorphism { mats })
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Isomorphism) -> Result<Isomorphism> {
        if self.dims() != first.dims() {
            return Err(Error::DimensionMismatch(
                "cannot compose isomorphisms of different dimensions".into(),
            ));
        }
        Ok(Isomorphism {
            mats: self
                .mats
                .iter()
                .zip(&first.mats)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// How far `self` is from carrying `source` onto `target`:
    /// `‖apply(source, self) − target‖ / max(1, ‖target‖)`.
    pub fn residual<G: GraphShape>(
        &self,
        source: &Representation<G>,
        target: &Representation<G>,
    ) -> Result<f64> {
        source.ensure_compatible(target)?;
        let image = apply_isomorphism(source, self)?;
        Ok(image.distance(target)? / target.norm().max(1.0))
    }

    pub fn to_json<G: GraphShape>(&self, graph: &G) -> String {
        serde_json::to_string_pretty(&self.to_doc(graph)).expect("isomorphism serializes")
    }

    pub fn to_doc<G: GraphShape>(&self, graph: &G) -> IsomorphismDoc {
        IsomorphismDoc {
            dims: self.dims(),
            mats: self
                .mats
                .iter()
                .enumerate()
                .map(|(v, m)| (graph.vertex_label(v), MatrixDoc::from(m)))
                .collect(),
        }
    }

    pub fn from_json<G: GraphShape>(text: &str, graph: &G) -> Result<Self> {
        let doc: IsomorphismDoc = serde_json::from_str(text)?;
        Self::from_doc(doc, graph)
    }

    pub fn from_doc<G: GraphShape>(doc: IsomorphismDoc, graph: &G) -> Result<Self> {
        let n = graph.vertex_count();
        if doc.dims.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} dimensions for {n} vertices",
                doc.dims.len()
            )));
        }
        let mut slots: Vec<Option<CMatrix>> = vec![None; n];
        for (label, m) in doc.mats {
            let v = graph
                .vertex_index(&label)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex `{label}`")))?;
            let m = CMatrix::try_from(m)?;
            if m.shape() != (doc.dims[v], doc.dims[v]) {
                return Err(Error::SingularComponent { vertex: v });
            }
            slots[v] = Some(m);
        }
        let mats = slots
            .into_iter()
            .enumerate()
            .map(|(v, m)| {
                m.ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "no matrix for vertex `{}`",
                        graph.vertex_label(v)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Isomorphism::new(mats)
    }
}

/// JSON form: `{"dims": [..], "mats": {"<vertex label>": <matrix>}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsomorphismDoc {
    pub dims: DimensionVector,
    pub mats: BTreeMap<String, MatrixDoc>,
}
