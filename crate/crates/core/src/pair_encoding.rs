//! Quiver representations as matrix pairs.
//!
//! Write `V = ⊕ ℂ^{n_v}`, `d = dim V` and `m = k + 1` for `k` arrows. The
//! pair is built from `m` copies of `V`:
//!
//! ```text
//! M = diag(1·I_V, 2·I_V, …, m·I_V)
//!
//! N = block (1,1):   E_0 = diag(1·I_{n_1}, …, t·I_{n_t})
//!     block (p,p+1): I_V                       p = 1..m-1
//!     block (p+1,1): arrow p, placed at vertex sub-block (head, tail)
//! ```
//!
//! A similarity `R` with `M R = R M` is block diagonal over the copies, the
//! links force all copies to agree, and `E_0` splits the common block along
//! the vertices. Two representations are therefore isomorphic exactly when
//! their pairs are similar, and the vertex blocks of `R` are the isomorphism.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rep_model::random::rng_from_seed;
use crate::rep_model::{DimensionVector, EdgeKind, GraphShape, Isomorphism, Representation};

/// Default relative tolerance for similarity checks and decoding.
pub const PAIR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixPair {
    #[serde(with = "crate::linalg::matrix_serde")]
    pub m: CMatrix,
    #[serde(with = "crate::linalg::matrix_serde")]
    pub n: CMatrix,
}

impl MatrixPair {
    pub fn new(m: CMatrix, n: CMatrix) -> Result<Self> {
        if !m.is_square() || m.shape() != n.shape() {
            return Err(Error::DimensionMismatch(format!(
                "pair needs square matrices of equal size, got {:?} and {:?}",
                m.shape(),
                n.shape()
            )));
        }
        Ok(MatrixPair { m, n })
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    /// `R⁻¹ (M, N) R`.
    pub fn conjugate(&self, r: &CMatrix) -> Result<MatrixPair> {
        let inv = linalg::inverse(r).ok_or(Error::SingularInput)?;
        MatrixPair::new(&inv * &self.m * r, &inv * &self.n * r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyBlock {
    /// 1-based copy index `p`.
    pub index: usize,
    /// Scalar on the diagonal of `M` in this copy.
    pub scalar: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowPlacement {
    pub arrow: String,
    /// 1-based copy block coordinates.
    pub block_row: usize,
    pub block_col: usize,
    /// Vertex labels of the sub-block inside the copy block.
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairLayout {
    pub vertices: Vec<String>,
    pub dims: DimensionVector,
    pub vertex_offsets: Vec<usize>,
    pub copy_size: usize,
    pub copies: Vec<CopyBlock>,
    /// Diagonal scalar of `E_0` on each vertex.
    pub markers: Vec<usize>,
    /// Copy blocks `(p, p+1)` holding identity links.
    pub links: Vec<(usize, usize)>,
    pub placements: Vec<ArrowPlacement>,
}

impl PairLayout {
    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    pub fn size(&self) -> usize {
        self.copy_size * self.copy_count()
    }
}

pub fn encode_pair<G: GraphShape>(rep: &Representation<G>) -> Result<(MatrixPair, PairLayout)> {
    let graph = rep.graph();
    if let Some(e) = graph.edges().find(|e| e.kind != EdgeKind::Directed) {
        return Err(Error::RouteMismatch {
            route: "pair".into(),
            reason: format!(
                "edge `{}` is not directed; double the representation first",
                e.id
            ),
        });
    }
    let dims = rep.dims().as_slice();
    let offsets = rep.dims().offsets();
    let d = rep.dims().total();
    let m = graph.edge_count() + 1;
    let size = m * d;

    let mut mm = CMatrix::zeros(size, size);
    for p in 0..m {
        for r in 0..d {
            mm[(p * d + r, p * d + r)] = linalg::c((p + 1) as f64, 0.0);
        }
    }

    let mut nn = CMatrix::zeros(size, size);
    for (v, (&off, &n)) in offsets.iter().zip(dims).enumerate() {
        for r in 0..n {
            nn[(off + r, off + r)] = linalg::c((v + 1) as f64, 0.0);
        }
    }
    for p in 0..m - 1 {
        for r in 0..d {
            nn[(p * d + r, (p + 1) * d + r)] = linalg::c(1.0, 0.0);
        }
    }
    let mut placements = Vec::with_capacity(graph.edge_count());
    for (p, (e, mat)) in graph.edges().zip(rep.matrices()).enumerate() {
        let row0 = (p + 1) * d + offsets[e.head];
        let col0 = offsets[e.tail];
        nn.view_mut((row0, col0), mat.shape()).copy_from(mat);
        placements.push(ArrowPlacement {
            arrow: e.id.to_string(),
            block_row: p + 2,
            block_col: 1,
            tail: graph.vertex_label(e.tail),
            head: graph.vertex_label(e.head),
        });
    }

    let layout = PairLayout {
        vertices: (0..graph.vertex_count())
            .map(|v| graph.vertex_label(v))
            .collect(),
        dims: rep.dims().clone(),
        vertex_offsets: offsets,
        copy_size: d,
        copies: (1..=m)
            .map(|p| CopyBlock {
                index: p,
                scalar: p,
                size: d,
            })
            .collect(),
        markers: (1..=dims.len()).collect(),
        links: (1..m).map(|p| (p, p + 1)).collect(),
        placements,
    };
    Ok((MatrixPair { m: mm, n: nn }, layout))
}

fn is_diagonal(m: &CMatrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(k, x)| k % (m.nrows() + 1) == 0 || *x == linalg::c(0.0, 0.0))
}

/// Orthonormal basis of `{R : M₁R = RM₂, N₁R = RN₂}`.
pub fn pair_intertwiners(p1: &MatrixPair, p2: &MatrixPair) -> Result<Vec<CMatrix>> {
    let size = p1.size();
    if p2.size() != size {
        return Err(Error::DimensionMismatch(format!(
            "pair sizes {} and {}",
            size,
            p2.size()
        )));
    }
    // With both M diagonal, R can only be supported where the scalars match.
    let diagonal = is_diagonal(&p1.m) && is_diagonal(&p2.m);
    let support: Vec<(usize, usize)> = (0..size)
        .flat_map(|b| (0..size).map(move |a| (a, b)))
        .filter(|&(a, b)| {
            !diagonal || {
                let (x, y) = (p1.m[(a, a)], p2.m[(b, b)]);
                (x - y).norm() <= 1e-12 * x.norm().max(y.norm()).max(1.0)
            }
        })
        .collect();
    let mut index = vec![usize::MAX; size * size];
    for (k, &(a, b)) in support.iter().enumerate() {
        index[a + b * size] = k;
    }
    let var = |a: usize, b: usize| Some(index[a + b * size]).filter(|&k| k != usize::MAX);

    let mut equations: Vec<(&CMatrix, &CMatrix)> = vec![(&p1.n, &p2.n)];
    if !diagonal {
        equations.push((&p1.m, &p2.m));
    }
    let mut rows = Vec::new();
    for (x1, x2) in equations {
        for b in 0..size {
            for a in 0..size {
                // (X₁R − RX₂)(a, b)
                let mut row = vec![linalg::c(0.0, 0.0); support.len()];
                let mut touched = false;
                for c in 0..size {
                    let u = x1[(a, c)];
                    if u != linalg::c(0.0, 0.0) {
                        if let Some(k) = var(c, b) {
                            row[k] += u;
                            touched = true;
                        }
                    }
                    let w = x2[(c, b)];
                    if w != linalg::c(0.0, 0.0) {
                        if let Some(k) = var(a, c) {
                            row[k] -= w;
                            touched = true;
                        }
                    }
                }
                if touched {
                    rows.push(row);
                }
            }
        }
    }
    let k = CMatrix::from_fn(rows.len(), support.len(), |r, c| rows[r][c]);
    let scale = [&p1.m, &p1.n, &p2.m, &p2.n]
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    Ok(linalg::nullspace(&k, linalg::NULLSPACE_RTOL, scale)
        .into_iter()
        .map(|x| {
            let mut r = CMatrix::zeros(size, size);
            for (k, &(a, b)) in support.iter().enumerate() {
                r[(a, b)] = x[k];
            }
            r
        })
        .collect())
}

fn similarity_residual(p1: &MatrixPair, p2: &MatrixPair, r: &CMatrix) -> f64 {
    let scale = r.norm() * p1.m.norm().max(p1.n.norm()).max(1.0);
    ((&p1.m * r - r * &p2.m).norm() + (&p1.n * r - r * &p2.n).norm()) / scale
}

/// Looks for `R` with `R⁻¹M₁R = M₂` and `R⁻¹N₁R = N₂`.
pub fn pairs_similar(
    p1: &MatrixPair,
    p2: &MatrixPair,
    seed: u64,
    tol: f64,
) -> Result<Option<CMatrix>> {
    let basis = pair_intertwiners(p1, p2)?;
    if p1.size() == 0 {
        return Ok(Some(CMatrix::zeros(0, 0)));
    }
    if basis.is_empty() {
        return Ok(None);
    }
    let mut rng = rng_from_seed(seed);
    let mut ambiguous = None;
    for _ in 0..crate::iso_solver::DECISION_ATTEMPTS {
        let mut r = CMatrix::zeros(p1.size(), p1.size());
        for b in &basis {
            r += b * linalg::complex_gaussian(&mut rng);
        }
        let ratio = linalg::singular_value_ratio(&r);
        if ratio > 10.0 * tol {
            if similarity_residual(p1, p2, &r) <= tol {
                return Ok(Some(r));
            }
        } else if ratio > tol {
            ambiguous = Some(ratio);
        }
    }
    match ambiguous {
        Some(ratio) => Err(Error::ToleranceAmbiguous { ratio }),
        None => Ok(None),
    }
}

/// The similarity intertwiner closest to the identity.
pub fn nearest_identity_similarity(p1: &MatrixPair, p2: &MatrixPair) -> Result<CMatrix> {
    let mut r = CMatrix::zeros(p1.size(), p1.size());
    for b in pair_intertwiners(p1, p2)? {
        let ip: num_complex::Complex64 = b.diagonal().iter().map(|x| x.conj()).sum();
        r += b * ip;
    }
    Ok(r)
}

/// Splits a similarity `R` between `encode(A)` and `encode(B)` into the
/// vertex blocks of its first copy. Those blocks map `B` onto `A`.
///
/// `NotBlockDiagonal` reports copy blocks, or `(0, 0)`-based vertex blocks
/// inside the first copy when the copies agree but do not split.
pub fn decode_similarity(r: &CMatrix, layout: &PairLayout, tol: f64) -> Result<Isomorphism> {
    let d = layout.copy_size;
    let m = layout.copy_count();
    if r.shape() != (layout.size(), layout.size()) {
        return Err(Error::DimensionMismatch(format!(
            "similarity is {:?}, layout expects {}x{}",
            r.shape(),
            layout.size(),
            layout.size()
        )));
    }
    let scale = r.norm().max(f64::MIN_POSITIVE);
    let block = |p: usize, q: usize| r.view((p * d, q * d), (d, d));
    for p in 0..m {
        for q in 0..m {
            if p != q {
                let mass = block(p, q).norm() / scale;
                if mass > tol {
                    return Err(Error::NotBlockDiagonal {
                        row: p + 1,
                        col: q + 1,
                        mass,
                    });
                }
            }
        }
    }
    for p in 0..m.saturating_sub(1) {
        let diff = (block(p, p) - block(p + 1, p + 1)).norm() / scale;
        if diff > tol {
            return Err(Error::CopiesDisagree { copy: p + 1, diff });
        }
    }
    let dims = layout.dims.as_slice();
    let off = &layout.vertex_offsets;
    let first = block(0, 0);
    for (u, (&ou, &nu)) in off.iter().zip(dims).enumerate() {
        for (v, (&ov, &nv)) in off.iter().zip(dims).enumerate() {
            if u != v {
                let mass = first.view((ou, ov), (nu, nv)).norm() / scale;
                if mass > tol {
                    return Err(Error::NotBlockDiagonal {
                        row: u + 1,
                        col: v + 1,
                        mass,
                    });
                }
            }
        }
    }
    Isomorphism::new(
        off.iter()
            .zip(dims)
            .map(|(&o, &n)| first.view((o, o), (n, n)).into_owned())
            .collect(),
    )
}

/// Nearest-identity isomorphism `B → A` obtained through the pair encoding.
pub fn recover_via_pair<G: GraphShape>(
    a: &Representation<G>,
    b: &Representation<G>,
) -> Result<Isomorphism> {
    let (pa, layout) = encode_pair(a)?;
    let (pb, layout_b) = encode_pair(b)?;
    if layout != layout_b {
        return Err(Error::DimensionMismatch(
            "representations encode to different layouts".into(),
        ));
    }
    let r = nearest_identity_similarity(&pa, &pb)?;
    let worst = linalg::singular_value_ratio(&r);
    if worst <= linalg::INVERTIBILITY_RTOL {
        return Err(Error::NotIsomorphicOrTooFar(format!(
            "closest pair similarity is singular (singular value ratio {worst:e})"
        )));
    }
    decode_similarity(&r, &layout, PAIR_TOL)
}
