//! Deciding isomorphism and building isomorphisms.
//!
//! For quivers every intertwining condition `X_j M^A_β = M^B_β X_i` is
//! linear, so the intertwiners form a subspace computed as a nullspace. An
//! isomorphism is a generic element of that subspace, and the intertwiner
//! nearest to the identity is the orthogonal projection of the identity onto
//! it.
//!
//! For bidirected graphs the two representations are doubled first. An
//! isomorphism `ψ` of the doubled representations is turned into one of the
//! originals by
//!
//! ```text
//! T_i = Ψ_{i*}ᵀ Ψ_i,   W_i = f(T_i) with f(T)² = T,   φ_i = Ψ_{i*}⁻ᵀ W_i
//! ```
//!
//! where `f` is one primary square root shared by every vertex.

use serde::{Deserialize, Serialize};

use crate::doubling::{underline_rep, DoubledQuiver};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, INVERTIBILITY_RTOL, NULLSPACE_RTOL};
use crate::matfun::{self, SqrtResult};
use crate::pair_encoding;
use crate::rep_model::random::rng_from_seed;
use crate::rep_model::{
    BidirectedRep, DimensionVector, EdgeKind, GraphShape, Isomorphism, Representation,
};

/// Returned isomorphisms must carry source onto target to this relative
/// residual.
pub const ISO_RESIDUAL_TOL: f64 = 1e-8;

/// Random elements drawn before concluding that no isomorphism exists.
pub const DECISION_ATTEMPTS: usize = 8;

/// Orthonormal basis of the intertwiners from `source` to `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomBasis {
    pub source_dims: DimensionVector,
    pub target_dims: DimensionVector,
    /// Each element is a tuple `(X_1, …, X_t)`, `X_v` of size
    /// `target n_v × source n_v`.
    pub basis: Vec<Vec<CMatrix>>,
}

impl HomBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `Σ_k coeffs[k] · basis[k]`.
    pub fn combine(&self, coeffs: &[num_complex::Complex64]) -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = self
            .target_dims
            .as_slice()
            .iter()
            .zip(self.source_dims.as_slice())
            .map(|(&r, &c)| CMatrix::zeros(r, c))
            .collect();
        for (b, &a) in self.basis.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += x * a;
            }
        }
        out
    }
}

fn ensure_quiver<G: GraphShape>(graph: &G) -> Result<()> {
    match graph.edges().find(|e| e.kind != EdgeKind::Directed) {
        Some(e) => Err(Error::RouteMismatch {
            route: "quiver".into(),
            reason: format!(
                "edge `{}` is not directed; double the representation first",
                e.id
            ),
        }),
        None => Ok(()),
    }
}

/// Intertwiners `X` with `X_j M^A_β = M^B_β X_i` for every arrow `β: i → j`.
pub fn hom_space<G: GraphShape>(a: &Representation<G>, b: &Representation<G>) -> Result<HomBasis> {
    if a.graph() != b.graph() {
        return Err(Error::InvalidArgument(
            "representations live on different graphs".into(),
        ));
    }
    ensure_quiver(a.graph())?;
    let (da, db) = (a.dims().as_slice(), b.dims().as_slice());
    let t = da.len();

    // X_v is db[v] × da[v], stored column-major from offset[v].
    let mut offset = Vec::with_capacity(t);
    let mut unknowns = 0;
    for v in 0..t {
        offset.push(unknowns);
        unknowns += da[v] * db[v];
    }
    let var = |v: usize, r: usize, s: usize| offset[v] + r + s * db[v];

    let rows: usize = a.graph().edges().map(|e| db[e.head] * da[e.tail]).sum();
    let mut k = CMatrix::zeros(rows, unknowns);
    let mut row0 = 0;
    for ((e, ma), mb) in a.graph().edges().zip(a.matrices()).zip(b.matrices()) {
        let (i, j) = (e.tail, e.head);
        // Equation entry (r, c) lives in row row0 + r + c·db[j].
        for c in 0..da[i] {
            for r in 0..db[j] {
                let row = row0 + r + c * db[j];
                for s in 0..da[j] {
                    k[(row, var(j, r, s))] += ma[(s, c)];
                }
                for s in 0..db[i] {
                    k[(row, var(i, s, c))] -= mb[(r, s)];
                }
            }
        }
        row0 += db[j] * da[i];
    }

    let scale = a.norm().max(b.norm());
    let basis = linalg::nullspace(&k, NULLSPACE_RTOL, scale)
        .into_iter()
        .map(|x| {
            (0..t)
                .map(|v| CMatrix::from_fn(db[v], da[v], |r, s| x[var(v, r, s)]))
                .collect()
        })
        .collect();
    Ok(HomBasis {
        source_dims: a.dims().clone(),
        target_dims: b.dims().clone(),
        basis,
    })
}

enum Draw {
    Found(Isomorphism),
    Ambiguous(f64),
    Singular,
}

fn classify_ratio(ratio: f64, threshold: f64) -> Option<bool> {
    if ratio > 10.0 * threshold {
        Some(true)
    } else if ratio > threshold {
        None
    } else {
        Some(false)
    }
}

/// Searches for an isomorphism `A → B` among random elements of the hom space.
///
/// Returns `Ok(None)` when no draw is invertible, and `ToleranceAmbiguous`
/// when the best draw sits inside the band `(1, 10] × threshold`.
pub fn decide_iso_quiver<G: GraphShape>(
    a: &Representation<G>,
    b: &Representation<G>,
    seed: u64,
    tol: f64,
) -> Result<Option<Isomorphism>> {
    a.ensure_compatible(b)?;
    let hom = hom_space(a, b)?;
    if a.dims().as_slice().iter().all(|&n| n == 0) {
        return Ok(Some(Isomorphism::identity(a.dims())));
    }
    if hom.dimension() == 0 {
        return Ok(None);
    }
    let mut rng = rng_from_seed(seed);
    let mut ambiguous = None;
    for _ in 0..DECISION_ATTEMPTS {
        let coeffs: Vec<_> = (0..hom.dimension())
            .map(|_| linalg::complex_gaussian(&mut rng))
            .collect();
        match classify_draw(hom.combine(&coeffs), INVERTIBILITY_RTOL) {
            Draw::Found(iso) => {
                if iso.residual(a, b)? <= tol {
                    return Ok(Some(iso));
                }
            }
            Draw::Ambiguous(r) => ambiguous = Some(r),
            Draw::Singular => {}
        }
    }
    match ambiguous {
        Some(ratio) => Err(Error::ToleranceAmbiguous { ratio }),
        None => Ok(None),
    }
}

fn classify_draw(mats: Vec<CMatrix>, threshold: f64) -> Draw {
    let worst = mats
        .iter()
        .map(linalg::singular_value_ratio)
        .fold(1.0, f64::min);
    match classify_ratio(worst, threshold) {
        Some(true) => match Isomorphism::new(mats) {
            Ok(iso) => Draw::Found(iso),
            Err(_) => Draw::Singular,
        },
        Some(false) => Draw::Singular,
        None => Draw::Ambiguous(worst),
    }
}

/// The intertwiner `B → A` closest to the identity tuple in the summed
/// Frobenius norm. Not necessarily invertible.
pub fn nearest_identity_intertwiner<G: GraphShape>(
    a: &Representation<G>,
    b: &Representation<G>,
) -> Result<Vec<CMatrix>> {
    a.ensure_compatible(b)?;
    let hom = hom_space(b, a)?;
    let coeffs: Vec<_> = hom
        .basis
        .iter()
        .map(|x| {
            x.iter()
                .map(|m| {
                    (0..m.nrows())
                        .map(|d| m[(d, d)].conj())
                        .sum::<num_complex::Complex64>()
                })
                .sum()
        })
        .collect();
    Ok(hom.combine(&coeffs))
}

/// `ψ° = (Ψ_{1*}ᵀ, …, Ψ_{t*}ᵀ, Ψ_1ᵀ, …, Ψ_tᵀ)`: for `ψ: X → Y` between
/// doubled representations, `ψ°: Y → X`.
pub fn adjoint_iso(psi: &Isomorphism) -> Result<Isomorphism> {
    let comps = psi.components();
    if !comps.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "adjoint needs an isomorphism of a doubled quiver".into(),
        ));
    }
    let t = comps.len() / 2;
    Isomorphism::new(
        (0..2 * t)
            .map(|v| comps[(v + t) % (2 * t)].transpose())
            .collect(),
    )
}

/// Intermediate values of the square-root correction.
#[derive(Debug, Clone)]
pub struct Correction {
    /// `T_i = Ψ_{i*}ᵀ Ψ_i`.
    pub t_mats: Vec<CMatrix>,
    pub roots: Vec<SqrtResult>,
    pub phi: Isomorphism,
}

/// Runs the correction on the components of `ψ` without checking the result
/// against any representation.
pub fn correction_parts(psi: &Isomorphism) -> Result<Correction> {
    let comps = psi.components();
    if !comps.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "correction needs an isomorphism of a doubled quiver".into(),
        ));
    }
    let t = comps.len() / 2;
    let t_mats: Vec<CMatrix> = (0..t)
        .map(|i| comps[i + t].transpose() * &comps[i])
        .collect();
    let roots = matfun::blockwise_primary_sqrt(&t_mats, matfun::DEFAULT_SQRT_TOL)?;
    let phi = (0..t)
        .map(|i| {
            let inv =
                linalg::inverse(&comps[i + t]).ok_or(Error::SingularComponent { vertex: i + t })?;
            Ok(inv.transpose() * &roots[i].w)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Correction {
        t_mats,
        roots,
        phi: Isomorphism::new(phi)?,
    })
}

/// Turns `ψ: underline(source) → underline(target)` into an isomorphism
/// `source → target`, verified before it is returned.
pub fn correct_to_bidirected_iso(
    psi: &Isomorphism,
    source: &BidirectedRep,
    target: &BidirectedRep,
    tol: f64,
) -> Result<Isomorphism> {
    source.ensure_compatible(target)?;
    if psi.dims() != DoubledQuiver::doubled_dims(source.dims()) {
        return Err(Error::DimensionMismatch(
            "ψ does not match the doubled dimensions".into(),
        ));
    }
    let phi = correction_parts(psi)?.phi;
    let residual = phi.residual(source, target)?;
    if residual > tol {
        return Err(Error::CorrectionFailed { residual });
    }
    Ok(phi)
}

/// Searches for an isomorphism `B → A` of bidirected-graph representations
/// through their doublings.
pub fn decide_iso_bidirected(
    a: &BidirectedRep,
    b: &BidirectedRep,
    seed: u64,
    tol: f64,
) -> Result<Option<Isomorphism>> {
    a.ensure_compatible(b)?;
    let (ua, ub) = (underline_rep(a), underline_rep(b));
    match decide_iso_quiver(&ub, &ua, seed, tol)? {
        Some(psi) => correct_to_bidirected_iso(&psi, b, a, tol).map(Some),
        None => Ok(None),
    }
}

/// Decides isomorphism, doubling only when the graph needs it. The witness
/// maps `B → A` on either path.
pub fn decide_iso(
    a: &BidirectedRep,
    b: &BidirectedRep,
    seed: u64,
    tol: f64,
) -> Result<Option<Isomorphism>> {
    if a.graph().is_quiver() {
        decide_iso_quiver(b, a, seed, tol)
    } else {
        decide_iso_bidirected(a, b, seed, tol)
    }
}

/// Which machinery recovers the quiver-level isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Projection onto the hom space of a quiver representation.
    QuiverDirect,
    /// Projection onto the similarity intertwiners of the encoded pairs.
    Pair,
    /// Doubling, hom-space projection, then the square-root correction.
    BidirectedDoubled,
}

impl Route {
    pub fn for_graph<G: GraphShape>(graph: &G) -> Route {
        if graph.is_quiver() {
            Route::QuiverDirect
        } else {
            Route::BidirectedDoubled
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Route::QuiverDirect => "quiver-direct",
            Route::Pair => "pair",
            Route::BidirectedDoubled => "bidirected-doubled",
        }
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" | "quiver-direct" => Ok(Route::QuiverDirect),
            "pair" => Ok(Route::Pair),
            "doubled" | "bidirected-doubled" => Ok(Route::BidirectedDoubled),
            other => Err(Error::InvalidArgument(format!("unknown route `{other}`"))),
        }
    }
}

/// A verified isomorphism `B → A` together with its residual.
#[derive(Debug, Clone)]
pub struct Recovery {
    pub iso: Isomorphism,
    pub residual: f64,
    pub route: Route,
}

fn into_isomorphism(mats: Vec<CMatrix>) -> Result<Isomorphism> {
    let worst = mats
        .iter()
        .map(linalg::singular_value_ratio)
        .fold(1.0, f64::min);
    if worst <= INVERTIBILITY_RTOL {
        return Err(Error::NotIsomorphicOrTooFar(format!(
            "closest intertwiner is singular (singular value ratio {worst:e})"
        )));
    }
    Isomorphism::new(mats)
}

fn verified(
    iso: Isomorphism,
    b: &BidirectedRep,
    a: &BidirectedRep,
    route: Route,
) -> Result<Recovery> {
    let residual = iso.residual(b, a)?;
    if residual > ISO_RESIDUAL_TOL {
        return Err(Error::NotIsomorphicOrTooFar(format!(
            "isomorphism residual {residual:e}"
        )));
    }
    Ok(Recovery {
        iso,
        residual,
        route,
    })
}

/// Recovers an isomorphism `B → A` close to the identity.
pub fn recover_near_identity(a: &BidirectedRep, b: &BidirectedRep) -> Result<Recovery> {
    recover_with_route(a, b, Route::for_graph(a.graph()))
}

pub fn recover_with_route(a: &BidirectedRep, b: &BidirectedRep, route: Route) -> Result<Recovery> {
    a.ensure_compatible(b)?;
    match route {
        Route::QuiverDirect => {
            ensure_route(a, route)?;
            let iso = into_isomorphism(nearest_identity_intertwiner(a, b)?)?;
            verified(iso, b, a, route)
        }
        Route::Pair => {
            ensure_route(a, route)?;
            let iso = pair_encoding::recover_via_pair(a, b)?;
            verified(iso, b, a, route)
        }
        Route::BidirectedDoubled => {
            let psi = doubled_psi(a, b)?;
            let iso =
                correct_to_bidirected_iso(&psi, b, a, ISO_RESIDUAL_TOL).map_err(|e| match e {
                    Error::CorrectionFailed { residual } => Error::NotIsomorphicOrTooFar(format!(
                        "corrected isomorphism residual {residual:e}"
                    )),
                    other => other,
                })?;
            verified(iso, b, a, route)
        }
    }
}

/// The nearest-identity isomorphism `underline(B) → underline(A)`.
pub fn doubled_psi(a: &BidirectedRep, b: &BidirectedRep) -> Result<Isomorphism> {
    let (ua, ub) = (underline_rep(a), underline_rep(b));
    into_isomorphism(nearest_identity_intertwiner(&ua, &ub)?)
}

fn ensure_route(a: &BidirectedRep, route: Route) -> Result<()> {
    if a.graph().is_quiver() {
        Ok(())
    } else {
        Err(Error::RouteMismatch {
            route: route.to_string(),
            reason: "graph has undirected or bidirected edges; use the doubled route".into(),
        })
    }
}

/// A random automorphism of `rep`: a generic element of its endomorphism
/// space, redrawn until invertible. `near_identity = Some(ε)` instead returns
/// `I + ε X / ‖X‖` for a random endomorphism `X`.
pub fn random_automorphism<G: GraphShape>(
    rep: &Representation<G>,
    near_identity: Option<f64>,
    seed: u64,
) -> Result<Isomorphism> {
    let end = hom_space(rep, rep)?;
    let mut rng = rng_from_seed(seed);
    for _ in 0..64 {
        let coeffs: Vec<_> = (0..end.dimension())
            .map(|_| linalg::complex_gaussian(&mut rng))
            .collect();
        let x = end.combine(&coeffs);
        let mats = match near_identity {
            None => x,
            Some(eps) => {
                let norm: f64 = x.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt();
                let scale = if norm > 0.0 { eps / norm } else { 0.0 };
                x.into_iter()
                    .map(|m| linalg::identity(m.nrows()) + m.scale(scale))
                    .collect()
            }
        };
        if mats.iter().all(|m| linalg::singular_value_ratio(m) > 1e-3) {
            return Isomorphism::new(mats);
        }
    }
    Err(Error::InvalidArgument(
        "could not draw an invertible automorphism".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doubling::underline_iso;
    use crate::linalg::{c, from_real_rows};
    use crate::rep_model::random::{random_bidirected_graph, random_isomorphism};
    use crate::rep_model::{
        apply_isomorphism, random_near_identity_iso, random_representation, BidirectedGraph, Edge,
    };

    fn one_loop(m: CMatrix, kind: EdgeKind) -> BidirectedRep {
        let n = m.nrows();
        let g = BidirectedGraph::new(1, vec![Edge::new("a", 1, 1, kind)]).unwrap();
        BidirectedRep::from_edge_matrices(g, vec![n], vec![m]).unwrap()
    }

    #[test]
    fn unconstrained_vertex_has_full_hom() {
        let g = BidirectedGraph::new(1, vec![]).unwrap();
        let a = BidirectedRep::zero(g, vec![3]).unwrap();
        assert_eq!(hom_space(&a, &a).unwrap().dimension(), 9);
    }

    #[test]
    fn jordan_block_endomorphisms() {
        let a = one_loop(
            from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            EdgeKind::Directed,
        );
        let hom = hom_space(&a, &a).unwrap();
        assert_eq!(hom.dimension(), 2);
        for x in &hom.basis {
            let m = a.matrices()[0].clone();
            assert!((&x[0] * &m - &m * &x[0]).norm() < 1e-12);
        }
        // Orthonormal under the entrywise inner product.
        for (p, x) in hom.basis.iter().enumerate() {
            for (q, y) in hom.basis.iter().enumerate() {
                let ip: num_complex::Complex64 = x[0]
                    .iter()
                    .zip(y[0].iter())
                    .map(|(u, v)| u.conj() * v)
                    .sum();
                let expected = if p == q { 1.0 } else { 0.0 };
                assert!((ip - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_and_one_loops_share_no_maps() {
        let a = one_loop(from_real_rows(1, 1, &[0.0]), EdgeKind::Directed);
        let b = one_loop(from_real_rows(1, 1, &[1.0]), EdgeKind::Directed);
        assert_eq!(hom_space(&a, &b).unwrap().dimension(), 0);
        assert!(decide_iso_quiver(&a, &b, 1, ISO_RESIDUAL_TOL)
            .unwrap()
            .is_none());
    }

    #[test]
    fn decides_conjugated_quiver_reps() {
        let g = random_bidirected_graph(3, 4, &[EdgeKind::Directed], 2).unwrap();
        let a = random_representation(&g, vec![2, 3, 1], 1.0, 3).unwrap();
        let phi = random_isomorphism(a.dims(), 4).unwrap();
        let b = apply_isomorphism(&a, &phi).unwrap();
        let found = decide_iso_quiver(&a, &b, 5, ISO_RESIDUAL_TOL)
            .unwrap()
            .unwrap();
        assert!(found.residual(&a, &b).unwrap() <= 1e-8);
        let auto = decide_iso_quiver(&a, &a, 5, ISO_RESIDUAL_TOL)
            .unwrap()
            .unwrap();
        assert!(auto.residual(&a, &a).unwrap() <= 1e-8);
    }

    #[test]
    fn nearest_identity_is_identity_for_equal_reps() {
        let g = random_bidirected_graph(2, 3, &[EdgeKind::Directed], 6).unwrap();
        let a = random_representation(&g, vec![2, 2], 1.0, 7).unwrap();
        let x = nearest_identity_intertwiner(&a, &a).unwrap();
        let dev: f64 = x.iter().map(linalg::distance_to_identity).sum();
        assert!(dev < 1e-12);
    }

    #[test]
    fn nearest_identity_beats_the_true_inverse() {
        let g = random_bidirected_graph(2, 2, &[EdgeKind::Directed], 8).unwrap();
        let a = random_representation(&g, vec![2, 3], 1.0, 9).unwrap();
        let phi = random_near_identity_iso(a.dims(), 1e-3, 10).unwrap();
        let b = apply_isomorphism(&a, &phi).unwrap();
        let feasible = phi.inverse().unwrap().deviation();
        let rec = recover_near_identity(&a, &b).unwrap();
        assert!(rec.iso.deviation() <= feasible + 1e-9);
    }

    #[test]
    fn trivial_hom_space_gives_zero_projection() {
        let a = one_loop(from_real_rows(1, 1, &[0.0]), EdgeKind::Directed);
        let b = one_loop(from_real_rows(1, 1, &[1.0]), EdgeKind::Directed);
        let x = nearest_identity_intertwiner(&a, &b).unwrap();
        assert_eq!(x[0].norm(), 0.0);
        assert!(matches!(
            recover_near_identity(&a, &b),
            Err(Error::NotIsomorphicOrTooFar(_))
        ));
    }

    #[test]
    fn adjoint_examples() {
        let p = from_real_rows(1, 1, &[2.0]);
        let q = from_real_rows(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let r = from_real_rows(1, 1, &[3.0]);
        let s = from_real_rows(2, 2, &[1.0, 0.0, 5.0, 1.0]);
        let psi = Isomorphism::new(vec![p.clone(), q.clone(), r.clone(), s.clone()]).unwrap();
        let adj = adjoint_iso(&psi).unwrap();
        assert_eq!(
            adj.components(),
            [r.transpose(), s.transpose(), p.transpose(), q.transpose()]
        );
        assert_eq!(adjoint_iso(&adj).unwrap(), psi);
        let id = Isomorphism::identity(&DimensionVector(vec![1, 2, 1, 2]));
        assert_eq!(adjoint_iso(&id).unwrap(), id);
    }

    #[test]
    fn scalar_correction() {
        let g = BidirectedGraph::new(1, vec![]).unwrap();
        let a = BidirectedRep::zero(g, vec![1]).unwrap();
        let psi = Isomorphism::new(vec![
            from_real_rows(1, 1, &[4.0]),
            from_real_rows(1, 1, &[1.0]),
        ])
        .unwrap();
        let phi = correct_to_bidirected_iso(&psi, &a, &a, ISO_RESIDUAL_TOL).unwrap();
        assert!((phi.components()[0][(0, 0)] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn correction_returns_selfconsistent_input() {
        let g = random_bidirected_graph(
            2,
            3,
            &[
                EdgeKind::Directed,
                EdgeKind::Undirected,
                EdgeKind::Bidirected,
            ],
            11,
        )
        .unwrap();
        let a = random_representation(&g, vec![2, 2], 1.0, 12).unwrap();
        let phi0 = random_isomorphism(a.dims(), 13).unwrap();
        let b = apply_isomorphism(&a, &phi0).unwrap();
        let psi = underline_iso(&phi0).unwrap();
        let phi = correct_to_bidirected_iso(&psi, &a, &b, ISO_RESIDUAL_TOL).unwrap();
        for (x, y) in phi.components().iter().zip(phi0.components()) {
            assert!((x - y).norm() < 1e-9 * y.norm());
        }
    }

    #[test]
    fn undirected_zero_form_not_congruent_to_nonzero() {
        let a = one_loop(from_real_rows(1, 1, &[1.0]), EdgeKind::Undirected);
        let b = one_loop(from_real_rows(1, 1, &[0.0]), EdgeKind::Undirected);
        assert!(decide_iso_bidirected(&a, &b, 3, ISO_RESIDUAL_TOL)
            .unwrap()
            .is_none());
        // Scaling a 1-dimensional form by 2 stays in the same class (S = 1/√2).
        let b = one_loop(from_real_rows(1, 1, &[2.0]), EdgeKind::Undirected);
        let phi = decide_iso_bidirected(&a, &b, 3, ISO_RESIDUAL_TOL)
            .unwrap()
            .unwrap();
        assert!(phi.residual(&b, &a).unwrap() < 1e-8);
    }

    #[test]
    fn route_names_parse() {
        for r in [Route::QuiverDirect, Route::Pair, Route::BidirectedDoubled] {
            assert_eq!(r.name().parse::<Route>().unwrap(), r);
        }
        assert_eq!("direct".parse::<Route>().unwrap(), Route::QuiverDirect);
        assert!("sideways".parse::<Route>().is_err());
    }
}
