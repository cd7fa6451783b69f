//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line, and exits non-zero if any fails.

use std::time::{Duration, Instant};

use nalgebra::Schur;
use quivlip_core::doubling::{underline_iso, underline_rep};
use quivlip_core::iso_solver::{
    correct_to_bidirected_iso, decide_iso_quiver, doubled_psi, hom_space, random_automorphism,
    recover_with_route, Route, ISO_RESIDUAL_TOL,
};
use quivlip_core::linalg::{self, c, CMatrix};
use quivlip_core::lipschitz_lab::{
    matrix_tuple_scenario, run_perturbation_experiment, verify_constant_chain, ExperimentConfig,
    CHAIN_FLOOR,
};
use quivlip_core::matfun::{primary_sqrt, sqrt_poly_coeffs, DEFAULT_SQRT_TOL};
use quivlip_core::pair_encoding::{decode_similarity, encode_pair, pairs_similar, PAIR_TOL};
use quivlip_core::rep_model::random::{
    random_bidirected_graph, random_dims, random_isomorphism, rng_from_seed,
};
use quivlip_core::rep_model::{
    apply_isomorphism, random_near_identity_iso, random_representation, BidirectedGraph,
    BidirectedRep, Edge, EdgeKind,
};
use quivlip_core::{DimensionVector, Isomorphism};
use rand::Rng;

const ALL_KINDS: [EdgeKind; 3] = [
    EdgeKind::Directed,
    EdgeKind::Undirected,
    EdgeKind::Bidirected,
];

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs as f64, || {
        format!("took {:.1}s, limit {limit_secs}s", elapsed.as_secs_f64())
    })
}

fn max_entry_gap(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(u, v)| (u - v).norm()))
        .fold(0.0, f64::max)
}

fn mixed_rep(t: usize, edges: usize, max_dim: usize, seed: u64) -> BidirectedRep {
    let g = random_bidirected_graph(t, edges, &ALL_KINDS, seed).unwrap();
    let dims = random_dims(t, 1, max_dim, seed ^ 0x5eed);
    random_representation(&g, dims, 1.0, seed.wrapping_add(1)).unwrap()
}

fn quiver_rep(t: usize, arrows: usize, max_dim: usize, seed: u64) -> BidirectedRep {
    let g = random_bidirected_graph(t, arrows, &[EdgeKind::Directed], seed).unwrap();
    let dims = random_dims(t, 1, max_dim, seed ^ 0x5eed);
    random_representation(&g, dims, 1.0, seed.wrapping_add(1)).unwrap()
}

fn doubling_equivariance() -> Verdict {
    let start = Instant::now();
    let mut rng = rng_from_seed(101);
    let mut worst: f64 = 0.0;
    for case in 0..100u64 {
        let t = rng.random_range(1..=4);
        let edges = rng.random_range(3..=6);
        let g = random_bidirected_graph(t, edges, &ALL_KINDS, case).unwrap();
        let dims = random_dims(t, 0, 5, 1000 + case);
        let a = random_representation(&g, dims, 1.0, 2000 + case).unwrap();
        let phi = random_isomorphism(a.dims(), 3000 + case).unwrap();
        let lhs = underline_rep(&apply_isomorphism(&a, &phi).unwrap());
        let rhs = apply_isomorphism(&underline_rep(&a), &underline_iso(&phi).unwrap()).unwrap();
        worst = worst.max(max_entry_gap(lhs.matrices(), rhs.matrices()));
    }
    ensure(worst <= 1e-10, || format!("max entry gap {worst:e}"))?;
    within(start.elapsed(), 10)?;
    Ok(format!(
        "100 graphs, max entry gap {worst:.1e}, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn doubling_norm_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    for case in 0..100u64 {
        let a = mixed_rep(1 + (case as usize % 4), 4, 4, case);
        let b = random_representation(a.graph(), a.dims().clone(), 1.0, 500 + case).unwrap();
        let doubled = underline_rep(&b).distance(&underline_rep(&a)).unwrap();
        let plain = b.distance(&a).unwrap();
        worst = worst.max((doubled - 2.0 * plain).abs());
    }
    ensure(worst <= 1e-12, || format!("max gap {worst:e}"))?;
    Ok(format!("100 pairs, max |‖uA'−uA‖ − 2‖A'−A‖| = {worst:.1e}"))
}

fn jordan(blocks: &[(f64, usize)]) -> CMatrix {
    let parts: Vec<CMatrix> = blocks
        .iter()
        .map(|&(lambda, k)| {
            CMatrix::from_fn(k, k, |r, s| {
                if r == s {
                    c(lambda, 0.0)
                } else if s == r + 1 {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
        })
        .collect();
    linalg::block_diag(&parts)
}

fn distinct_jordan_pairs() -> Vec<(CMatrix, CMatrix)> {
    let partitions: [&[&[usize]]; 3] = [
        &[&[2], &[1, 1]],
        &[&[3], &[2, 1], &[1, 1, 1]],
        &[&[4], &[3, 1], &[2, 2], &[2, 1, 1], &[1, 1, 1, 1]],
    ];
    let nilpotent = |p: &[usize]| jordan(&p.iter().map(|&k| (0.5, k)).collect::<Vec<_>>());
    let mut pairs = Vec::new();
    for group in partitions {
        for (i, p) in group.iter().enumerate() {
            for q in &group[i + 1..] {
                pairs.push((nilpotent(p), nilpotent(q)));
            }
        }
    }
    pairs.extend([
        (jordan(&[(1.0, 2), (2.0, 1)]), jordan(&[(1.0, 1), (2.0, 2)])),
        (
            jordan(&[(0.0, 2), (1.0, 2)]),
            jordan(&[(0.0, 2), (1.0, 1), (1.0, 1)]),
        ),
        (jordan(&[(1.0, 1), (2.0, 1)]), jordan(&[(1.0, 1), (1.0, 1)])),
        (
            jordan(&[(0.0, 1), (1.0, 1), (2.0, 1)]),
            jordan(&[(0.0, 1), (1.0, 1), (1.0, 1)]),
        ),
        (jordan(&[(1.0, 3)]), jordan(&[(1.0, 2), (1.5, 1)])),
        (
            jordan(&[(2.0, 2), (-1.0, 2)]),
            jordan(&[(2.0, 2), (-1.0, 1), (-1.0, 1)]),
        ),
    ]);
    pairs
}

fn loop_rep(m: CMatrix) -> BidirectedRep {
    let g = BidirectedGraph::new(1, vec![Edge::directed("a", 1, 1)]).unwrap();
    BidirectedRep::from_edge_matrices(g, vec![m.nrows()], vec![m]).unwrap()
}

fn pair_iff() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for case in 0..100u64 {
        let a = quiver_rep(
            1 + (case as usize % 3),
            1 + (case as usize % 3),
            2,
            7000 + case,
        );
        let phi = random_isomorphism(a.dims(), 8000 + case).unwrap();
        let b = apply_isomorphism(&a, &phi).unwrap();
        let (pa, layout) = encode_pair(&a).unwrap();
        let (pb, _) = encode_pair(&b).unwrap();
        let r = pairs_similar(&pa, &pb, case, PAIR_TOL)
            .map_err(|e| format!("case {case}: {e}"))?
            .ok_or_else(|| format!("case {case}: isomorphic pair reported dissimilar"))?;
        let s =
            decode_similarity(&r, &layout, PAIR_TOL).map_err(|e| format!("case {case}: {e}"))?;
        worst = worst.max(s.residual(&b, &a).unwrap());
    }
    ensure(worst <= 1e-8, || {
        format!("worst decoded residual {worst:e}")
    })?;

    let pairs = distinct_jordan_pairs();
    for (k, (x, y)) in pairs.iter().enumerate() {
        let a = loop_rep(x.clone());
        let phi = random_isomorphism(a.dims(), 9000 + k as u64).unwrap();
        let b = apply_isomorphism(&loop_rep(y.clone()), &phi).unwrap();
        let (pa, _) = encode_pair(&a).unwrap();
        let (pb, _) = encode_pair(&b).unwrap();
        match pairs_similar(&pa, &pb, k as u64, PAIR_TOL) {
            Ok(None) => {}
            other => {
                return Err(format!(
                    "Jordan pair {k}: expected no similarity, got {other:?}"
                ))
            }
        }
    }
    within(start.elapsed(), 60)?;
    Ok(format!(
        "100 isomorphic (worst residual {worst:.1e}), {} Jordan mismatches rejected, {:.2}s",
        pairs.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn correction() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut non_scalar = 0;
    let mut rng = rng_from_seed(404);
    for case in 0..100u64 {
        let t = rng.random_range(1..=3);
        let a = mixed_rep(t, rng.random_range(1..=3), 3, 10_000 + case);
        let phi0 = random_isomorphism(a.dims(), 11_000 + case).unwrap();
        let b = apply_isomorphism(&a, &phi0).unwrap();
        let ua = underline_rep(&a);
        if hom_space(&ua, &ua).unwrap().dimension() > 1 {
            non_scalar += 1;
        }
        let alpha = random_automorphism(&ua, None, 12_000 + case).unwrap();
        let psi = underline_iso(&phi0).unwrap().compose(&alpha).unwrap();
        let residual_psi = psi.residual(&ua, &underline_rep(&b)).unwrap();
        ensure(residual_psi <= 1e-8, || {
            format!("case {case}: ψ itself has residual {residual_psi:e}")
        })?;
        let phi = correct_to_bidirected_iso(&psi, &a, &b, ISO_RESIDUAL_TOL)
            .map_err(|e| format!("case {case}: {e}"))?;
        worst = worst.max(phi.residual(&a, &b).unwrap());
    }
    ensure(non_scalar >= 25, || {
        format!("only {non_scalar} cases with non-scalar automorphisms")
    })?;
    Ok(format!(
        "100 cases ({non_scalar} with non-scalar automorphisms), worst residual {worst:.1e}"
    ))
}

fn eigenvalues(t: &CMatrix) -> Vec<num_complex::Complex64> {
    Schur::new(t.clone())
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

fn min_gap(ev: &[num_complex::Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in ev.iter().enumerate() {
        for b in &ev[i + 1..] {
            gap = gap.min((a - b).norm());
        }
    }
    gap
}

fn sqrt_kernel() -> Verdict {
    let mut rng = rng_from_seed(505);
    let mut worst_res: f64 = 0.0;
    let mut worst_comm: f64 = 0.0;
    let mut worst_poly: f64 = 0.0;
    let mut poly_checked = 0;
    let mut case = 0;
    while case < 200 {
        let n = rng.random_range(1..=8);
        // Even cases: Gaussian. Odd cases: X·D·X⁻¹ with separated eigenvalues.
        let t = if case % 2 == 0 {
            linalg::gaussian_matrix(n, n, &mut rng)
        } else {
            let x = random_isomorphism(&DimensionVector(vec![n]), rng.random())
                .unwrap()
                .into_components()
                .remove(0);
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |k, _| {
                let angle = -2.5 + 5.0 * (k as f64 + rng.random::<f64>() * 0.5) / n as f64;
                c(0.5 + k as f64 * 0.3, 0.0) * num_complex::Complex64::from_polar(1.0, angle * 0.5)
            }));
            &x * d * linalg::inverse(&x).unwrap()
        };
        let ev = eigenvalues(&t);
        let off_cut = ev
            .iter()
            .all(|z| z.norm() > 1e-6 && !(z.re < 0.0 && z.im.abs() < 1e-6 * z.norm()));
        if !off_cut {
            continue;
        }
        case += 1;
        let w = primary_sqrt(&t, 0.0, 1e-6).map_err(|e| format!("case {case}: {e}"))?;
        let tn = t.norm();
        worst_res = worst_res.max(w.residual / tn);
        worst_comm = worst_comm.max(w.commutation / (tn * tn));
        if min_gap(&ev) >= 0.1 {
            let g =
                sqrt_poly_coeffs(&t, DEFAULT_SQRT_TOL).map_err(|e| format!("case {case}: {e}"))?;
            // The interpolant must reproduce the principal root chosen above.
            if g.branch_angle == w.branch_angle {
                worst_poly = worst_poly.max((g.eval_matrix(&t) - &w.w).norm());
                poly_checked += 1;
            }
        }
    }
    ensure(worst_res <= 1e-10, || format!("‖W²−T‖/‖T‖ = {worst_res:e}"))?;
    ensure(worst_comm <= 1e-10, || {
        format!("‖WT−TW‖/‖T‖² = {worst_comm:e}")
    })?;
    ensure(worst_poly <= 1e-8, || format!("‖g(T)−W‖ = {worst_poly:e}"))?;
    ensure(poly_checked >= 100, || {
        format!("only {poly_checked} separated cases")
    })?;
    Ok(format!(
        "200 matrices, residual {worst_res:.1e}, commutation {worst_comm:.1e}, interpolant {worst_poly:.1e} on {poly_checked}"
    ))
}

fn constant_chain() -> Verdict {
    let mut rng = rng_from_seed(606);
    let mut checked = 0;
    let mut worst_phi_ratio: f64 = 0.0;
    let mut record = |psi: &Isomorphism, label: String| -> Result<(), String> {
        let rep = verify_constant_chain(psi, CHAIN_FLOOR).map_err(|e| format!("{label}: {e}"))?;
        ensure(rep.delta <= 0.01, || {
            format!("{label}: δ = {} exceeds 0.01", rep.delta)
        })?;
        ensure(rep.all_hold(), || format!("{label}: bound failed {rep:?}"))?;
        if rep.delta > 0.0 {
            worst_phi_ratio = rep
                .phi_dev
                .iter()
                .fold(worst_phi_ratio, |m, &x| m.max(x / rep.delta));
        }
        checked += 1;
        Ok(())
    };
    // Arbitrary near-identity tuples on doubled dimensions.
    for case in 0..100u64 {
        let a = mixed_rep(rng.random_range(1..=4), 3, 4, 20_000 + case);
        let dims = DimensionVector(a.dims().as_slice().repeat(2));
        let eps = 0.01 / dims.len() as f64 * rng.random_range(0.05..=1.0);
        let psi = random_near_identity_iso(&dims, eps, 21_000 + case).unwrap();
        record(&psi, format!("tuple {case}"))?;
    }
    // ψ produced by the recovery pipeline between A and a nearby isomorphic B.
    for case in 0..100u64 {
        let a = mixed_rep(rng.random_range(1..=3), 3, 3, 22_000 + case);
        let phi =
            random_near_identity_iso(a.dims(), 1e-4 * rng.random_range(0.1..=1.0), 23_000 + case)
                .unwrap();
        let b = apply_isomorphism(&a, &phi).unwrap();
        let psi = doubled_psi(&a, &b).map_err(|e| format!("pipeline {case}: {e}"))?;
        record(&psi, format!("pipeline {case}"))?;
    }
    Ok(format!(
        "{checked} ψ, all four bounds hold, max ‖φ_i−I‖/δ = {worst_phi_ratio:.3}"
    ))
}

const LAB_EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

fn local_lipschitz() -> Verdict {
    let start = Instant::now();
    let mut lines = Vec::new();
    for k in 0..5u64 {
        let t = 1 + (k as usize % 3);
        let a = mixed_rep(t, 2 + k as usize % 3, 4, 30_000 + k);
        let cfg = ExperimentConfig {
            eps: LAB_EPS.to_vec(),
            trials: 50,
            seed: 31_000 + k,
            route: None,
        };
        let rep = run_perturbation_experiment(&a, &cfg).map_err(|e| format!("rep {k}: {e}"))?;
        ensure(rep.failures.is_empty() && rep.skipped.is_empty(), || {
            format!(
                "rep {k}: {} failures, {} skipped: {:?}",
                rep.failures.len(),
                rep.skipped.len(),
                rep.failures.first()
            )
        })?;
        ensure(rep.trials.len() == 150, || {
            format!("rep {k}: {} trials recorded", rep.trials.len())
        })?;
        ensure(rep.trials.iter().all(|t| t.residual <= 1e-8), || {
            format!("rep {k}: residual above 1e-8")
        })?;
        let (k3, k4) = (rep.k_hat_at(1e-3), rep.k_hat_at(1e-4));
        ensure(k3 / k4 < 2.0 && k4 / k3 < 2.0, || {
            format!("rep {k}: K̂(1e-3) = {k3}, K̂(1e-4) = {k4}")
        })?;
        lines.push(format!("{k3:.3}/{k4:.3}"));
    }
    within(start.elapsed(), 120)?;
    Ok(format!(
        "5 reps × 150 trials verified, K̂(1e-3)/K̂(1e-4) = [{}], {:.1}s",
        lines.join(", "),
        start.elapsed().as_secs_f64()
    ))
}

fn matrix_tuples() -> Verdict {
    let mut rng = rng_from_seed(808);
    let mats: Vec<CMatrix> = (0..3)
        .map(|_| linalg::gaussian_matrix(3, 3, &mut rng))
        .collect();
    let mut summary = Vec::new();
    for r in 0..=3 {
        let rep = matrix_tuple_scenario(&mats, r, &[1e-3, 1e-4], 25, 40_000 + r as u64)
            .map_err(|e| format!("r={r}: {e}"))?;
        let exp = &rep.experiment;
        ensure(exp.failures.is_empty() && exp.trials.len() == 50, || {
            format!(
                "r={r}: {} recorded, failures {:?}",
                exp.trials.len(),
                exp.failures.first()
            )
        })?;
        ensure(
            rep.similarity_residual <= 1e-8 && rep.congruence_residual <= 1e-8,
            || {
                format!(
                    "r={r}: residuals {:e} / {:e}",
                    rep.similarity_residual, rep.congruence_residual
                )
            },
        )?;
        ensure(rep.lipschitz_bound_holds && exp.k_hat.is_finite(), || {
            format!("r={r}: bound fails")
        })?;
        let (k3, k4) = (exp.k_hat_at(1e-3), exp.k_hat_at(1e-4));
        ensure(k3 / k4 < 2.0 && k4 / k3 < 2.0, || {
            format!("r={r}: K̂ unstable {k3} vs {k4}")
        })?;
        summary.push(format!("r={r} K̂={k3:.3}"));
    }
    Ok(summary.join(", "))
}

fn route_consistency() -> Verdict {
    let mut iso_count = 0;
    let mut rng = rng_from_seed(909);
    for case in 0..100u64 {
        let t = rng.random_range(1..=3);
        let a = quiver_rep(t, rng.random_range(1..=3), 2, 50_000 + case);
        let b = match case % 3 {
            0 => random_representation(a.graph(), a.dims().clone(), 1.0, 51_000 + case).unwrap(),
            1 => apply_isomorphism(&a, &random_isomorphism(a.dims(), 52_000 + case).unwrap())
                .unwrap(),
            _ => apply_isomorphism(
                &a,
                &random_near_identity_iso(a.dims(), 1e-3, 53_000 + case).unwrap(),
            )
            .unwrap(),
        };
        let direct = decide_iso_quiver(&a, &b, case, ISO_RESIDUAL_TOL)
            .map_err(|e| format!("case {case}: {e}"))?;
        let (pa, layout) = encode_pair(&a).unwrap();
        let (pb, _) = encode_pair(&b).unwrap();
        let pair =
            pairs_similar(&pa, &pb, case, PAIR_TOL).map_err(|e| format!("case {case}: {e}"))?;
        ensure(direct.is_some() == pair.is_some(), || {
            format!(
                "case {case}: direct says {}, pair says {}",
                direct.is_some(),
                pair.is_some()
            )
        })?;
        if let (Some(d), Some(r)) = (direct, pair) {
            iso_count += 1;
            let s = decode_similarity(&r, &layout, PAIR_TOL)
                .map_err(|e| format!("case {case}: {e}"))?;
            let (rd, rp) = (d.residual(&a, &b).unwrap(), s.residual(&b, &a).unwrap());
            ensure(rd <= 1e-8 && rp <= 1e-8, || {
                format!("case {case}: residuals {rd:e}, {rp:e}")
            })?;
            // Both nearest-identity routes project onto the same space.
            if case % 3 == 2 {
                let via_pair =
                    recover_with_route(&a, &b, Route::Pair).map_err(|e| e.to_string())?;
                let via_hom =
                    recover_with_route(&a, &b, Route::QuiverDirect).map_err(|e| e.to_string())?;
                let gap = max_entry_gap(via_pair.iso.components(), via_hom.iso.components());
                ensure(gap <= 1e-8, || {
                    format!("case {case}: routes disagree by {gap:e}")
                })?;
            }
        }
    }
    Ok(format!(
        "100 instances agree ({iso_count} isomorphic, {} not)",
        100 - iso_count
    ))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("doubling equivariance", doubling_equivariance),
        ("doubling norm identity", doubling_norm_identity),
        ("pair encoding iff", pair_iff),
        ("square-root correction", correction),
        ("square-root kernel", sqrt_kernel),
        ("constant chain", constant_chain),
        ("empirical local Lipschitz", local_lipschitz),
        ("matrix tuple scenario", matrix_tuples),
        ("route consistency", route_consistency),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({detail})", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
