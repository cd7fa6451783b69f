//! Monte-Carlo estimates of the local Lipschitz constant.
//!
//! Each trial perturbs a fixed representation `A` by a random isomorphism
//! `φ` close to the identity, recovers an isomorphism `B → A` near the
//! identity and records `deviation / ‖B − A‖`.

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iso_solver::{correction_parts, recover_with_route, Route};
use crate::linalg::{self, CMatrix};
use crate::rep_model::{
    apply_isomorphism, random_near_identity_iso, BidirectedGraph, BidirectedRep, DimensionVector,
    Edge, EdgeKind, GraphShape, Isomorphism,
};

/// Trials whose perturbation moved `A` by less than this are skipped.
pub const MIN_DISTANCE: f64 = 1e-14;

/// Additive slack on the constant-chain inequalities for rounding.
pub const CHAIN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub eps: f64,
    pub dist: f64,
    pub dev: f64,
    pub ratio: f64,
    pub residual: f64,
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedTrial {
    pub seed: u64,
    pub eps: f64,
    pub dist: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedTrial {
    pub seed: u64,
    pub eps: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepDescriptor {
    pub t: usize,
    pub dims: DimensionVector,
    pub directed: usize,
    pub undirected: usize,
    pub bidirected: usize,
    pub norm: f64,
}

impl RepDescriptor {
    pub fn of(rep: &BidirectedRep) -> Self {
        let count = |k: EdgeKind| rep.graph().edges().filter(|e| e.kind == k).count();
        RepDescriptor {
            t: rep.graph().t(),
            dims: rep.dims().clone(),
            directed: count(EdgeKind::Directed),
            undirected: count(EdgeKind::Undirected),
            bidirected: count(EdgeKind::Bidirected),
            norm: rep.norm(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

impl Quantiles {
    /// Linear interpolation between order statistics; all zero when empty.
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |q: f64| {
            if v.is_empty() {
                return 0.0;
            }
            let x = q * (v.len() - 1) as f64;
            let (lo, hi) = (x.floor() as usize, x.ceil() as usize);
            v[lo] + (v[hi] - v[lo]) * (x - lo as f64)
        };
        Quantiles {
            median: at(0.5),
            p90: at(0.9),
            max: at(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub representation: RepDescriptor,
    pub route: Route,
    pub trials: Vec<TrialRecord>,
    pub skipped: Vec<SkippedTrial>,
    pub failures: Vec<FailedTrial>,
    /// Largest recorded ratio, 0 when nothing was recorded.
    pub k_hat: f64,
    pub k_quantiles: Quantiles,
    pub wall_time_secs: f64,
}

impl ExperimentReport {
    /// Largest ratio among trials run at `eps`.
    pub fn k_hat_at(&self, eps: f64) -> f64 {
        self.trials
            .iter()
            .filter(|r| r.eps == eps)
            .map(|r| r.ratio)
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub eps: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// `None` picks the route from the graph.
    pub route: Option<Route>,
}

/// Seed of trial `index`, independent of the perturbation scale so that the
/// same directions are reused at every `ε`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

enum Outcome {
    Recorded {
        record: TrialRecord,
        perturbed: BidirectedRep,
        iso: Isomorphism,
    },
    Skipped(SkippedTrial),
    Failed(FailedTrial),
}

fn run_trial(a: &BidirectedRep, eps: f64, seed: u64, route: Route) -> Outcome {
    let failed = |e: Error| {
        Outcome::Failed(FailedTrial {
            seed,
            eps,
            error: e.to_string(),
        })
    };
    let b = match random_near_identity_iso(a.dims(), eps, seed)
        .and_then(|phi| apply_isomorphism(a, &phi))
    {
        Ok(b) => b,
        Err(e) => return failed(e),
    };
    let dist = match b.distance(a) {
        Ok(d) => d,
        Err(e) => return failed(e),
    };
    if dist < MIN_DISTANCE {
        return Outcome::Skipped(SkippedTrial { seed, eps, dist });
    }
    match recover_with_route(a, &b, route) {
        Ok(rec) => {
            let dev = rec.iso.deviation();
            Outcome::Recorded {
                record: TrialRecord {
                    seed,
                    eps,
                    dist,
                    dev,
                    ratio: dev / dist,
                    residual: rec.residual,
                    route,
                },
                perturbed: b,
                iso: rec.iso,
            }
        }
        Err(e) => failed(e),
    }
}

fn validate_config(cfg: &ExperimentConfig) -> Result<()> {
    if let Some(bad) = cfg.eps.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "perturbation scale must be finite and non-negative, got {bad}"
        )));
    }
    Ok(())
}

fn run_outcomes(a: &BidirectedRep, cfg: &ExperimentConfig) -> Result<(Route, Vec<Outcome>)> {
    a.validate()?;
    validate_config(cfg)?;
    let route = cfg.route.unwrap_or_else(|| Route::for_graph(a.graph()));
    let jobs: Vec<(f64, u64)> = cfg
        .eps
        .iter()
        .flat_map(|&eps| (0..cfg.trials as u64).map(move |k| (eps, trial_seed(cfg.seed, k))))
        .collect();
    // Indexed collect keeps job order whatever the scheduling.
    let outcomes = jobs
        .par_iter()
        .map(|&(eps, seed)| run_trial(a, eps, seed, route))
        .collect();
    Ok((route, outcomes))
}

fn assemble(
    a: &BidirectedRep,
    route: Route,
    outcomes: &[Outcome],
    started: Instant,
) -> ExperimentReport {
    let mut trials = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Recorded { record, .. } => trials.push(record.clone()),
            Outcome::Skipped(s) => skipped.push(s.clone()),
            Outcome::Failed(f) => failures.push(f.clone()),
        }
    }
    let ratios: Vec<f64> = trials.iter().map(|r: &TrialRecord| r.ratio).collect();
    let k_quantiles = Quantiles::of(&ratios);
    ExperimentReport {
        representation: RepDescriptor::of(a),
        route,
        k_hat: k_quantiles.max,
        k_quantiles,
        trials,
        skipped,
        failures,
        wall_time_secs: started.elapsed().as_secs_f64(),
    }
}

pub fn run_perturbation_experiment(
    a: &BidirectedRep,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    let (route, outcomes) = run_outcomes(a, cfg)?;
    Ok(assemble(a, route, &outcomes, started))
}

/// Every quantity of the bound chain for one doubled-rep isomorphism `ψ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantChainReport {
    /// `Σ_v ‖Ψ_v − I‖` over all `2t` vertices.
    pub delta: f64,
    pub psi_dev: Vec<f64>,
    pub psi_inv_dev: Vec<f64>,
    /// `‖T_i − I‖`, `‖W_i − I‖`, `‖φ_i − I‖` for the `t` unstarred vertices.
    pub t_dev: Vec<f64>,
    pub w_dev: Vec<f64>,
    pub phi_dev: Vec<f64>,
    /// `‖Ψ_v⁻¹ − I‖ ≤ 2‖Ψ_v − I‖` at every vertex.
    pub inverse_bound: bool,
    /// `‖T_i − I‖ ≤ 3δ`.
    pub t_bound: bool,
    /// `‖W_i − I‖ ≤ 3δ`.
    pub w_bound: bool,
    /// `‖φ_i − I‖ ≤ 11δ`.
    pub phi_bound: bool,
}

impl ConstantChainReport {
    pub fn all_hold(&self) -> bool {
        self.inverse_bound && self.t_bound && self.w_bound && self.phi_bound
    }
}

/// Runs the square-root correction on `ψ` and evaluates each inequality with
/// additive slack `floor`.
pub fn verify_constant_chain(psi: &Isomorphism, floor: f64) -> Result<ConstantChainReport> {
    let psi_dev: Vec<f64> = psi
        .components()
        .iter()
        .map(linalg::distance_to_identity)
        .collect();
    let psi_inv_dev: Vec<f64> = psi
        .inverse()?
        .components()
        .iter()
        .map(linalg::distance_to_identity)
        .collect();
    let delta: f64 = psi_dev.iter().sum();
    let parts = correction_parts(psi)?;
    let t_dev: Vec<f64> = parts
        .t_mats
        .iter()
        .map(linalg::distance_to_identity)
        .collect();
    let w_dev: Vec<f64> = parts
        .roots
        .iter()
        .map(|r| linalg::distance_to_identity(&r.w))
        .collect();
    let phi_dev: Vec<f64> = parts
        .phi
        .components()
        .iter()
        .map(linalg::distance_to_identity)
        .collect();
    let within = |xs: &[f64], bound: f64| xs.iter().all(|&x| x <= bound + floor);
    Ok(ConstantChainReport {
        inverse_bound: psi_inv_dev
            .iter()
            .zip(&psi_dev)
            .all(|(&inv, &d)| inv <= 2.0 * d + floor),
        t_bound: within(&t_dev, 3.0 * delta),
        w_bound: within(&w_dev, 3.0 * delta),
        phi_bound: within(&phi_dev, 11.0 * delta),
        delta,
        psi_dev,
        psi_inv_dev,
        t_dev,
        w_dev,
        phi_dev,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixTupleReport {
    pub experiment: ExperimentReport,
    /// Worst `‖S⁻¹A_iS − B_i‖ / max(1, ‖B_i‖)` over the similarity part.
    pub similarity_residual: f64,
    /// Worst `‖SᵀA_iS − B_i‖ / max(1, ‖B_i‖)` over the congruence part.
    pub congruence_residual: f64,
    /// Every recorded trial has `‖S − I‖ ≤ K̂ · Σ‖B_i − A_i‖`.
    pub lipschitz_bound_holds: bool,
}

/// One vertex carrying `r` directed loops (`mats[..r]`, acted on by
/// similarity) and `mats.len() − r` undirected loops (`mats[r..]`, acted on
/// by congruence).
pub fn matrix_tuple_rep(mats: &[CMatrix], r: usize) -> Result<BidirectedRep> {
    if r > mats.len() {
        return Err(Error::InvalidArgument(format!(
            "r = {r} exceeds {} matrices",
            mats.len()
        )));
    }
    let n = mats.first().map_or(0, |m| m.nrows());
    let edges = (0..mats.len())
        .map(|k| {
            let id = format!("a{}", k + 1);
            if k < r {
                Edge::directed(id, 1, 1)
            } else {
                Edge::undirected(id, 1, 1)
            }
        })
        .collect();
    let graph = BidirectedGraph::new(1, edges)?;
    BidirectedRep::from_edge_matrices(graph, vec![n], mats.to_vec())
}

/// Perturbation experiment on a tuple of square matrices, also checking each
/// recovered `S` against the similarity and congruence equations directly.
pub fn matrix_tuple_scenario(
    mats: &[CMatrix],
    r: usize,
    eps: &[f64],
    trials: usize,
    seed: u64,
) -> Result<MatrixTupleReport> {
    let started = Instant::now();
    let a = matrix_tuple_rep(mats, r)?;
    let cfg = ExperimentConfig {
        eps: eps.to_vec(),
        trials,
        seed,
        route: None,
    };
    let (route, outcomes) = run_outcomes(&a, &cfg)?;
    let mut similarity_residual: f64 = 0.0;
    let mut congruence_residual: f64 = 0.0;
    for o in &outcomes {
        let Outcome::Recorded { perturbed, iso, .. } = o else {
            continue;
        };
        let s = &iso.components()[0];
        let s_inv = linalg::inverse(s).ok_or(Error::SingularComponent { vertex: 0 })?;
        for (k, (ai, bi)) in mats.iter().zip(perturbed.matrices()).enumerate() {
            let image = if k < r {
                &s_inv * ai * s
            } else {
                s.transpose() * ai * s
            };
            let res = (image - bi).norm() / bi.norm().max(1.0);
            if k < r {
                similarity_residual = similarity_residual.max(res);
            } else {
                congruence_residual = congruence_residual.max(res);
            }
        }
    }
    let experiment = assemble(&a, route, &outcomes, started);
    let lipschitz_bound_holds = experiment
        .trials
        .iter()
        .all(|t| t.dev <= experiment.k_hat * t.dist * (1.0 + 1e-12));
    Ok(MatrixTupleReport {
        experiment,
        similarity_residual,
        congruence_residual,
        lipschitz_bound_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown report format `{other}`"
            ))),
        }
    }
}

pub const CSV_HEADER: [&str; 7] = ["seed", "eps", "dist", "dev", "ratio", "residual", "route"];

pub fn emit_report(report: &ExperimentReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("write to memory");
            for t in &report.trials {
                w.write_record([
                    t.seed.to_string(),
                    t.eps.to_string(),
                    t.dist.to_string(),
                    t.dev.to_string(),
                    t.ratio.to_string(),
                    t.residual.to_string(),
                    t.route.to_string(),
                ])
                .expect("write to memory");
            }
            String::from_utf8(w.into_inner().expect("flush to memory"))
                .expect("csv output is utf-8")
        }
    }
}
