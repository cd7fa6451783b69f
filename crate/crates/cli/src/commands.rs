use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use quivlip_core::iso_solver::{decide_iso, recover_with_route, ISO_RESIDUAL_TOL};
use quivlip_core::linalg::{matrix_from_json, MatrixDoc};
use quivlip_core::lipschitz_lab::{
    emit_report, run_perturbation_experiment, ExperimentConfig, ReportFormat,
};
use quivlip_core::matfun::{
    blockwise_primary_sqrt, primary_sqrt, sqrt_poly_coeffs, DEFAULT_SQRT_TOL,
};
use quivlip_core::pair_encoding::encode_pair;
use quivlip_core::{underline_rep, BidirectedRep, Error, Route};

use crate::{Cli, Command, Format, RouteArg, Verdict};

fn read_rep(path: &Path) -> Result<BidirectedRep> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    BidirectedRep::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, value: &Value) -> Result<()> {
    emit(cli, &serde_json::to_string_pretty(value)?)
}

fn tolerance(cli: &Cli, default: f64) -> Result<f64> {
    match cli.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => bail!("--tol must be positive, got {t}"),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn route(arg: Option<RouteArg>, rep: &BidirectedRep) -> Route {
    match arg {
        Some(RouteArg::Direct) => Route::QuiverDirect,
        Some(RouteArg::Pair) => Route::Pair,
        Some(RouteArg::Doubled) => Route::BidirectedDoubled,
        None => Route::for_graph(rep.graph()),
    }
}

pub fn run(cli: &Cli) -> Result<Verdict> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Lipschitz { .. }) {
        bail!("csv output is only available for `lipschitz`");
    }
    match &cli.command {
        Command::Encode { rep } => {
            let rep = read_rep(rep)?;
            let (pair, layout) = encode_pair(&rep)?;
            emit_json(cli, &json!({ "pair": pair, "layout": layout }))?;
            Ok(Verdict::Positive)
        }
        Command::Double { rep } => {
            let rep = read_rep(rep)?;
            emit(cli, &underline_rep(&rep).to_json())?;
            Ok(Verdict::Positive)
        }
        Command::Iso { a, b } => {
            let (a, b) = (read_rep(a)?, read_rep(b)?);
            let tol = tolerance(cli, ISO_RESIDUAL_TOL)?;
            match decide_iso(&a, &b, cli.seed, tol)? {
                Some(iso) => {
                    let residual = iso.residual(&b, &a)?;
                    emit_json(
                        cli,
                        &json!({
                            "isomorphic": true,
                            "from": "B",
                            "to": "A",
                            "residual": residual,
                            "isomorphism": iso.to_doc(a.graph()),
                        }),
                    )?;
                    Ok(Verdict::Positive)
                }
                None => {
                    eprintln!("not isomorphic");
                    emit_json(cli, &json!({ "isomorphic": false }))?;
                    Ok(Verdict::Negative)
                }
            }
        }
        Command::Recover { a, b, route: arg } => {
            let (a, b) = (read_rep(a)?, read_rep(b)?);
            let route = route(*arg, &a);
            let rec = match recover_with_route(&a, &b, route) {
                Ok(rec) => rec,
                Err(Error::NotIsomorphicOrTooFar(why)) => {
                    eprintln!("no isomorphism near the identity: {why}");
                    return Ok(Verdict::Negative);
                }
                Err(e) => return Err(e.into()),
            };
            let distance = b.distance(&a)?;
            let deviation = rec.iso.deviation();
            let ratio = if distance > 0.0 {
                Some(deviation / distance)
            } else {
                None
            };
            eprintln!(
                "route {route}: deviation {deviation:.3e}, distance {distance:.3e}, residual {:.3e}",
                rec.residual
            );
            emit_json(
                cli,
                &json!({
                    "from": "B",
                    "to": "A",
                    "route": route,
                    "deviation": deviation,
                    "distance": distance,
                    "ratio": ratio,
                    "residual": rec.residual,
                    "isomorphism": rec.iso.to_doc(a.graph()),
                }),
            )?;
            Ok(Verdict::Positive)
        }
        Command::Sqrt {
            matrix,
            theta,
            poly,
        } => {
            let text = fs::read_to_string(matrix)
                .with_context(|| format!("reading {}", matrix.display()))?;
            let t =
                matrix_from_json(&text).with_context(|| format!("parsing {}", matrix.display()))?;
            let tol = tolerance(cli, DEFAULT_SQRT_TOL)?;
            let root = match theta {
                Some(theta) => primary_sqrt(&t, *theta, tol)?,
                None => blockwise_primary_sqrt(std::slice::from_ref(&t), tol)?.remove(0),
            };
            let mut out = json!({
                "sqrt": MatrixDoc::from(&root.w),
                "branch_angle": root.branch_angle,
                "residual": root.residual,
                "commutation": root.commutation,
            });
            if *poly {
                out["polynomial"] = serde_json::to_value(sqrt_poly_coeffs(&t, tol)?)?;
            }
            emit_json(cli, &out)?;
            Ok(Verdict::Positive)
        }
        Command::Lipschitz {
            rep,
            eps,
            trials,
            route: arg,
        } => {
            let rep = read_rep(rep)?;
            let cfg = ExperimentConfig {
                eps: eps.clone(),
                trials: *trials,
                seed: cli.seed,
                route: Some(route(*arg, &rep)),
            };
            let report = run_perturbation_experiment(&rep, &cfg)?;
            eprintln!(
                "{} trials, {} skipped, {} failed, K_hat {:.4} ({:.2}s)",
                report.trials.len(),
                report.skipped.len(),
                report.failures.len(),
                report.k_hat,
                report.wall_time_secs
            );
            let format = match cli.format {
                Format::Json => ReportFormat::Json,
                Format::Csv => ReportFormat::Csv,
            };
            let text = emit_report(&report, format);
            emit(cli, text.trim_end())?;
            Ok(Verdict::Positive)
        }
    }
}
