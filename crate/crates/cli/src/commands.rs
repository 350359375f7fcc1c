//! Subcommand implementations. Each writes `results.csv` (or `codebook.csv`)
//! and `summary.json` into the output directory.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use softcover::coding::Codebook;
use softcover::rd::{
    berger_tung_corner, blahut_arimoto_rd, time_share, wyner_ziv_rate_with, Corner, RateDistortionPoint,
    WynerZivOptions, WZ_METHOD_NOTE,
};
use softcover::schemes::{run_experiment, ExperimentSummary, Scheme};
use softcover::softcover::{
    shipped_q_fixtures, softcover_sweep, softcover_sweep_wz, verify_q_identities, IdentityReport, QFixture,
};

use crate::config::{BtCornerSpec, CornerSpec, ExperimentConfig, IdentitiesSpec, RdSpec, SoftcoverSpec, WzRateSpec};
use crate::output::{
    emit_curve, fmt_sig, identity_rows, trial_header, trial_row, write_csv, write_json, BtRecord, RdRecord,
    SoftcoverRecord, IDENTITY_HEADER,
};
use crate::CliError;

pub const ARTIFACT: &str = "softcover";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct SummaryFile<'a> {
    artifact: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a ExperimentConfig,
    notes: &'a [String],
    warnings: Vec<String>,
    result: Value,
}

fn write_summary(
    out: &Path,
    command: &str,
    config: &ExperimentConfig,
    notes: &[String],
    warnings: Vec<String>,
    result: Value,
) -> Result<(), CliError> {
    let file = SummaryFile { artifact: ARTIFACT, version: VERSION, command, config, notes, warnings, result };
    write_json(&out.join("summary.json"), &file)
}

fn to_value(v: &impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Runtime(e.to_string()))
}

fn experiment_result(summary: &ExperimentSummary, extra: Value) -> Result<Value, CliError> {
    let mut v = to_value(summary)?;
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.remove("warnings");
        map.extend(more);
    }
    Ok(v)
}

fn write_trials(out: &Path, summary: &ExperimentSummary) -> Result<(), CliError> {
    let sources = summary.mean_distortions.len().max(1);
    write_csv(&out.join("results.csv"), &trial_header(sources), summary.results.iter().map(trial_row))
}

/// Runs a Monte Carlo scheme.
pub fn simulate(command: &str, config: &ExperimentConfig, notes: &[String], out: &Path) -> Result<(), CliError> {
    let (scheme, extra) = match config {
        ExperimentConfig::P2p(spec) => {
            let cfg = spec.build()?;
            let info = cfg.mutual_information().map_err(CliError::config)?;
            let extra = json!({ "mutual_information": info, "rate": cfg.rate });
            (Scheme::P2p(cfg), extra)
        }
        ExperimentConfig::Wz(spec) => {
            let s = spec.build()?;
            let c = &s.config;
            let extra = json!({
                "i_xv": s.info.i_xv,
                "i_vb": s.info.i_vb,
                "rate_r": c.rate_r,
                "rate_rprime": c.rate_rprime,
                "phi": c.phi.to_rows(),
            });
            (Scheme::Wz(s), extra)
        }
        ExperimentConfig::Bt(spec) => {
            let s = spec.build()?;
            let c = &s.config;
            let extra = json!({
                "i_x1u1": s.info.i_x1u1,
                "i_x2u2": s.info.i_x2u2,
                "i_u1u2": s.info.i_u1u2,
                "i_x2u2_given_u1": s.info.i_x2u2_given_u1,
                "rate1": c.rate1,
                "rate2": c.rate2,
                "rate2_prime": c.rate2_prime,
                "phi1": c.phi1.to_rows(),
                "phi2": c.phi2.to_rows(),
            });
            (Scheme::Bt(s), extra)
        }
        other => return Err(CliError::Config(format!("{command} cannot run a {:?} config", other.scheme()))),
    };
    let summary = run_experiment(&scheme, None)?;
    write_trials(out, &summary)?;
    let warnings = summary.warnings.clone();
    write_summary(out, command, config, notes, warnings, experiment_result(&summary, extra)?)
}

fn check_targets(targets: &[f64]) -> Result<(), CliError> {
    if targets.is_empty() {
        return Err(CliError::Config("targets must be nonempty".into()));
    }
    if let Some(t) = targets.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(CliError::Config(format!("target distortion {t} must be finite and nonnegative")));
    }
    Ok(())
}

fn point_json(target: f64, p: &RateDistortionPoint) -> Value {
    json!({
        "target_d": target,
        "rate": p.rate(),
        "distortion": p.distortion(),
        "status": p.status.as_str(),
        "iterations": p.iterations,
        "achieving_channel": p.achieving_channels.first().map(|c| c.to_rows()),
        "reconstruction": p.reconstructions.first().map(|r| r.to_rows()),
        "note": p.note,
    })
}

pub fn rd(config: &ExperimentConfig, spec: &RdSpec, notes: &[String], out: &Path) -> Result<(), CliError> {
    check_targets(&spec.targets)?;
    let d = spec.distortion.build_square_default(spec.source.len())?;
    let points = spec
        .targets
        .iter()
        .map(|&t| blahut_arimoto_rd(&spec.source, &d, t).map(|p| (t, p)))
        .collect::<softcover::Result<Vec<_>>>()?;
    let records: Vec<RdRecord> =
        points.iter().map(|(t, p)| RdRecord { problem: &spec.problem, target: *t, point: p }).collect();
    emit_curve(&records, &out.join("results.csv"))?;
    let mut sorted: Vec<&(f64, RateDistortionPoint)> = points.iter().collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let result = json!({ "points": sorted.iter().map(|(t, p)| point_json(*t, p)).collect::<Vec<_>>() });
    write_summary(out, "rd", config, notes, Vec::new(), result)
}

pub fn wz_rate(config: &ExperimentConfig, spec: &WzRateSpec, notes: &[String], out: &Path) -> Result<(), CliError> {
    check_targets(&spec.targets)?;
    if spec.joint_xb.arity() != 2 {
        return Err(CliError::Config("joint_xb must have two axes".into()));
    }
    let d = spec.distortion.build_square_default(spec.joint_xb.shape()[0])?;
    let mut opts = WynerZivOptions::default();
    if let Some(r) = spec.restarts {
        if r == 0 {
            return Err(CliError::Config("restarts must be at least 1".into()));
        }
        opts.restarts = r;
    }
    if let Some(seed) = spec.seed {
        opts.seed = seed;
    }
    let points = spec
        .targets
        .iter()
        .map(|&t| wyner_ziv_rate_with(&spec.joint_xb, &d, t, &opts).map(|p| (t, p)))
        .collect::<softcover::Result<Vec<_>>>()?;
    let records: Vec<RdRecord> =
        points.iter().map(|(t, p)| RdRecord { problem: &spec.problem, target: *t, point: p }).collect();
    emit_curve(&records, &out.join("results.csv"))?;
    let mut sorted: Vec<&(f64, RateDistortionPoint)> = points.iter().collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let result = json!({
        "method": WZ_METHOD_NOTE,
        "restarts": opts.restarts,
        "seed": opts.seed,
        "points": sorted.iter().map(|(t, p)| point_json(*t, p)).collect::<Vec<_>>(),
    });
    write_summary(out, "wz-rate", config, notes, Vec::new(), result)
}

pub fn bt_corner(config: &ExperimentConfig, spec: &BtCornerSpec, notes: &[String], out: &Path) -> Result<(), CliError> {
    let (d1, d2, phi1, phi2) = spec.build()?;
    if let Some(l) = spec.time_share.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(CliError::Config(format!("time-sharing weight {l} outside [0, 1]")));
    }
    let corner = |c| berger_tung_corner(&spec.joint_x1x2, &spec.ch1, &spec.ch2, &phi1, &phi2, &d1, &d2, c);
    let c1 = corner(Corner::C1).map_err(CliError::config)?;
    let c2 = corner(Corner::C2).map_err(CliError::config)?;
    let shared = spec
        .time_share
        .iter()
        .map(|&l| time_share(&c1, &c2, l).map(|p| (l, p)))
        .collect::<softcover::Result<Vec<_>>>()?;
    let mut records = Vec::new();
    for c in &spec.corners {
        match c {
            CornerSpec::C1 => {
                records.push(BtRecord { problem: &spec.problem, label: "C1".into(), lambda: 1.0, point: &c1 })
            }
            CornerSpec::C2 => {
                records.push(BtRecord { problem: &spec.problem, label: "C2".into(), lambda: 0.0, point: &c2 })
            }
        }
    }
    for (l, p) in &shared {
        records.push(BtRecord {
            problem: &spec.problem,
            label: format!("time-share({})", fmt_sig(*l)),
            lambda: *l,
            point: p,
        });
    }
    if records.is_empty() {
        return Err(CliError::Config("no corners or time-sharing weights requested".into()));
    }
    emit_curve(&records, &out.join("results.csv"))?;
    let corner_json =
        |p: &RateDistortionPoint| json!({ "rates": p.rates, "distortions": p.distortions, "sum_rate": p.sum_rate() });
    let result = json!({
        "C1": corner_json(&c1),
        "C2": corner_json(&c2),
        "phi1": phi1.to_rows(),
        "phi2": phi2.to_rows(),
        "time_share": shared.iter().map(|(l, p)| json!({ "lambda": l, "rates": p.rates, "distortions": p.distortions })).collect::<Vec<_>>(),
    });
    write_summary(out, "bt-corner", config, notes, Vec::new(), result)
}

pub fn softcover(
    config: &ExperimentConfig,
    spec: &SoftcoverSpec,
    notes: &[String],
    out: &Path,
) -> Result<(), CliError> {
    if spec.joint_xy.arity() != 2 {
        return Err(CliError::Config("joint_xy must have two axes".into()));
    }
    let sweep = |f: &dyn Fn() -> softcover::Result<softcover::softcover::SoftcoverReport>| {
        f().map_err(|e| match e {
            softcover::Error::EnumerationLimit { .. } | softcover::Error::InvalidParameter(_) => CliError::config(e),
            other => CliError::from(other),
        })
    };
    let mut reports = vec![sweep(&|| {
        softcover_sweep(&spec.joint_xy, &spec.rates, &spec.ns, spec.codebooks_per_cell, spec.master_seed)
    })?];
    if let Some(pair) = &spec.pair_output {
        reports.push(sweep(&|| {
            softcover_sweep_wz(
                &pair.joint_xb,
                &pair.test_channel,
                &spec.rates,
                &spec.ns,
                spec.codebooks_per_cell,
                spec.master_seed,
            )
        })?);
    }
    let records: Vec<SoftcoverRecord> = reports.iter().flat_map(SoftcoverRecord::from_report).collect();
    emit_curve(&records, &out.join("results.csv"))?;
    let result = json!({
        "label": "exact enumeration; trend checks against recorded regression values",
        "reports": reports.iter().map(|r| json!({
            "variant": r.variant,
            "mutual_information": r.mutual_information,
            "codebooks_per_cell": r.codebooks_per_cell,
            "seed": r.seed,
            "cells": r.cells.iter().map(|c| json!({
                "rate": c.rate, "n": c.n, "codebook_size": c.codebook_size, "mean_tv": c.mean_tv,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    write_summary(out, "softcover", config, notes, Vec::new(), result)
}

/// Runs the identity checks; a failed identity is a runtime error reported after the outputs are written.
pub fn verify_identities(
    config: Option<&ExperimentConfig>,
    spec: Option<&IdentitiesSpec>,
    notes: &[String],
    out: &Path,
) -> Result<(), CliError> {
    let fixtures: Vec<QFixture> = match spec {
        Some(s) => s.fixtures.iter().map(QFixture::from).collect(),
        None => shipped_q_fixtures(),
    };
    if fixtures.is_empty() {
        return Err(CliError::Config("no fixtures given".into()));
    }
    let reports = fixtures
        .iter()
        .map(|f| {
            verify_q_identities(f).map_err(|e| match e {
                softcover::Error::EnumerationLimit { .. } => CliError::Config(format!("fixture {}: {e}", f.name)),
                other => CliError::Config(format!("fixture {}: {other}", f.name)),
            })
        })
        .collect::<Result<Vec<IdentityReport>, _>>()?;
    write_csv(&out.join("results.csv"), IDENTITY_HEADER, identity_rows(&reports))?;
    let all = reports.iter().all(|r| r.passed);
    let shipped = ExperimentConfig::VerifyIdentities(IdentitiesSpec {
        fixtures: fixtures
            .iter()
            .map(|f| crate::config::FixtureSpec {
                name: f.name.clone(),
                joint_xb: f.joint_xb.clone(),
                test_channel: f.test_channel.clone(),
                n: f.n,
                num_m: f.num_m,
                num_mprime: f.num_mprime,
                seed: f.seed,
            })
            .collect(),
        out: None,
    });
    let result = json!({ "passed": all, "tolerance": softcover::softcover::IDENTITY_TOL, "reports": reports });
    write_summary(out, "verify-identities", config.unwrap_or(&shipped), notes, Vec::new(), result)?;
    if all {
        Ok(())
    } else {
        Err(CliError::Runtime("identity check failed; see results.csv".into()))
    }
}

fn codebook_rows<'a>(label: &str, cb: &'a Codebook) -> impl Iterator<Item = Vec<String>> + 'a {
    let label = label.to_string();
    (0..cb.len()).map(move |flat| {
        let msg = cb.message(flat);
        let mut row = vec![label.clone(), msg.m.to_string(), msg.mprime.to_string()];
        row.extend(cb.word(flat).iter().map(|s| s.to_string()));
        row
    })
}

pub fn dump_codebook(config: &ExperimentConfig, block: usize, out: &Path) -> Result<(), CliError> {
    let books: Vec<(&str, Codebook)> = match config {
        ExperimentConfig::P2p(spec) => vec![("p2p", spec.build()?.codebook(block)?)],
        ExperimentConfig::Wz(spec) => vec![("wz", spec.build()?.codebook(block)?)],
        ExperimentConfig::Bt(spec) => {
            let (a, b) = spec.build()?.codebooks(block)?;
            vec![("bt-1", a), ("bt-2", b)]
        }
        other => {
            return Err(CliError::Config(format!("dump-codebook needs a simulation config, got {:?}", other.scheme())))
        }
    };
    let n = books[0].1.n();
    let mut header: Vec<String> = vec!["codebook".into(), "m".into(), "mprime".into()];
    header.extend((0..n).map(|t| format!("t{t}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = books.iter().flat_map(|(label, cb)| codebook_rows(label, cb));
    write_csv(&out.join("codebook.csv"), &header, rows)
}
