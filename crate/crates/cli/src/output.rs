//! CSV and JSON writers.

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use serde::Serialize;
use softcover::rd::RateDistortionPoint;
use softcover::schemes::TrialResult;
use softcover::softcover::{IdentityReport, SoftcoverReport};

use crate::CliError;

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// One row of a plot-ready curve.
pub trait CurveRecord {
    fn header() -> &'static [&'static str];
    /// Rows are emitted in ascending lexicographic order of this key.
    fn sort_key(&self) -> Vec<f64>;
    fn fields(&self) -> Vec<String>;
}

/// Writes `records` as CSV with a stable column order, sorted by [`CurveRecord::sort_key`].
pub fn emit_curve<R: CurveRecord>(records: &[R], path: &Path) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Runtime("nothing to emit".into()));
    }
    let mut order: Vec<&R> = records.iter().collect();
    order.sort_by(|a, b| {
        a.sort_key()
            .iter()
            .zip(b.sort_key().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    write_csv(path, R::header(), order.iter().map(|r| r.fields()))
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Runtime(format!("writing {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))
}

/// A solver result at a requested target distortion.
pub struct RdRecord<'a> {
    pub problem: &'a str,
    pub target: f64,
    pub point: &'a RateDistortionPoint,
}

impl CurveRecord for RdRecord<'_> {
    fn header() -> &'static [&'static str] {
        &["problem", "target_d", "distortion", "rate", "status", "iterations"]
    }

    fn sort_key(&self) -> Vec<f64> {
        vec![self.target]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.problem.to_string(),
            fmt_sig(self.target),
            fmt_sig(self.point.distortion()),
            fmt_sig(self.point.rate()),
            self.point.status.as_str().to_string(),
            self.point.iterations.to_string(),
        ]
    }
}

/// A Berger-Tung corner or time-shared point.
pub struct BtRecord<'a> {
    pub problem: &'a str,
    pub label: String,
    /// Weight on C1; 1 for C1 itself and 0 for C2.
    pub lambda: f64,
    pub point: &'a RateDistortionPoint,
}

impl CurveRecord for BtRecord<'_> {
    fn header() -> &'static [&'static str] {
        &["problem", "point", "lambda", "r1", "r2", "d1", "d2", "status"]
    }

    fn sort_key(&self) -> Vec<f64> {
        vec![-self.lambda]
    }

    fn fields(&self) -> Vec<String> {
        let p = self.point;
        vec![
            self.problem.to_string(),
            self.label.clone(),
            fmt_sig(self.lambda),
            fmt_sig(p.rates[0]),
            fmt_sig(p.rates[1]),
            fmt_sig(p.distortions[0]),
            fmt_sig(p.distortions[1]),
            p.status.as_str().to_string(),
        ]
    }
}

/// One codebook of a soft-covering sweep.
pub struct SoftcoverRecord {
    pub variant: &'static str,
    pub rate: f64,
    pub n: usize,
    pub codebook_size: usize,
    pub codebook_index: usize,
    pub tv: f64,
    pub mean_tv: f64,
}

impl SoftcoverRecord {
    pub fn from_report(report: &SoftcoverReport) -> Vec<Self> {
        report
            .cells
            .iter()
            .flat_map(|c| {
                c.tvs.iter().enumerate().map(move |(k, &tv)| SoftcoverRecord {
                    variant: report.variant,
                    rate: c.rate,
                    n: c.n,
                    codebook_size: c.codebook_size,
                    codebook_index: k,
                    tv,
                    mean_tv: c.mean_tv,
                })
            })
            .collect()
    }
}

impl CurveRecord for SoftcoverRecord {
    fn header() -> &'static [&'static str] {
        &["variant", "rate", "n", "codebook_size", "codebook_index", "tv", "mean_tv"]
    }

    fn sort_key(&self) -> Vec<f64> {
        let variant = if self.variant == "x" { 0.0 } else { 1.0 };
        vec![variant, self.rate, self.n as f64, self.codebook_index as f64]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.variant.to_string(),
            fmt_sig(self.rate),
            self.n.to_string(),
            self.codebook_size.to_string(),
            self.codebook_index.to_string(),
            fmt_sig(self.tv),
            fmt_sig(self.mean_tv),
        ]
    }
}

pub fn identity_rows(reports: &[IdentityReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.fixture.clone(),
                fmt_sig(r.posterior_max_error),
                r.sequences_checked.to_string(),
                fmt_sig(r.ensemble_max_error),
                r.codebooks_enumerated.to_string(),
                r.passed.to_string(),
            ]
        })
        .collect()
}

pub const IDENTITY_HEADER: &[&str] =
    &["fixture", "posterior_max_error", "sequences_checked", "ensemble_max_error", "codebooks_enumerated", "passed"];

/// Per-trial header for a scheme with `sources` distortion columns.
pub fn trial_header(sources: usize) -> Vec<&'static str> {
    let mut h = vec!["trial", "trial_seed", "codebook_block"];
    if sources == 1 {
        h.push("distortion");
    } else {
        h.extend(["distortion_1", "distortion_2"]);
    }
    h.extend(["virtual_decode_ok", "all_zero_likelihood", "decode_degenerate"]);
    h
}

pub fn trial_row(r: &TrialResult) -> Vec<String> {
    let mut row = vec![r.trial_index.to_string(), r.trial_seed.to_string(), r.codebook_block.to_string()];
    row.extend(r.distortions.iter().map(|&d| fmt_sig(d)));
    row.push(r.virtual_decode_ok.map_or(String::new(), |ok| ok.to_string()));
    row.push(r.flags.all_zero_likelihood.to_string());
    row.push(r.flags.decode_degenerate.to_string());
    row
}
