//! Machine-readable reports. JSON and CSV carry the same columns; both
//! round-trip byte for byte through [`parse_report`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::DomainDescriptor;
use crate::engine::DimReport;
use crate::error::{Error, Result};
use crate::network::Architecture;
use crate::theory::{expected_dim_general, expected_dim_single_output, theorem_verdict};

/// Column order shared by both formats. `error` is appended only when some
/// row carries one.
pub const COLUMNS: [&str; 14] = [
    "arch",
    "degrees",
    "expdim",
    "expdim_refined",
    "dim_actual",
    "fiber_dim",
    "defective",
    "verdict",
    "trials",
    "seed",
    "domain",
    "prime",
    "pivot",
    "wall_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// One report line. Sampling fields are `None` on rows whose computation
/// failed; those rows carry `error`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub arch: Vec<usize>,
    pub degrees: Vec<u32>,
    pub expdim: u128,
    pub expdim_refined: Option<u128>,
    pub dim_actual: Option<usize>,
    pub fiber_dim: Option<usize>,
    pub defective: Option<bool>,
    pub verdict: Option<String>,
    pub trials: usize,
    pub seed: u64,
    pub domain: String,
    pub prime: Option<String>,
    pub pivot: Vec<usize>,
    pub wall_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn verdict_label(arch: &Architecture) -> Option<String> {
    theorem_verdict(arch).ok().map(|v| v.kind.label())
}

impl ReportRow {
    pub fn from_dims(r: &DimReport, wall_ms: Option<u64>) -> Self {
        ReportRow {
            arch: r.arch.widths().to_vec(),
            degrees: r.arch.degrees().to_vec(),
            expdim: r.expdim_general,
            expdim_refined: r.expdim_refined,
            dim_actual: Some(r.dim_actual),
            fiber_dim: Some(r.fiber_dim),
            defective: Some(r.defective),
            verdict: verdict_label(&r.arch),
            trials: r.trials,
            seed: r.seed,
            domain: r.domain.name().to_string(),
            prime: r.domain.modulus().map(|p| p.to_string()),
            pivot: r.pivots.clone(),
            wall_ms,
            error: None,
        }
    }

    /// A row for an architecture whose sampling failed.
    pub fn failed(
        arch: &Architecture,
        trials: usize,
        seed: u64,
        domain: DomainDescriptor,
        error: String,
        wall_ms: Option<u64>,
    ) -> Self {
        ReportRow {
            arch: arch.widths().to_vec(),
            degrees: arch.degrees().to_vec(),
            expdim: expected_dim_general(arch),
            expdim_refined: expected_dim_single_output(arch).ok(),
            dim_actual: None,
            fiber_dim: None,
            defective: None,
            verdict: verdict_label(arch),
            trials,
            seed,
            domain: domain.name().to_string(),
            prime: domain.modulus().map(|p| p.to_string()),
            pivot: vec![0; arch.outputs()],
            wall_ms,
            error: Some(error),
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, ToString::to_string)
}

fn csv_fields(r: &ReportRow) -> Vec<String> {
    vec![
        join(&r.arch),
        join(&r.degrees),
        r.expdim.to_string(),
        opt(&r.expdim_refined),
        opt(&r.dim_actual),
        opt(&r.fiber_dim),
        opt(&r.defective),
        opt(&r.verdict),
        r.trials.to_string(),
        r.seed.to_string(),
        r.domain.clone(),
        opt(&r.prime),
        join(&r.pivot),
        opt(&r.wall_ms),
    ]
}

/// Renders rows as a pretty JSON array (trailing newline) or as CSV with a
/// header line.
pub fn render_report(rows: &[ReportRow], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("report rows serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let with_error = rows.iter().any(|r| r.error.is_some());
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
            let mut header: Vec<&str> = COLUMNS.to_vec();
            if with_error {
                header.push("error");
            }
            w.write_record(&header).expect("in-memory write");
            for r in rows {
                let mut f = csv_fields(r);
                if with_error {
                    f.push(opt(&r.error));
                }
                w.write_record(&f).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
    }
}

pub fn emit_report(rows: &[ReportRow], format: ReportFormat, path: &Path) -> Result<()> {
    fs::write(path, render_report(rows, format))
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.parse().map_err(|_| bad(format!("bad list entry {t:?}")))).collect()
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>> {
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(|_| bad(format!("bad field {s:?}")))
    }
}

fn parse_req<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| bad(format!("bad field {s:?}")))
}

pub fn parse_report(text: &str, format: ReportFormat) -> Result<Vec<ReportRow>> {
    match format {
        ReportFormat::Json => serde_json::from_str(text).map_err(|e| bad(format!("report JSON: {e}"))),
        ReportFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
            let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
            let with_error = header.len() == COLUMNS.len() + 1;
            if header.iter().take(COLUMNS.len()).ne(COLUMNS.iter().copied())
                || (with_error && &header[COLUMNS.len()] != "error")
                || header.len() > COLUMNS.len() + 1
            {
                return Err(bad("unexpected CSV header"));
            }
            let mut rows = Vec::new();
            for rec in rdr.records() {
                let f = rec.map_err(|e| bad(e.to_string()))?;
                rows.push(ReportRow {
                    arch: parse_list(&f[0])?,
                    degrees: parse_list(&f[1])?,
                    expdim: parse_req(&f[2])?,
                    expdim_refined: parse_opt(&f[3])?,
                    dim_actual: parse_opt(&f[4])?,
                    fiber_dim: parse_opt(&f[5])?,
                    defective: parse_opt(&f[6])?,
                    verdict: parse_opt(&f[7])?,
                    trials: parse_req(&f[8])?,
                    seed: parse_req(&f[9])?,
                    domain: f[10].to_string(),
                    prime: parse_opt(&f[11])?,
                    pivot: parse_list(&f[12])?,
                    wall_ms: parse_opt(&f[13])?,
                    error: if with_error { parse_opt(&f[14])? } else { None },
                });
            }
            Ok(rows)
        }
    }
}
