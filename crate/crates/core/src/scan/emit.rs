//! CSV and JSON output of scan tables.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every f64 exactly. The data section carries no wall-clock
//! information, so identical inputs give identical bytes.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::{Axis, ScanResult, ScanSpec, Status};
use crate::error::{OmitError, Result};

/// Provenance of a scan table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub kind: &'static str,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub axes: Vec<Axis>,
    pub points: usize,
    /// Fully resolved scenario as `key = value` pairs.
    pub config: Vec<(String, String)>,
    /// Derived quantities of the unswept base scenario, where it resolves.
    pub derived: Vec<(String, f64)>,
}

fn timestamp() -> u64 {
    if let Some(v) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()) {
        return v;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl Metadata {
    pub fn new(spec: &ScanSpec) -> Result<Self> {
        let mut derived = Vec::new();
        if let Ok(sp) = spec.base.system_params() {
            derived.push(("g_rad_s".to_string(), sp.g));
            derived.push(("lambda_rad_s".to_string(), sp.lambda));
            derived.push(("gamma1_rad_s".to_string(), sp.gamma[0]));
            derived.push(("kappa_rad_s".to_string(), sp.kappa));
            if let Ok(dc) = spec.base.drive(&sp) {
                derived.push(("eps_l".to_string(), dc.eps_l));
                derived.push(("eps_p".to_string(), dc.eps_p));
                derived.push(("eps_p_over_eps_l".to_string(), spec.base.probe_fraction));
                derived.push(("delta_c_rad_s".to_string(), dc.delta_c));
            }
        }
        Ok(Metadata {
            tool: "omit-lab",
            version: env!("CARGO_PKG_VERSION"),
            kind: spec.kind.name(),
            timestamp: timestamp(),
            axes: spec.axes.clone(),
            points: spec.point.as_ref().map_or(spec.n_points(), |_| 1),
            config: spec.base.resolved_pairs(),
            derived,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("metadata serializes")
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header row plus one line per row; the last column is `status`.
pub fn write_csv<W: Write>(r: &ScanResult, mut w: W) -> Result<()> {
    let io = |e: std::io::Error| OmitError::Io(e.to_string());
    writeln!(w, "{},status", r.columns.join(",")).map_err(io)?;
    for (row, st) in r.rows.iter().zip(&r.status) {
        let cells: Vec<String> = row.iter().map(|v| fmt(*v)).collect();
        writeln!(w, "{},{}", cells.join(","), st.name()).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[derive(Serialize)]
struct Envelope<'a> {
    metadata: &'a Metadata,
    columns: &'a [String],
    rows: &'a [Vec<f64>],
    status: Vec<&'static str>,
}

/// Metadata envelope with the table; non-finite cells become `null`.
pub fn write_json<W: Write>(r: &ScanResult, mut w: W) -> Result<()> {
    let env = Envelope {
        metadata: &r.metadata,
        columns: &r.columns,
        rows: &r.rows,
        status: r.status.iter().map(|s| s.name()).collect(),
    };
    serde_json::to_writer_pretty(&mut w, &env).map_err(|e| OmitError::Io(e.to_string()))?;
    writeln!(w).map_err(|e| OmitError::Io(e.to_string()))
}

/// Parsed CSV table: (columns, rows, status).
pub type ParsedTable = (Vec<String>, Vec<Vec<f64>>, Vec<Status>);

/// Read back a table written by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<ParsedTable> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| OmitError::Scan("empty CSV".into()))?;
    let mut columns: Vec<String> = header.split(',').map(str::to_string).collect();
    if columns.pop().as_deref() != Some("status") {
        return Err(OmitError::Scan("last CSV column must be `status`".into()));
    }
    let mut rows = Vec::new();
    let mut status = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut cells: Vec<&str> = line.split(',').collect();
        let st = cells.pop().and_then(Status::parse).ok_or_else(|| OmitError::Scan(format!("row {i}: bad status")))?;
        if cells.len() != columns.len() {
            return Err(OmitError::Scan(format!("row {i}: {} cells for {} columns", cells.len(), columns.len())));
        }
        let row = cells
            .iter()
            .map(|c| c.parse::<f64>().map_err(|_| OmitError::Scan(format!("row {i}: bad number `{c}`"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
        status.push(st);
    }
    Ok((columns, rows, status))
}
