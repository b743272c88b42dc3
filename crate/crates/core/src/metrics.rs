//! Performance records derived from count reports, and their CSV /
//! JSON-lines serialization.
//!
//! Rates:
//! - checks per second: `match_checks / wall_time`
//! - edges per second: `num_edges / wall_time`
//! - checks per cycle: checks per second over a nominal clock (`cpu_ghz`)
//! - speedup: `baseline.wall_time / wall_time`
//! - beta: exponent in `wall_time = (num_edges / n1)^beta`, i.e.
//!   `ln(wall_time) / ln(num_edges / n1)`

use std::fmt;
use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::CountReport;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("wall time must be positive, got {0}")]
    NonPositiveWallTime(f64),
    #[error("baseline wall time must be positive, got {0}")]
    NonPositiveBaseline(f64),
    #[error("cpu frequency must be positive and finite, got {0} GHz")]
    BadFrequency(f64),
    #[error("n1 must be positive and finite, got {0}")]
    BadN1(f64),
    #[error("beta is undefined when num_edges equals n1 ({0})")]
    BetaUndefined(f64),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One output row. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub graph_label: String,
    pub order_label: String,
    pub kernel_label: String,
    pub num_vertices: u64,
    pub num_edges: u64,
    pub triangles: u64,
    pub match_checks: u64,
    #[serde(rename = "wall_time_s")]
    pub wall_time: f64,
    #[serde(rename = "checks_per_sec")]
    pub checks_per_second: f64,
    #[serde(rename = "edges_per_sec")]
    pub edges_per_second: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks_per_cycle: Option<f64>,
    #[serde(rename = "speedup", default, skip_serializing_if = "Option::is_none")]
    pub speedup_vs_original: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

/// CSV view of a record: every column is always present, absent optionals
/// become empty cells.
#[derive(Serialize)]
struct CsvRow<'a> {
    graph_label: &'a str,
    order_label: &'a str,
    kernel_label: &'a str,
    num_vertices: u64,
    num_edges: u64,
    triangles: u64,
    match_checks: u64,
    wall_time_s: f64,
    checks_per_sec: f64,
    edges_per_sec: f64,
    checks_per_cycle: Option<f64>,
    speedup: Option<f64>,
    beta: Option<f64>,
}

impl<'a> From<&'a MetricRecord> for CsvRow<'a> {
    fn from(r: &'a MetricRecord) -> Self {
        CsvRow {
            graph_label: &r.graph_label,
            order_label: &r.order_label,
            kernel_label: &r.kernel_label,
            num_vertices: r.num_vertices,
            num_edges: r.num_edges,
            triangles: r.triangles,
            match_checks: r.match_checks,
            wall_time_s: r.wall_time,
            checks_per_sec: r.checks_per_second,
            edges_per_sec: r.edges_per_second,
            checks_per_cycle: r.checks_per_cycle,
            speedup: r.speedup_vs_original,
            beta: r.beta,
        }
    }
}

pub const COLUMNS: [&str; 13] = [
    "graph_label",
    "order_label",
    "kernel_label",
    "num_vertices",
    "num_edges",
    "triangles",
    "match_checks",
    "wall_time_s",
    "checks_per_sec",
    "edges_per_sec",
    "checks_per_cycle",
    "speedup",
    "beta",
];

#[derive(Debug, Clone, Copy, Default)]
pub struct MetricInputs<'a> {
    pub num_vertices: u64,
    pub num_edges: u64,
    pub cpu_ghz: Option<f64>,
    /// Run on the unrelabeled graph with the same kernel.
    pub baseline: Option<&'a CountReport>,
    /// Edges processed in one second, for beta.
    pub n1: Option<f64>,
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

pub fn derive_metrics(
    r: &CountReport,
    inputs: &MetricInputs,
) -> Result<MetricRecord, MetricsError> {
    let t = r.wall_time;
    if !positive(t) {
        return Err(MetricsError::NonPositiveWallTime(t));
    }
    let checks_per_second = r.stats.match_checks as f64 / t;
    let edges_per_second = inputs.num_edges as f64 / t;

    let checks_per_cycle = inputs
        .cpu_ghz
        .map(|ghz| {
            if positive(ghz) {
                Ok(checks_per_second / (ghz * 1e9))
            } else {
                Err(MetricsError::BadFrequency(ghz))
            }
        })
        .transpose()?;

    let speedup_vs_original = inputs
        .baseline
        .map(|base| {
            if positive(base.wall_time) {
                Ok(base.wall_time / t)
            } else {
                Err(MetricsError::NonPositiveBaseline(base.wall_time))
            }
        })
        .transpose()?;

    let beta = inputs
        .n1
        .map(|n1| {
            if !positive(n1) {
                return Err(MetricsError::BadN1(n1));
            }
            let ratio = inputs.num_edges as f64 / n1;
            if ratio == 1.0 {
                return Err(MetricsError::BetaUndefined(n1));
            }
            Ok(t.ln() / ratio.ln())
        })
        .transpose()?;

    Ok(MetricRecord {
        checks_per_cycle,
        speedup_vs_original,
        beta,
        ..base_record(r, inputs, t, checks_per_second, edges_per_second)
    })
}

/// Record for a run without timing: wall time and rates are zero and the
/// time-derived optionals are left out.
pub fn untimed_record(r: &CountReport, inputs: &MetricInputs) -> MetricRecord {
    base_record(r, inputs, 0.0, 0.0, 0.0)
}

fn base_record(
    r: &CountReport,
    inputs: &MetricInputs,
    wall_time: f64,
    checks_per_second: f64,
    edges_per_second: f64,
) -> MetricRecord {
    MetricRecord {
        graph_label: r.graph_label.clone(),
        order_label: r.order_label.clone(),
        kernel_label: r.kernel.name().to_string(),
        num_vertices: inputs.num_vertices,
        num_edges: inputs.num_edges,
        triangles: r.triangles,
        match_checks: r.stats.match_checks,
        wall_time,
        checks_per_second,
        edges_per_second,
        checks_per_cycle: None,
        speedup_vs_original: None,
        beta: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonLines,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::JsonLines => "json-lines",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            _ => Err(format!(
                "unknown output format {s:?} (expected csv or json-lines)"
            )),
        }
    }
}

pub fn emit_records<W: Write>(
    records: &[MetricRecord],
    format: OutputFormat,
    mut sink: W,
) -> Result<(), MetricsError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(sink);
            w.write_record(COLUMNS)?;
            for r in records {
                w.serialize(CsvRow::from(r))?;
            }
            w.flush()?;
        }
        OutputFormat::JsonLines => {
            for r in records {
                serde_json::to_writer(&mut sink, r)?;
                sink.write_all(b"\n")?;
            }
            sink.flush()?;
        }
    }
    Ok(())
}

pub fn read_records<R: Read>(
    format: OutputFormat,
    source: R,
) -> Result<Vec<MetricRecord>, MetricsError> {
    match format {
        OutputFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(source);
            let records = rdr.deserialize().collect::<Result<Vec<_>, _>>()?;
            Ok(records)
        }
        OutputFormat::JsonLines => {
            let mut out = Vec::new();
            for line in std::io::BufReader::new(source).lines() {
                let line = line?;
                if !line.trim().is_empty() {
                    out.push(serde_json::from_str(&line)?);
                }
            }
            Ok(out)
        }
    }
}
