//! `count`, `compare` and `generate` subcommands.
//!
//! Exit codes: 0 on success, 1 for bad input or usage, 2 when an internal
//! consistency check trips (for example kernels disagreeing on a count).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::counting::{
    count_triangles_with, CountError, CountReport, KernelChoice, RepetitionPolicy, Timing,
};
use crate::generate::{generate, write_edge_list, GenerateError, GraphKind};
use crate::graph_io::{
    apply_permutation, canonicalize, load_edge_list, load_matrix_market, CsrGraph, GraphIoError,
};
use crate::metrics::{
    derive_metrics, emit_records, untimed_record, MetricInputs, MetricRecord, MetricsError,
    OutputFormat,
};
use crate::reorder::{make_permutation, SortOrder};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Open {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Load { path: PathBuf, source: GraphIoError },
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("internal consistency failure: triangle counts disagree: {0}")]
    Disagreement(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Count(CountError::Inconsistent(_)) | CliError::Disagreement(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "matchcheck",
    version,
    about = "Exact triangle counting with match-check metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count triangles with one ordering and one kernel.
    Count(RunConfig),
    /// Run every ordering with every kernel and report all six records.
    Compare(RunConfig),
    /// Print a synthetic edge list.
    Generate(GenerateConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum InputFormat {
    /// `.mtx` files are MatrixMarket, anything else is an edge list
    #[default]
    Auto,
    Tsv,
    Mtx,
}

impl InputFormat {
    pub fn resolve(self, path: &Path) -> InputFormat {
        match self {
            InputFormat::Auto => {
                let is_mtx = path
                    .extension()
                    .is_some_and(|e| e.eq_ignore_ascii_case("mtx"));
                if is_mtx {
                    InputFormat::Mtx
                } else {
                    InputFormat::Tsv
                }
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "format", value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,
    /// original, degree-desc or degree-asc
    #[arg(long, default_value = "original")]
    pub order: SortOrder,
    /// scalar or blocked
    #[arg(long, default_value = "scalar")]
    pub kernel: KernelChoice,
    /// csv or json-lines
    #[arg(long = "output", default_value = "csv")]
    pub output_format: OutputFormat,
    /// Nominal clock for checks per cycle.
    #[arg(long)]
    pub cpu_ghz: Option<f64>,
    /// Edges processed in one second, for the beta exponent.
    #[arg(long)]
    pub n1: Option<f64>,
    /// Accepted for symmetry with `generate`; counting is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip timed runs and report zero wall time.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateConfig {
    /// gnp, complete, star, path or interleaved-fixture
    #[arg(long)]
    pub kind: GraphKind,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn load_graph(path: &Path, format: InputFormat) -> Result<CsrGraph, CliError> {
    let file = File::open(path).map_err(|source| CliError::Open {
        path: path.to_owned(),
        source,
    })?;
    let reader = BufReader::new(file);
    let el = match format.resolve(path) {
        InputFormat::Mtx => load_matrix_market(reader),
        _ => load_edge_list(reader),
    }
    .map_err(|source| CliError::Load {
        path: path.to_owned(),
        source,
    })?;
    Ok(canonicalize(&el))
}

fn graph_label(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

impl RunConfig {
    fn timing(&self) -> Timing {
        if self.no_timing {
            Timing::Off
        } else {
            Timing::Repeated(RepetitionPolicy::default())
        }
    }

    fn record(
        &self,
        g: &CsrGraph,
        report: &CountReport,
        baseline: Option<&CountReport>,
    ) -> Result<MetricRecord, CliError> {
        let inputs = MetricInputs {
            num_vertices: g.num_vertices() as u64,
            num_edges: g.num_edges() as u64,
            cpu_ghz: self.cpu_ghz,
            baseline,
            n1: self.n1,
        };
        if self.no_timing {
            Ok(untimed_record(report, &inputs))
        } else {
            Ok(derive_metrics(report, &inputs)?)
        }
    }
}

/// Counting function used by the commands; swapped out in tests.
pub type Counter<'a> =
    dyn Fn(&CsrGraph, KernelChoice, Timing) -> Result<CountReport, CountError> + 'a;

pub fn cmd_count(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&cfg.input, cfg.input_format)?;
    let g = apply_permutation(&g, &make_permutation(&g, cfg.order)).map_err(CountError::from)?;
    let report = count_triangles_with(&g, cfg.kernel, cfg.timing())?
        .with_labels(graph_label(&cfg.input), cfg.order.name());
    let record = cfg.record(&g, &report, None)?;
    emit_records(&[record], cfg.output_format, out)?;
    Ok(())
}

pub fn cmd_compare(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    cmd_compare_with(cfg, out, &count_triangles_with)
}

pub fn cmd_compare_with(
    cfg: &RunConfig,
    out: &mut dyn Write,
    counter: &Counter<'_>,
) -> Result<(), CliError> {
    let original = load_graph(&cfg.input, cfg.input_format)?;
    let label = graph_label(&cfg.input);

    let mut runs = Vec::new();
    for order in SortOrder::ALL {
        // relabeling happens outside any timed region
        let g = apply_permutation(&original, &make_permutation(&original, order))
            .map_err(CountError::from)?;
        for kernel in KernelChoice::ALL {
            let report = counter(&g, kernel, cfg.timing())?.with_labels(&label, order.name());
            runs.push(report);
        }
    }

    let first = runs[0].triangles;
    if runs.iter().any(|r| r.triangles != first) {
        let summary: Vec<String> = runs
            .iter()
            .map(|r| format!("{}/{}={}", r.order_label, r.kernel, r.triangles))
            .collect();
        return Err(CliError::Disagreement(summary.join(", ")));
    }

    let mut records = Vec::with_capacity(runs.len());
    for report in &runs {
        let baseline = runs
            .iter()
            .find(|r| r.order_label == SortOrder::Original.name() && r.kernel == report.kernel);
        records.push(cfg.record(&original, report, baseline)?);
    }
    emit_records(&records, cfg.output_format, out)?;
    Ok(())
}

pub fn cmd_generate(cfg: &GenerateConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let el = generate(cfg.kind, cfg.n, cfg.p, cfg.seed)?;
    write_edge_list(&el, out)?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return 1;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let result = match &cli.command {
        Command::Count(cfg) => cmd_count(cfg, out),
        Command::Compare(cfg) => cmd_compare(cfg, out),
        Command::Generate(cfg) => cmd_generate(cfg, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
