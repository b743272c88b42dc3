//! Triangle-count driver over lower-triangular CSR.
//!
//! For each stored edge `(v, u)` with `u < v` the full lower neighborhoods of
//! `v` and `u` are intersected. Every common lower neighbor `w < u < v` closes
//! exactly one triangle, and `u` itself can never match because it is not in
//! its own row.
//!
//! Counting runs twice: a timed pass with counters compiled out, and an
//! untimed instrumentation pass that gathers [`IntersectStats`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph_io::{CsrGraph, GraphIoError};
use crate::kernels::{
    blocked_intersect, blocked_merge, scalar_intersect, scalar_merge, IntersectStats, NoProbe,
};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    InvalidGraph(#[from] GraphIoError),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelChoice {
    Scalar,
    Blocked,
}

impl KernelChoice {
    pub const ALL: [KernelChoice; 2] = [KernelChoice::Scalar, KernelChoice::Blocked];

    pub fn name(self) -> &'static str {
        match self {
            KernelChoice::Scalar => "scalar",
            KernelChoice::Blocked => "blocked",
        }
    }
}

impl fmt::Display for KernelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scalar" => Ok(KernelChoice::Scalar),
            "blocked" | "simd" => Ok(KernelChoice::Blocked),
            _ => Err(format!("unknown kernel {s:?} (expected scalar or blocked)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub triangles: u64,
    pub stats: IntersectStats,
    /// Seconds spent in the counting loop. Zero when timing is off.
    pub wall_time: f64,
    pub kernel: KernelChoice,
    pub graph_label: String,
    pub order_label: String,
}

impl CountReport {
    pub fn with_labels(mut self, graph: impl Into<String>, order: impl Into<String>) -> Self {
        self.graph_label = graph.into();
        self.order_label = order.into();
        self
    }
}

/// How many timed runs to make. The minimum over all runs is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepetitionPolicy {
    pub min_runs: usize,
    pub min_total: Duration,
}

impl Default for RepetitionPolicy {
    fn default() -> Self {
        RepetitionPolicy {
            min_runs: 3,
            min_total: Duration::from_millis(100),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    /// No timed pass; `wall_time` is reported as zero.
    Off,
    Once,
    /// One warm-up run, then repeat per the policy and keep the fastest.
    Repeated(RepetitionPolicy),
}

/// Triangle count with counters compiled out. This is the loop that gets timed.
pub fn count_only(g: &CsrGraph, kernel: KernelChoice) -> u64 {
    match kernel {
        KernelChoice::Scalar => for_each_edge(g, |a, b| scalar_merge(a, b, &mut NoProbe)),
        KernelChoice::Blocked => for_each_edge(g, |a, b| blocked_merge(a, b, &mut NoProbe)),
    }
}

/// Aggregated counters over every intersection. For the blocked kernel
/// `match_checks` holds effective checks.
pub fn instrumented_stats(g: &CsrGraph, kernel: KernelChoice) -> IntersectStats {
    let intersect = match kernel {
        KernelChoice::Scalar => scalar_intersect,
        KernelChoice::Blocked => blocked_intersect,
    };
    let mut total = IntersectStats::default();
    for v in 0..g.num_vertices() {
        let row_v = g.row(v);
        for &u in row_v {
            total += intersect(row_v, g.row(u as usize));
        }
    }
    total
}

#[inline]
fn for_each_edge(g: &CsrGraph, mut intersect: impl FnMut(&[u32], &[u32]) -> u64) -> u64 {
    let mut triangles = 0;
    for v in 0..g.num_vertices() {
        let row_v = g.row(v);
        for &u in row_v {
            triangles += intersect(row_v, g.row(u as usize));
        }
    }
    triangles
}

fn timed(g: &CsrGraph, kernel: KernelChoice) -> (u64, Duration) {
    let start = Instant::now();
    let triangles = count_only(g, kernel);
    (triangles, start.elapsed())
}

pub fn count_triangles(g: &CsrGraph, kernel: KernelChoice) -> Result<CountReport, CountError> {
    count_triangles_with(g, kernel, Timing::Once)
}

pub fn count_triangles_with(
    g: &CsrGraph,
    kernel: KernelChoice,
    timing: Timing,
) -> Result<CountReport, CountError> {
    g.validate()?;

    let timed_result = match timing {
        Timing::Off => None,
        Timing::Once => Some(timed(g, kernel)),
        Timing::Repeated(policy) => {
            let (triangles, _) = timed(g, kernel);
            let mut best = Duration::MAX;
            let mut total = Duration::ZERO;
            let mut runs = 0;
            while runs < policy.min_runs || total < policy.min_total {
                let (t, elapsed) = timed(g, kernel);
                if t != triangles {
                    return Err(CountError::Inconsistent(format!(
                        "repeated run counted {t} triangles, first run {triangles}"
                    )));
                }
                best = best.min(elapsed);
                total += elapsed;
                runs += 1;
            }
            Some((triangles, best))
        }
    };

    let stats = instrumented_stats(g, kernel);
    let wall_time = match timed_result {
        Some((triangles, elapsed)) => {
            if triangles != stats.matches {
                return Err(CountError::Inconsistent(format!(
                    "timed pass counted {triangles} triangles, instrumented pass {}",
                    stats.matches
                )));
            }
            elapsed.as_secs_f64()
        }
        None => 0.0,
    };

    Ok(CountReport {
        triangles: stats.matches,
        stats,
        wall_time,
        kernel,
        graph_label: String::new(),
        order_label: String::new(),
    })
}

/// Adjacency entries consumed by all intersections of a scalar run. Fails
/// unless that equals match checks plus triangles.
pub fn traversed_edges(r: &CountReport) -> Result<u64, CountError> {
    if r.kernel != KernelChoice::Scalar {
        return Err(CountError::Inconsistent(format!(
            "traversed edges are defined for scalar runs, got {}",
            r.kernel
        )));
    }
    let expected = r.stats.match_checks + r.triangles;
    if r.stats.advances != expected {
        return Err(CountError::Inconsistent(format!(
            "advances {} != match checks {} + triangles {}",
            r.stats.advances, r.stats.match_checks, r.triangles
        )));
    }
    Ok(r.stats.advances)
}
