//! Synthetic graphs for tests and benchmarks.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph_io::{EdgeList, VertexId};

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("edge probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("{0} vertices do not fit 32-bit vertex ids")]
    TooManyVertices(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Gnp,
    Complete,
    Star,
    Path,
    InterleavedFixture,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Gnp => "gnp",
            GraphKind::Complete => "complete",
            GraphKind::Star => "star",
            GraphKind::Path => "path",
            GraphKind::InterleavedFixture => "interleaved-fixture",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            GraphKind::Gnp,
            GraphKind::Complete,
            GraphKind::Star,
            GraphKind::Path,
            GraphKind::InterleavedFixture,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| format!("unknown graph kind {s:?}"))
    }
}

fn check_n(n: usize) -> Result<VertexId, GenerateError> {
    VertexId::try_from(n).map_err(|_| GenerateError::TooManyVertices(n))
}

/// Erdős–Rényi G(n, p); each pair `i < j` is kept independently.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<EdgeList, GenerateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenerateError::BadProbability(p));
    }
    let n = check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Ok(EdgeList::new(edges).with_hint(n as usize))
}

pub fn complete(n: usize) -> Result<EdgeList, GenerateError> {
    let n = check_n(n)?;
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Ok(EdgeList::new(edges).with_hint(n as usize))
}

/// Center `n - 1`, leaves `0..n - 1`.
pub fn star(n: usize) -> Result<EdgeList, GenerateError> {
    let n = check_n(n)?;
    let edges = match n.checked_sub(1) {
        Some(center) => (0..center).map(|leaf| (center, leaf)).collect(),
        None => Vec::new(),
    };
    Ok(EdgeList::new(edges).with_hint(n as usize))
}

pub fn path(n: usize) -> Result<EdgeList, GenerateError> {
    let n = check_n(n)?;
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    Ok(EdgeList::new(edges).with_hint(n as usize))
}

/// Two hubs whose lower neighborhoods are the evens and odds of `0..16`.
/// The hub edge `(17, 16)` is the only intersection with two non-empty
/// sides, and merging evens against odds takes 15 checks with no match.
pub fn interleaved_fixture() -> EdgeList {
    let (even_hub, odd_hub) = (16, 17);
    let mut edges: Vec<(VertexId, VertexId)> = (0..8)
        .map(|k| (even_hub, 2 * k))
        .chain((0..8).map(|k| (odd_hub, 2 * k + 1)))
        .collect();
    edges.push((odd_hub, even_hub));
    EdgeList::new(edges).with_hint(18)
}

pub fn generate(kind: GraphKind, n: usize, p: f64, seed: u64) -> Result<EdgeList, GenerateError> {
    match kind {
        GraphKind::Gnp => gnp(n, p, seed),
        GraphKind::Complete => complete(n),
        GraphKind::Star => star(n),
        GraphKind::Path => path(n),
        GraphKind::InterleavedFixture => Ok(interleaved_fixture()),
    }
}

/// Writes `src<TAB>dst` lines, preceded by a comment with the vertex count.
pub fn write_edge_list<W: Write>(el: &EdgeList, mut sink: W) -> std::io::Result<()> {
    if let Some(n) = el.num_vertices_hint {
        writeln!(sink, "# vertices {n} edges {}", el.edges.len())?;
    }
    for &(a, b) in &el.edges {
        writeln!(sink, "{a}\t{b}")?;
    }
    sink.flush()
}
