//! Graph ingestion and canonicalization into lower-triangular CSR.
//!
//! Every loader produces an [`EdgeList`] that mirrors the input file line for
//! line. [`canonicalize`] then symmetrizes, drops self-loops and duplicates,
//! and stores each undirected edge `{a, b}` exactly once, as `min(a, b)` in the
//! row of `max(a, b)`. The row of `v` is therefore its lower neighborhood.

use std::io::BufRead;

use thiserror::Error;

use crate::reorder::Permutation;

pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix market format: {0}")]
    Format(String),
    #[error("line {line}: entry ({row}, {col}) outside {rows}x{cols} matrix")]
    OutOfRange {
        line: usize,
        row: u64,
        col: u64,
        rows: u64,
        cols: u64,
    },
    #[error("permutation has length {got}, graph has {expected} vertices")]
    PermutationLength { expected: usize, got: usize },
    #[error("invalid CSR graph: {0}")]
    InvalidCsr(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Raw `(src, dst)` pairs in input order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub num_vertices_hint: Option<usize>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl EdgeList {
    pub fn new(edges: Vec<(VertexId, VertexId)>) -> Self {
        EdgeList {
            num_vertices_hint: None,
            edges,
        }
    }

    pub fn with_hint(mut self, num_vertices: usize) -> Self {
        self.num_vertices_hint = Some(num_vertices);
        self
    }
}

/// Lower-triangular adjacency in compressed sparse row form.
///
/// Fields are private so that every instance in circulation has passed
/// [`CsrGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrGraph {
    row_offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

impl CsrGraph {
    /// Builds a graph from raw CSR arrays, rejecting anything that is not
    /// sorted, duplicate-free and strictly lower-triangular.
    pub fn from_parts(
        row_offsets: Vec<usize>,
        neighbors: Vec<VertexId>,
    ) -> Result<Self, GraphIoError> {
        let g = CsrGraph {
            row_offsets,
            neighbors,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn empty(num_vertices: usize) -> Self {
        CsrGraph {
            row_offsets: vec![0; num_vertices + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.row_offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn neighbors(&self) -> &[VertexId] {
        &self.neighbors
    }

    /// Lower neighborhood of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[VertexId] {
        &self.neighbors[self.row_offsets[v]..self.row_offsets[v + 1]]
    }

    /// Stored entries as `(v, u)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.num_vertices())
            .flat_map(move |v| self.row(v).iter().map(move |&u| (v as VertexId, u)))
    }

    pub fn to_edge_list(&self) -> EdgeList {
        EdgeList {
            num_vertices_hint: Some(self.num_vertices()),
            edges: self.edges().collect(),
        }
    }

    pub fn validate(&self) -> Result<(), GraphIoError> {
        let bad = |msg: String| Err(GraphIoError::InvalidCsr(msg));
        if self.row_offsets.is_empty() {
            return bad("row_offsets is empty".into());
        }
        if self.row_offsets[0] != 0 {
            return bad(format!("row_offsets[0] = {}", self.row_offsets[0]));
        }
        if let Some(w) = self.row_offsets.windows(2).position(|w| w[0] > w[1]) {
            return bad(format!("row_offsets decreases at vertex {w}"));
        }
        let n = self.num_vertices();
        if self.row_offsets[n] != self.neighbors.len() {
            return bad(format!(
                "row_offsets[{n}] = {} but {} neighbors stored",
                self.row_offsets[n],
                self.neighbors.len()
            ));
        }
        for v in 0..n {
            let row = self.row(v);
            if let Some(&u) = row.iter().find(|&&u| u as usize >= v) {
                return bad(format!("row {v} holds {u}, not below the diagonal"));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("row {v} is not strictly ascending"));
            }
        }
        Ok(())
    }
}

/// What [`canonicalize`] threw away.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CanonSummary {
    pub input_edges: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    pub kept: usize,
}

fn parse_error(line: usize, msg: impl Into<String>) -> GraphIoError {
    GraphIoError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_vertex(tok: &str, line: usize) -> Result<VertexId, GraphIoError> {
    tok.parse::<VertexId>()
        .map_err(|e| parse_error(line, format!("bad vertex id {tok:?}: {e}")))
}

/// Reads a SNAP-style edge list: `#` or `%` comment lines, then `src dst`
/// per line. Anything after the second field is ignored.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<EdgeList, GraphIoError> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(src), Some(dst)) = (fields.next(), fields.next()) else {
            return Err(parse_error(line_no, "expected two vertex ids"));
        };
        edges.push((parse_vertex(src, line_no)?, parse_vertex(dst, line_no)?));
    }
    Ok(EdgeList::new(edges))
}

/// Reads a MatrixMarket coordinate file (pattern, real or integer field;
/// general or symmetric). Indices are shifted to 0-based and values dropped.
pub fn load_matrix_market<R: BufRead>(reader: R) -> Result<EdgeList, GraphIoError> {
    let mut lines = reader.lines().enumerate();

    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(GraphIoError::Format("missing header".into())),
    };
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(GraphIoError::Format(format!("bad header {header:?}")));
    }
    if tokens[2] != "coordinate" {
        return Err(GraphIoError::Format(format!(
            "unsupported layout {:?}",
            tokens[2]
        )));
    }
    match tokens[3].as_str() {
        "pattern" | "real" | "integer" => {}
        other => return Err(GraphIoError::Format(format!("unsupported field {other:?}"))),
    }
    match tokens[4].as_str() {
        "general" | "symmetric" => {}
        other => {
            return Err(GraphIoError::Format(format!(
                "unsupported symmetry {other:?}"
            )))
        }
    }

    let mut dims: Option<(u64, u64)> = None;
    let mut edges = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_index = |what: &str| -> Result<u64, GraphIoError> {
            let tok = fields
                .next()
                .ok_or_else(|| parse_error(line_no, format!("missing {what}")))?;
            tok.parse::<u64>()
                .map_err(|e| parse_error(line_no, format!("bad {what} {tok:?}: {e}")))
        };
        match dims {
            None => {
                let rows = next_index("row count")?;
                let cols = next_index("column count")?;
                next_index("entry count")?;
                dims = Some((rows, cols));
            }
            Some((rows, cols)) => {
                let row = next_index("row index")?;
                let col = next_index("column index")?;
                if row == 0 || col == 0 || row > rows || col > cols {
                    return Err(GraphIoError::OutOfRange {
                        line: line_no,
                        row,
                        col,
                        rows,
                        cols,
                    });
                }
                let to_id = |x: u64| {
                    VertexId::try_from(x - 1)
                        .map_err(|_| parse_error(line_no, format!("index {x} too large")))
                };
                edges.push((to_id(row)?, to_id(col)?));
            }
        }
    }
    let Some((rows, cols)) = dims else {
        return Err(GraphIoError::Format("missing dimension line".into()));
    };
    Ok(EdgeList {
        num_vertices_hint: Some(rows.max(cols) as usize),
        edges,
    })
}

pub fn canonicalize(el: &EdgeList) -> CsrGraph {
    canonicalize_with_summary(el).0
}

pub fn canonicalize_with_summary(el: &EdgeList) -> (CsrGraph, CanonSummary) {
    let max_id = el.edges.iter().map(|&(a, b)| a.max(b) as usize + 1).max();
    let n = max_id.unwrap_or(0).max(el.num_vertices_hint.unwrap_or(0));

    let mut summary = CanonSummary {
        input_edges: el.edges.len(),
        ..Default::default()
    };
    let mut lower: Vec<(VertexId, VertexId)> = Vec::with_capacity(el.edges.len());
    for &(a, b) in &el.edges {
        if a == b {
            summary.self_loops += 1;
        } else {
            lower.push((a.max(b), a.min(b)));
        }
    }
    lower.sort_unstable();
    let before = lower.len();
    lower.dedup();
    summary.duplicates = before - lower.len();
    summary.kept = lower.len();

    (build_csr(n, &lower), summary)
}

/// `entries` must be sorted by `(row, col)`, deduplicated, with `col < row`.
fn build_csr(n: usize, entries: &[(VertexId, VertexId)]) -> CsrGraph {
    let mut row_offsets = vec![0usize; n + 1];
    for &(v, _) in entries {
        row_offsets[v as usize + 1] += 1;
    }
    for v in 0..n {
        row_offsets[v + 1] += row_offsets[v];
    }
    let neighbors = entries.iter().map(|&(_, u)| u).collect();
    CsrGraph {
        row_offsets,
        neighbors,
    }
}

/// Relabels every vertex `v` as `p.forward()[v]` and re-canonicalizes.
pub fn apply_permutation(g: &CsrGraph, p: &Permutation) -> Result<CsrGraph, GraphIoError> {
    let n = g.num_vertices();
    if p.len() != n {
        return Err(GraphIoError::PermutationLength {
            expected: n,
            got: p.len(),
        });
    }
    let fwd = p.forward();
    let mut entries: Vec<(VertexId, VertexId)> = g
        .edges()
        .map(|(v, u)| {
            let (a, b) = (fwd[v as usize], fwd[u as usize]);
            (a.max(b), a.min(b))
        })
        .collect();
    entries.sort_unstable();
    Ok(build_csr(n, &entries))
}
