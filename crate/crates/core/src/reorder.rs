//! Degree-based vertex relabelings.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph_io::{CsrGraph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("entry {value} at position {index} is out of range for length {len}")]
    OutOfRange {
        index: usize,
        value: usize,
        len: usize,
    },
    #[error("new id {0} is assigned twice")]
    Duplicate(usize),
}

/// Bijective relabeling: `forward[old] = new`, `inverse[new] = old`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<VertexId>,
    inverse: Vec<VertexId>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<VertexId> = (0..n as VertexId).collect();
        Permutation {
            forward: ids.clone(),
            inverse: ids,
        }
    }

    pub fn from_forward(forward: Vec<VertexId>) -> Result<Self, PermutationError> {
        let inverse = invert(&forward)?;
        Ok(Permutation { forward, inverse })
    }

    /// Builds the permutation whose `inverse[new] = order[new]`, i.e. `order`
    /// lists old ids in their new positions.
    pub fn from_inverse(inverse: Vec<VertexId>) -> Result<Self, PermutationError> {
        let forward = invert(&inverse)?;
        Ok(Permutation { forward, inverse })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[VertexId] {
        &self.forward
    }

    pub fn inverse(&self) -> &[VertexId] {
        &self.inverse
    }

    pub fn inverted(&self) -> Permutation {
        Permutation {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}

fn invert(map: &[VertexId]) -> Result<Vec<VertexId>, PermutationError> {
    let len = map.len();
    let mut out = vec![VertexId::MAX; len];
    let mut seen = vec![false; len];
    for (index, &value) in map.iter().enumerate() {
        let value = value as usize;
        if value >= len {
            return Err(PermutationError::OutOfRange { index, value, len });
        }
        if std::mem::replace(&mut seen[value], true) {
            return Err(PermutationError::Duplicate(value));
        }
        out[value] = index as VertexId;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SortOrder {
    Original,
    DegreeDescending,
    DegreeAscending,
}

impl SortOrder {
    pub const ALL: [SortOrder; 3] = [
        SortOrder::Original,
        SortOrder::DegreeDescending,
        SortOrder::DegreeAscending,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SortOrder::Original => "original",
            SortOrder::DegreeDescending => "degree-desc",
            SortOrder::DegreeAscending => "degree-asc",
        }
    }
}

impl fmt::Display for SortOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SortOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SortOrder::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                format!("unknown order {s:?} (expected original, degree-desc or degree-asc)")
            })
    }
}

/// Full undirected degree of every vertex. Each stored entry credits both
/// of its endpoints.
pub fn total_degrees(g: &CsrGraph) -> Vec<u64> {
    let mut degree = vec![0u64; g.num_vertices()];
    for (v, u) in g.edges() {
        degree[v as usize] += 1;
        degree[u as usize] += 1;
    }
    degree
}

/// Relabeling for `order`. Ties keep original id order.
pub fn make_permutation(g: &CsrGraph, order: SortOrder) -> Permutation {
    let n = g.num_vertices();
    let degree = total_degrees(g);
    let mut by_rank: Vec<VertexId> = (0..n as VertexId).collect();
    match order {
        SortOrder::Original => return Permutation::identity(n),
        SortOrder::DegreeDescending => {
            by_rank.sort_by_key(|&v| std::cmp::Reverse(degree[v as usize]))
        }
        SortOrder::DegreeAscending => by_rank.sort_by_key(|&v| degree[v as usize]),
    }
    Permutation::from_inverse(by_rank).expect("sorted ids form a permutation")
}
