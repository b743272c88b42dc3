//! Brute-force reference counts. Slow on purpose; used as ground truth.

use std::collections::HashSet;

use crate::graph_io::{CsrGraph, VertexId};

/// Counts triples `i < j < k` whose three edges are all present.
pub fn brute_force_triangles(g: &CsrGraph) -> u64 {
    let n = g.num_vertices();
    let edges: HashSet<(usize, usize)> = g.edges().map(|(v, u)| (u as usize, v as usize)).collect();
    let adjacent = |x: usize, y: usize| edges.contains(&(x.min(y), x.max(y)));

    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if !adjacent(i, j) {
                continue;
            }
            for k in j + 1..n {
                if adjacent(i, k) && adjacent(j, k) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// `|set(a) ∩ set(b)|` for arbitrary, possibly unsorted, inputs.
pub fn brute_force_intersection(a: &[VertexId], b: &[VertexId]) -> u64 {
    let a: HashSet<VertexId> = a.iter().copied().collect();
    let b: HashSet<VertexId> = b.iter().copied().collect();
    a.intersection(&b).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_io::{canonicalize, EdgeList};

    fn graph(edges: &[(VertexId, VertexId)]) -> CsrGraph {
        canonicalize(&EdgeList::new(edges.to_vec()))
    }

    fn complete(n: VertexId) -> Vec<(VertexId, VertexId)> {
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect()
    }

    #[test]
    fn complete_graphs() {
        for n in 0..10u64 {
            let expected = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
            assert_eq!(brute_force_triangles(&graph(&complete(n as u32))), expected);
        }
    }

    #[test]
    fn cycles_paths_and_stars_have_none() {
        let cycle: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        assert_eq!(brute_force_triangles(&graph(&cycle)), 0);
        let path: Vec<_> = (0..9).map(|i| (i, i + 1)).collect();
        assert_eq!(brute_force_triangles(&graph(&path)), 0);
        let star: Vec<_> = (0..7).map(|i| (7, i)).collect();
        assert_eq!(brute_force_triangles(&graph(&star)), 0);
        // a 3-cycle is the one cycle that is a triangle
        assert_eq!(brute_force_triangles(&graph(&[(0, 1), (1, 2), (2, 0)])), 1);
    }

    #[test]
    fn k5_minus_an_edge() {
        let edges: Vec<_> = complete(5).into_iter().filter(|&e| e != (0, 1)).collect();
        assert_eq!(brute_force_triangles(&graph(&edges)), 7);
    }

    #[test]
    fn intersection_cardinality() {
        assert_eq!(brute_force_intersection(&[1, 2, 3], &[3, 4]), 1);
        assert_eq!(brute_force_intersection(&[5, 1, 9], &[9, 5, 1]), 3);
        assert_eq!(brute_force_intersection(&[], &[1]), 0);
    }
}
