//! Exact triangle counting over lower-triangular CSR, instrumented to report
//! match checks: the iterations of the merge-based set intersection, which
//! track the work of counting far better than the edge count does.
//!
//! Typical flow: load an [`EdgeList`](graph_io::EdgeList), [`canonicalize`]
//! it, optionally relabel with [`make_permutation`] and [`apply_permutation`],
//! then [`count_triangles`] and turn the report into a
//! [`MetricRecord`](metrics::MetricRecord) with [`derive_metrics`].

pub mod cli;
pub mod counting;
pub mod generate;
pub mod graph_io;
pub mod kernels;
pub mod metrics;
pub mod oracle;
pub mod reorder;

pub use counting::{
    count_triangles, count_triangles_with, traversed_edges, CountReport, KernelChoice, Timing,
};
pub use graph_io::{apply_permutation, canonicalize, CsrGraph, EdgeList, VertexId};
pub use kernels::{blocked_intersect, effective_checks, scalar_intersect, IntersectStats};
pub use metrics::{derive_metrics, MetricInputs, MetricRecord};
pub use oracle::{brute_force_intersection, brute_force_triangles};
pub use reorder::{make_permutation, total_degrees, Permutation, SortOrder};
