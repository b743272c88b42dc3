//! Sorted set-intersection kernels with match-check accounting.
//!
//! Both kernels are written once, generic over a [`Probe`]. Timed runs use
//! [`NoProbe`], which compiles the counters away; instrumented runs use
//! [`IntersectStats`].
//!
//! A *match check* is one iteration of the scalar merge loop. The blocked
//! kernel compares 8x8 blocks all-pairs, so its native comparisons do not map
//! one to one onto match checks. Its *effective* checks are defined as what the
//! scalar merge would have performed on the same inputs and are obtained from
//! a scalar shadow pass.

use std::ops::{Add, AddAssign};

use crate::graph_io::VertexId;

/// Width of one block in [`blocked_intersect`].
pub const BLOCK: usize = 8;

/// Counters for one or many intersections. All fields add across calls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct IntersectStats {
    /// Scalar merge iterations. For the blocked kernel this is the effective
    /// count from the scalar shadow.
    pub match_checks: u64,
    pub matches: u64,
    /// Elements consumed from both inputs.
    pub advances: u64,
    /// All-pairs comparisons issued by the blocked kernel, 64 per block pair.
    pub raw_block_comparisons: u64,
    /// Block pairs rejected by the min/max range test.
    pub blocks_skipped: u64,
    /// Merge iterations executed by the blocked kernel's scalar tail.
    pub scalar_tail_checks: u64,
}

impl AddAssign for IntersectStats {
    fn add_assign(&mut self, rhs: Self) {
        self.match_checks += rhs.match_checks;
        self.matches += rhs.matches;
        self.advances += rhs.advances;
        self.raw_block_comparisons += rhs.raw_block_comparisons;
        self.blocks_skipped += rhs.blocks_skipped;
        self.scalar_tail_checks += rhs.scalar_tail_checks;
    }
}

impl Add for IntersectStats {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl std::iter::Sum for IntersectStats {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

/// Event sink the kernels report into.
pub trait Probe {
    #[inline(always)]
    fn match_check(&mut self) {}
    #[inline(always)]
    fn advance(&mut self, _elements: u64) {}
    #[inline(always)]
    fn block_compare(&mut self) {}
    #[inline(always)]
    fn block_skip(&mut self) {}
    #[inline(always)]
    fn tail_check(&mut self) {}
}

/// Discards every event.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoProbe;

impl Probe for NoProbe {}

impl Probe for IntersectStats {
    #[inline(always)]
    fn match_check(&mut self) {
        self.match_checks += 1;
    }
    #[inline(always)]
    fn advance(&mut self, elements: u64) {
        self.advances += elements;
    }
    #[inline(always)]
    fn block_compare(&mut self) {
        self.raw_block_comparisons += (BLOCK * BLOCK) as u64;
    }
    #[inline(always)]
    fn block_skip(&mut self) {
        self.blocks_skipped += 1;
    }
    #[inline(always)]
    fn tail_check(&mut self) {
        self.scalar_tail_checks += 1;
    }
}

/// Routes the scalar tail's loop iterations to `tail_check`.
struct TailProbe<'a, P>(&'a mut P);

impl<P: Probe> Probe for TailProbe<'_, P> {
    #[inline(always)]
    fn match_check(&mut self) {
        self.0.tail_check();
    }
    #[inline(always)]
    fn advance(&mut self, elements: u64) {
        self.0.advance(elements);
    }
}

/// Merge-based intersection. Returns `|a ∩ b|`.
///
/// Both inputs must be strictly ascending.
#[inline]
pub fn scalar_merge<P: Probe>(a: &[VertexId], b: &[VertexId], probe: &mut P) -> u64 {
    let (mut i, mut j) = (0, 0);
    let mut matches = 0;
    while i < a.len() && j < b.len() {
        probe.match_check();
        let (x, y) = (a[i], b[j]);
        if x == y {
            i += 1;
            j += 1;
            matches += 1;
            probe.advance(2);
        } else if x > y {
            j += 1;
            probe.advance(1);
        } else {
            i += 1;
            probe.advance(1);
        }
    }
    matches
}

/// Number of positions in `x` whose value also occurs in `y`.
#[inline(always)]
fn block_matches(x: &[VertexId; BLOCK], y: &[VertexId; BLOCK]) -> u64 {
    let mut mask = [false; BLOCK];
    for &yv in y {
        for (m, &xv) in mask.iter_mut().zip(x) {
            *m |= xv == yv;
        }
    }
    mask.iter().filter(|&&m| m).count() as u64
}

#[inline(always)]
fn block_at(s: &[VertexId], at: usize) -> &[VertexId; BLOCK] {
    s[at..at + BLOCK].try_into().expect("block in bounds")
}

/// 8x8 blocked intersection with range-based early termination. Whatever is
/// left once either side has fewer than eight elements goes through
/// [`scalar_merge`]. Returns `|a ∩ b|`.
#[inline]
pub fn blocked_merge<P: Probe>(a: &[VertexId], b: &[VertexId], probe: &mut P) -> u64 {
    let (mut i, mut j) = (0, 0);
    let mut matches = 0;
    while a.len() - i >= BLOCK && b.len() - j >= BLOCK {
        let (x, y) = (block_at(a, i), block_at(b, j));
        let (x_min, x_max) = (x[0], x[BLOCK - 1]);
        let (y_min, y_max) = (y[0], y[BLOCK - 1]);
        if x_max < y_min {
            i += BLOCK;
            probe.block_skip();
            probe.advance(BLOCK as u64);
            continue;
        }
        if y_max < x_min {
            j += BLOCK;
            probe.block_skip();
            probe.advance(BLOCK as u64);
            continue;
        }
        probe.block_compare();
        matches += block_matches(x, y);
        // Both advance when the maxima are equal.
        if x_max <= y_max {
            i += BLOCK;
            probe.advance(BLOCK as u64);
        }
        if y_max <= x_max {
            j += BLOCK;
            probe.advance(BLOCK as u64);
        }
    }
    matches + scalar_merge(&a[i..], &b[j..], &mut TailProbe(probe))
}

/// Instrumented scalar intersection.
pub fn scalar_intersect(a: &[VertexId], b: &[VertexId]) -> IntersectStats {
    let mut stats = IntersectStats::default();
    stats.matches = scalar_merge(a, b, &mut stats);
    stats
}

/// Instrumented blocked intersection. `match_checks` holds the effective
/// count from a scalar shadow pass; the block counters come from the blocked
/// run itself.
pub fn blocked_intersect(a: &[VertexId], b: &[VertexId]) -> IntersectStats {
    let mut stats = IntersectStats::default();
    stats.matches = blocked_merge(a, b, &mut stats);
    stats.match_checks = effective_checks(a, b);
    stats
}

/// Match checks the scalar baseline performs on `a` and `b`; this is the
/// effective work credited to any kernel on the same inputs.
pub fn effective_checks(a: &[VertexId], b: &[VertexId]) -> u64 {
    scalar_intersect(a, b).match_checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn range(lo: VertexId, hi: VertexId) -> Vec<VertexId> {
        (lo..hi).collect()
    }

    #[test]
    fn interleaved_pattern_is_worst_case() {
        let a: Vec<VertexId> = (0..8).map(|x| 2 * x).collect();
        let b: Vec<VertexId> = (0..8).map(|x| 2 * x + 1).collect();
        let s = scalar_intersect(&a, &b);
        assert_eq!((s.matches, s.match_checks), (0, 15));
        assert_eq!(s.advances, 15);
    }

    #[test]
    fn identical_sets_advance_both_every_time() {
        let s = scalar_intersect(&[1, 2, 3], &[1, 2, 3]);
        assert_eq!((s.matches, s.match_checks, s.advances), (3, 3, 6));
    }

    #[test]
    fn hand_traced_merge() {
        // 1:2, 3:2, 3:3, 5:6, then a is exhausted
        let s = scalar_intersect(&[1, 3, 5], &[2, 3, 6]);
        assert_eq!((s.matches, s.match_checks), (1, 4));
        assert_eq!(s.advances, 5);
    }

    #[test]
    fn empty_side_does_nothing() {
        assert_eq!(scalar_intersect(&[], &[1, 2]), IntersectStats::default());
        assert_eq!(blocked_intersect(&[1, 2], &[]), IntersectStats::default());
    }

    #[test]
    fn blocked_identical_single_block() {
        let a = range(0, 8);
        let s = blocked_intersect(&a, &a);
        assert_eq!(s.matches, 8);
        assert_eq!(s.raw_block_comparisons, 64);
        assert_eq!(s.blocks_skipped, 0);
        assert_eq!(s.scalar_tail_checks, 0);
        assert_eq!(s.match_checks, 8);
    }

    #[test]
    fn blocked_early_termination() {
        let s = blocked_intersect(&range(0, 8), &range(8, 16));
        assert_eq!(s.matches, 0);
        assert_eq!(s.raw_block_comparisons, 0);
        assert_eq!(s.blocks_skipped, 1);
        // a is exhausted after the skip, so the tail loop never runs
        assert_eq!(s.scalar_tail_checks, 0);
        assert_eq!(s.advances, 8);
        assert_eq!(s.match_checks, 8);
    }

    #[test]
    fn blocked_with_tail() {
        let a = range(0, 10);
        let s = blocked_intersect(&a, &a);
        assert_eq!(s.matches, 10);
        assert_eq!(s.raw_block_comparisons, 64);
        assert_eq!(s.blocks_skipped, 0);
        assert_eq!(s.scalar_tail_checks, 2);
        assert_eq!(s.advances, 20);
        assert_eq!(s.match_checks, 10);
        assert_eq!(scalar_intersect(&a, &a).matches, 10);
    }

    #[test]
    fn blocked_advances_only_lower_block() {
        // a's block ends at 14, b's at 16: only a advances, then the tail
        // merges a[8..] = [16] against all of b.
        let a: Vec<VertexId> = vec![0, 2, 4, 6, 8, 10, 12, 14, 16];
        let b: Vec<VertexId> = (0..8).map(|x| 2 * x + 2).collect();
        let s = blocked_intersect(&a, &b);
        assert_eq!(s.matches, 8);
        assert_eq!(s.raw_block_comparisons, 64);
        assert_eq!(s.scalar_tail_checks, 8);
    }

    #[test]
    fn effective_checks_examples() {
        let evens: Vec<VertexId> = (0..8).map(|x| 2 * x).collect();
        let odds: Vec<VertexId> = (0..8).map(|x| 2 * x + 1).collect();
        assert_eq!(effective_checks(&evens, &odds), 15);
        assert_eq!(effective_checks(&range(0, 8), &range(0, 8)), 8);
        assert_eq!(effective_checks(&range(0, 10), &range(0, 10)), 10);
    }

    #[test]
    fn no_probe_agrees_with_stats() {
        let a: Vec<VertexId> = vec![1, 4, 5, 9, 11, 12, 13, 20, 21, 22, 40];
        let b: Vec<VertexId> = vec![0, 4, 9, 10, 11, 12, 19, 20, 21, 23, 40, 41];
        assert_eq!(scalar_merge(&a, &b, &mut NoProbe), 7);
        assert_eq!(blocked_merge(&a, &b, &mut NoProbe), 7);
    }

    fn sorted_set() -> impl Strategy<Value = Vec<VertexId>> {
        prop::collection::btree_set(0u32..128, 0..64).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn kernels_match_set_intersection(a in sorted_set(), b in sorted_set()) {
            let sa: BTreeSet<_> = a.iter().collect();
            let expected = b.iter().filter(|x| sa.contains(x)).count() as u64;
            let s = scalar_intersect(&a, &b);
            let k = blocked_intersect(&a, &b);
            prop_assert_eq!(s.matches, expected);
            prop_assert_eq!(k.matches, expected);
            prop_assert_eq!(s.advances, s.match_checks + s.matches);
            prop_assert!(s.match_checks <= (a.len() + b.len()) as u64);
            prop_assert!(s.match_checks >= s.matches);
            prop_assert_eq!(k.raw_block_comparisons % 64, 0);
            prop_assert_eq!(k.match_checks, s.match_checks);
            prop_assert!(k.advances <= (a.len() + b.len()) as u64);
        }

        #[test]
        fn disjoint_ranges_never_compare_blocks(
            a in prop::collection::btree_set(0u32..1000, 0..64),
            b in prop::collection::btree_set(1000u32..2000, 0..64),
            swap in any::<bool>(),
        ) {
            let (a, b): (Vec<_>, Vec<_>) = (a.into_iter().collect(), b.into_iter().collect());
            let k = if swap { blocked_intersect(&b, &a) } else { blocked_intersect(&a, &b) };
            prop_assert_eq!(k.raw_block_comparisons, 0);
            prop_assert_eq!(k.matches, 0);
        }
    }
}
