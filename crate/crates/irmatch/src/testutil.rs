//! Shared oracles for unit tests.

use crate::graph::UndirectedGraph;

/// Exhaustive matching number by bitmask recursion. Independent of the
/// blossom implementation; limited to 20 vertices.
pub(crate) fn brute_nu(ug: &UndirectedGraph) -> usize {
    fn go(ug: &UndirectedGraph, mask: u32) -> usize {
        if mask == 0 {
            return 0;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = go(ug, rest);
        for &w in ug.neighbors(v) {
            if rest & (1 << w) != 0 {
                best = best.max(1 + go(ug, rest & !(1 << w)));
            }
        }
        best
    }
    assert!(ug.vertex_count() <= 20);
    go(ug, ((1u64 << ug.vertex_count()) - 1) as u32)
}
