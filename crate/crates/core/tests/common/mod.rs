//! Helpers shared by the integration suites.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use ip01::vector_equality::VectorSet;
use ip01::{compare_lex, CompareMode};

/// Quadratic reference matcher: every index pair whose vectors compare
/// equal, by scanning all `|U| * |V|` combinations.
pub fn quadratic_pairs(
    u: &VectorSet,
    v: &VectorSet,
    mode: CompareMode,
) -> BTreeSet<(usize, usize)> {
    let mut pairs = BTreeSet::new();
    for i in 0..u.len() {
        for j in 0..v.len() {
            if compare_lex(u.vector(i), v.vector(j), mode) == Ordering::Equal {
                pairs.insert((u.id(i), v.id(j)));
            }
        }
    }
    pairs
}
