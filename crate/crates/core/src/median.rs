//! Deterministic worst-case linear selection and the weighted median.
//!
//! The weighted median of `(value, weight)` items (all weights positive) is
//! a value `k` occurring among the items such that the total weight of
//! items with value < `k` and the total weight of items with value > `k`
//! are each at most half of the overall weight. Pivots come from
//! median-of-fives selection, so the whole routine is worst-case linear —
//! there is no randomized fallback.

use crate::scalar::Scalar;

/// Selects the `k`-th smallest (0-based) of `values` by median-of-fives.
/// Worst-case linear time. Panics if `values` is empty or `k` out of range.
pub fn select_kth(mut values: Vec<Scalar>, mut k: usize) -> Scalar {
    assert!(k < values.len(), "select_kth: k = {} of {}", k, values.len());
    loop {
        if values.len() <= 5 {
            values.sort_unstable();
            return values.swap_remove(k);
        }
        let medians: Vec<Scalar> = values
            .chunks(5)
            .map(|chunk| {
                let mut group = chunk.to_vec();
                group.sort_unstable();
                group.swap_remove(group.len() / 2)
            })
            .collect();
        let mid = medians.len() / 2;
        let pivot = select_kth(medians, mid);

        let mut less = Vec::new();
        let mut greater = Vec::new();
        let mut equal = 0usize;
        for v in values {
            match v.cmp(&pivot) {
                std::cmp::Ordering::Less => less.push(v),
                std::cmp::Ordering::Equal => equal += 1,
                std::cmp::Ordering::Greater => greater.push(v),
            }
        }
        if k < less.len() {
            values = less;
        } else if k < less.len() + equal {
            return pivot;
        } else {
            k -= less.len() + equal;
            values = greater;
        }
    }
}

/// Weighted median of `(value, weight)` items; see the module docs for the
/// contract. Panics on empty input or a non-positive weight.
pub fn weighted_median(items: &[(Scalar, Scalar)]) -> Scalar {
    assert!(!items.is_empty(), "weighted_median: empty input");
    for (_, w) in items {
        assert!(
            !w.is_negative() && !w.is_zero(),
            "weighted_median: non-positive weight {w}"
        );
    }
    let total: Scalar = items.iter().map(|(_, w)| w.clone()).sum();

    let mut scratch: Vec<(Scalar, Scalar)> = items.to_vec();
    // Weight already discarded strictly below / above the scratch window.
    let mut below = Scalar::zero();
    let mut above = Scalar::zero();
    loop {
        // The count median keeps each round at most half the previous size,
        // which makes the loop linear overall; any pivot value would still
        // give a correct (if slower) result because the exit test below is
        // exactly the weighted-median condition.
        let pivot = select_kth(
            scratch.iter().map(|(v, _)| v.clone()).collect(),
            scratch.len() / 2,
        );

        let mut lighter = Vec::new();
        let mut heavier = Vec::new();
        let (mut w_less, mut w_equal, mut w_greater) =
            (Scalar::zero(), Scalar::zero(), Scalar::zero());
        for (v, w) in scratch.drain(..) {
            match v.cmp(&pivot) {
                std::cmp::Ordering::Less => {
                    w_less = &w_less + &w;
                    lighter.push((v, w));
                }
                std::cmp::Ordering::Equal => w_equal = &w_equal + &w,
                std::cmp::Ordering::Greater => {
                    w_greater = &w_greater + &w;
                    heavier.push((v, w));
                }
            }
        }
        let weight_below = &below + &w_less;
        let weight_above = &above + &w_greater;
        if &weight_below + &weight_below <= total && &weight_above + &weight_above <= total {
            return pivot;
        }
        if &weight_below + &weight_below > total {
            // Median lies among the strictly smaller values.
            above = &weight_above + &w_equal;
            scratch = lighter;
        } else {
            below = &weight_below + &w_equal;
            scratch = heavier;
        }
        debug_assert!(!scratch.is_empty(), "weighted median search lost its target");
    }
}
