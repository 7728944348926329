//! All-pairs equality between two vector families, reported in compressed
//! form.
//!
//! Given families `U` and `V` of m-dimensional vectors, the task is to find
//! every pair `(u, v)` with `u = v` coordinate-wise. Equal vectors cluster,
//! so results are returned as [`MatchBlock`]s — a shared key plus one index
//! range per side into sorted orders of each family — never as materialized
//! pairs. Two strategies produce identical pair sets:
//!
//! - [`sort_vector_equality`]: sort both families, then merge with two
//!   cursors, emitting maximal equal runs.
//! - [`recursive_vector_equality`]: split on the weighted median of one
//!   coordinate and recurse, moving to the next coordinate where the
//!   families agree. Only exact comparison is supported here; with a
//!   certified median pivot the node measure `|U|·|V|·2^(m')` at least
//!   halves per level, which bounds the recursion depth.
//!
//! Tolerant comparison is available on the sort path only. Sorting always
//! uses the strict value order; the tolerance applies in the merge, where
//! each block is anchored at the first matched value `w` and extends while
//! values stay within `eps` of `w`. Members of one block are therefore
//! pairwise within `2*eps` per coordinate.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::median::weighted_median;
use crate::scalar::{CompareMode, Scalar};
use crate::vector::{compare_lex, LexVector};

/// A family of same-dimension vectors, each tagged with a caller-chosen id
/// used in results and witness decoding.
#[derive(Debug, Clone)]
pub struct VectorSet {
    vectors: Vec<LexVector>,
    ids: Vec<usize>,
}

impl VectorSet {
    /// Wraps vectors with ids `0..len`. All dimensions must agree.
    pub fn new(vectors: Vec<LexVector>) -> Result<Self> {
        let ids = (0..vectors.len()).collect();
        Self::with_ids(vectors, ids)
    }

    pub fn with_ids(vectors: Vec<LexVector>, ids: Vec<usize>) -> Result<Self> {
        if vectors.len() != ids.len() {
            return Err(Error::Validation {
                violations: vec![format!("{} vectors with {} ids", vectors.len(), ids.len())],
            });
        }
        if let Some(first) = vectors.first() {
            let dim = first.dim();
            for (i, v) in vectors.iter().enumerate() {
                if v.dim() != dim {
                    return Err(Error::Validation {
                        violations: vec![format!(
                            "vector {} has dimension {} of {}",
                            i,
                            v.dim(),
                            dim
                        )],
                    });
                }
            }
        }
        Ok(VectorSet { vectors, ids })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Common dimension, or `None` when the family is empty.
    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(LexVector::dim)
    }

    pub fn vector(&self, pos: usize) -> &LexVector {
        &self.vectors[pos]
    }

    pub fn id(&self, pos: usize) -> usize {
        self.ids[pos]
    }
}

/// One group of matches: every `u` whose sorted position falls in `u_range`
/// equals every `v` in `v_range`, and all of them equal `key`.
#[derive(Debug, Clone)]
pub struct MatchBlock {
    pub key: LexVector,
    pub u_range: Range<usize>,
    pub v_range: Range<usize>,
}

impl MatchBlock {
    pub fn pair_count(&self) -> u128 {
        self.u_range.len() as u128 * self.v_range.len() as u128
    }
}

/// Compressed answer to a vector-equality query. `u_order` and `v_order`
/// hold the ids of each family in the order the block ranges refer to;
/// block ranges never overlap on either side.
#[derive(Debug, Clone)]
pub struct MatchList {
    pub blocks: Vec<MatchBlock>,
    pub u_order: Vec<usize>,
    pub v_order: Vec<usize>,
    /// Comparison operations spent building this list.
    pub comparisons: u64,
}

impl MatchList {
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total number of matched pairs across all blocks.
    pub fn pair_count(&self) -> u128 {
        self.blocks.iter().map(MatchBlock::pair_count).sum()
    }

    /// Materializes the matches as id pairs, refusing (with the exact
    /// count) when more than `cap` pairs would be produced.
    pub fn canonical_pair_set(&self, cap: u64) -> Result<BTreeSet<(usize, usize)>> {
        let pairs = self.pair_count();
        if pairs > cap as u128 {
            return Err(Error::PairSetCap {
                pairs,
                cap: cap as u128,
            });
        }
        let mut out = BTreeSet::new();
        for block in &self.blocks {
            for i in block.u_range.clone() {
                for j in block.v_range.clone() {
                    out.insert((self.u_order[i], self.v_order[j]));
                }
            }
        }
        Ok(out)
    }
}

/// Pivot selection for the recursive strategy. The certified weighted
/// median guarantees the measure-halving bound; median-of-three is a cheap
/// heuristic without that guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    #[default]
    WeightedMedian,
    MedianOfThree,
}

/// One partition step of the recursive strategy: sizes of both families
/// and of the three children on each side.
#[derive(Debug, Clone, Copy)]
pub struct TraceNode {
    pub depth: usize,
    pub u_size: usize,
    pub v_size: usize,
    /// Coordinates not yet known equal, counting the one split here.
    pub remaining_dim: usize,
    /// Children sizes as (greater, equal, less) than the pivot.
    pub u_children: [usize; 3],
    pub v_children: [usize; 3],
}

impl TraceNode {
    /// `|U+||V+| + |U-||V-| + |U=||V=|/2 <= |U||V|/2`, checked in integers.
    pub fn measure_halving_holds(&self) -> bool {
        let [up, ue, um] = self.u_children.map(|s| s as u128);
        let [vp, ve, vm] = self.v_children.map(|s| s as u128);
        let (u, v) = (self.u_size as u128, self.v_size as u128);
        2 * (up * vp + um * vm) + ue * ve <= u * v
    }

    /// The pivot is a weighted median of the split coordinate: with weight
    /// `|V|` per U-element and `|U|` per V-element, the strictly-smaller
    /// and strictly-larger sides each carry at most half the total weight.
    pub fn median_contract_holds(&self) -> bool {
        let [up, _, um] = self.u_children.map(|s| s as u128);
        let [vp, _, vm] = self.v_children.map(|s| s as u128);
        let (u, v) = (self.u_size as u128, self.v_size as u128);
        v * um + u * vm <= u * v && v * up + u * vp <= u * v
    }
}

/// Record of every partition step in one recursive run.
#[derive(Debug, Clone, Default)]
pub struct RecursionTrace {
    pub nodes: Vec<TraceNode>,
}

impl RecursionTrace {
    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }
}

fn sorted_positions(set: &VectorSet, comparisons: &mut u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..set.len()).collect();
    let mut count = 0u64;
    order.sort_unstable_by(|&a, &b| {
        count += 1;
        set.vectors[a]
            .cmp(&set.vectors[b])
            .then_with(|| set.ids[a].cmp(&set.ids[b]))
            .then_with(|| a.cmp(&b))
    });
    *comparisons += count;
    order
}

/// Sort-and-merge strategy. Both families are sorted in strict value order
/// (ties broken by id); the merge advances the lexicographically smaller
/// cursor and emits a block for every maximal equal run. Under tolerant
/// comparison, runs are anchored at the first matched value. Empty input
/// on either side yields an empty list.
pub fn sort_vector_equality(u: &VectorSet, v: &VectorSet, mode: CompareMode) -> MatchList {
    sort_vector_equality_bounded(u, v, mode, None)
}

/// As [`sort_vector_equality`], but stops after `max_blocks` blocks when
/// given — the feasibility short-circuit.
pub(crate) fn sort_vector_equality_bounded(
    u: &VectorSet,
    v: &VectorSet,
    mode: CompareMode,
    max_blocks: Option<usize>,
) -> MatchList {
    if let (Some(du), Some(dv)) = (u.dim(), v.dim()) {
        assert_eq!(du, dv, "vector equality: dimension mismatch ({du} vs {dv})");
    }
    let mut comparisons = 0u64;
    let u_sorted = sorted_positions(u, &mut comparisons);
    let v_sorted = sorted_positions(v, &mut comparisons);

    let mut blocks = Vec::new();
    let (mut a, mut b) = (0usize, 0usize);
    while a < u_sorted.len() && b < v_sorted.len() {
        comparisons += 1;
        match compare_lex(u.vector(u_sorted[a]), v.vector(v_sorted[b]), mode) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                let anchor = u.vector(u_sorted[a]).clone();
                let (a0, b0) = (a, b);
                while a < u_sorted.len() && {
                    comparisons += 1;
                    compare_lex(&anchor, u.vector(u_sorted[a]), mode).is_eq()
                } {
                    a += 1;
                }
                while b < v_sorted.len() && {
                    comparisons += 1;
                    compare_lex(&anchor, v.vector(v_sorted[b]), mode).is_eq()
                } {
                    b += 1;
                }
                blocks.push(MatchBlock {
                    key: anchor,
                    u_range: a0..a,
                    v_range: b0..b,
                });
                if max_blocks.is_some_and(|cap| blocks.len() >= cap) {
                    break;
                }
            }
        }
    }

    MatchList {
        blocks,
        u_order: u_sorted.iter().map(|&p| u.ids[p]).collect(),
        v_order: v_sorted.iter().map(|&p| v.ids[p]).collect(),
        comparisons,
    }
}

/// Divide-and-conquer strategy with the default certified pivot. Exact
/// comparison only: tolerant equality is not transitive, so the three-way
/// partition this strategy rests on is undefined for it.
pub fn recursive_vector_equality(
    u: &VectorSet,
    v: &VectorSet,
    mode: CompareMode,
    trace: Option<&mut RecursionTrace>,
) -> Result<MatchList> {
    recursive_vector_equality_with(u, v, mode, PivotRule::WeightedMedian, trace)
}

/// [`recursive_vector_equality`] with an explicit pivot rule.
pub fn recursive_vector_equality_with(
    u: &VectorSet,
    v: &VectorSet,
    mode: CompareMode,
    pivot: PivotRule,
    trace: Option<&mut RecursionTrace>,
) -> Result<MatchList> {
    if !mode.is_exact() {
        return Err(Error::Unsupported(
            "the recursive matcher requires exact comparison".to_string(),
        ));
    }
    if let (Some(du), Some(dv)) = (u.dim(), v.dim()) {
        assert_eq!(du, dv, "vector equality: dimension mismatch ({du} vs {dv})");
    }

    let mut u_perm: Vec<usize> = (0..u.len()).collect();
    let mut v_perm: Vec<usize> = (0..v.len()).collect();
    let mut ctx = RecCtx {
        u,
        v,
        m: u.dim().or(v.dim()).unwrap_or(0),
        pivot,
        blocks: Vec::new(),
        comparisons: 0,
        trace,
    };
    let (u_len, v_len) = (u.len(), v.len());
    recurse(&mut ctx, &mut u_perm, &mut v_perm, 0..u_len, 0..v_len, 0, 0);

    Ok(MatchList {
        blocks: ctx.blocks,
        u_order: u_perm.iter().map(|&p| u.ids[p]).collect(),
        v_order: v_perm.iter().map(|&p| v.ids[p]).collect(),
        comparisons: ctx.comparisons,
    })
}

struct RecCtx<'a> {
    u: &'a VectorSet,
    v: &'a VectorSet,
    m: usize,
    pivot: PivotRule,
    blocks: Vec<MatchBlock>,
    comparisons: u64,
    trace: Option<&'a mut RecursionTrace>,
}

fn recurse(
    ctx: &mut RecCtx,
    u_perm: &mut [usize],
    v_perm: &mut [usize],
    u_window: Range<usize>,
    v_window: Range<usize>,
    coord: usize,
    depth: usize,
) {
    if u_window.is_empty() || v_window.is_empty() {
        return;
    }
    if coord == ctx.m {
        // Every remaining coordinate matched: one block of all pairs.
        ctx.blocks.push(MatchBlock {
            key: ctx.u.vector(u_perm[u_window.start]).clone(),
            u_range: u_window,
            v_range: v_window,
        });
        return;
    }

    let u_size = u_window.len();
    let v_size = v_window.len();
    let pivot = choose_pivot(ctx, u_perm, v_perm, &u_window, &v_window, coord);

    // Three-way partition of each window by the pivot, laid out as
    // (greater, equal, less) so each child occupies a contiguous range.
    let mut u_parts = partition(ctx, u_perm, &u_window, coord, &pivot, Side::U);
    let mut v_parts = partition(ctx, v_perm, &v_window, coord, &pivot, Side::V);

    if let Some(trace) = ctx.trace.as_deref_mut() {
        let node = TraceNode {
            depth,
            u_size,
            v_size,
            remaining_dim: ctx.m - coord,
            u_children: [u_parts[0].len(), u_parts[1].len(), u_parts[2].len()],
            v_children: [v_parts[0].len(), v_parts[1].len(), v_parts[2].len()],
        };
        assert!(
            node.median_contract_holds(),
            "pivot violated the weighted-median contract at {node:?}"
        );
        assert!(
            node.measure_halving_holds(),
            "partition did not halve the measure at {node:?}"
        );
        trace.nodes.push(node);
    }

    for (u_child, v_child, next_coord) in [
        (u_parts.remove(0), v_parts.remove(0), coord),
        (u_parts.remove(0), v_parts.remove(0), coord + 1),
        (u_parts.remove(0), v_parts.remove(0), coord),
    ] {
        recurse(ctx, u_perm, v_perm, u_child, v_child, next_coord, depth + 1);
    }
}

enum Side {
    U,
    V,
}

/// Reorders one window as (greater, equal, less) than the pivot and
/// returns the three child ranges.
fn partition(
    ctx: &mut RecCtx,
    perm: &mut [usize],
    window: &Range<usize>,
    coord: usize,
    pivot: &Scalar,
    side: Side,
) -> Vec<Range<usize>> {
    let vectors = match side {
        Side::U => &ctx.u.vectors,
        Side::V => &ctx.v.vectors,
    };
    let mut greater = Vec::new();
    let mut equal = Vec::new();
    let mut less = Vec::new();
    for &pos in &perm[window.clone()] {
        ctx.comparisons += 1;
        match vectors[pos].coord(coord).cmp(pivot) {
            std::cmp::Ordering::Greater => greater.push(pos),
            std::cmp::Ordering::Equal => equal.push(pos),
            std::cmp::Ordering::Less => less.push(pos),
        }
    }
    let bounds = [
        window.start..window.start + greater.len(),
        window.start + greater.len()..window.start + greater.len() + equal.len(),
        window.start + greater.len() + equal.len()..window.end,
    ];
    for (slot, pos) in perm[window.clone()]
        .iter_mut()
        .zip(greater.into_iter().chain(equal).chain(less))
    {
        *slot = pos;
    }
    bounds.to_vec()
}

fn choose_pivot(
    ctx: &mut RecCtx,
    u_perm: &[usize],
    v_perm: &[usize],
    u_window: &Range<usize>,
    v_window: &Range<usize>,
    coord: usize,
) -> Scalar {
    let u_at = |i: usize| ctx.u.vector(u_perm[u_window.start + i]).coord(coord);
    let v_at = |i: usize| ctx.v.vector(v_perm[v_window.start + i]).coord(coord);
    let u_size = u_window.len();
    let v_size = v_window.len();
    match ctx.pivot {
        PivotRule::WeightedMedian => {
            // Each U-element weighs |V| and vice versa, so both families
            // pull on the pivot with equal total force.
            let u_weight = Scalar::from_int(v_size as i64);
            let v_weight = Scalar::from_int(u_size as i64);
            let mut items = Vec::with_capacity(u_size + v_size);
            items.extend((0..u_size).map(|i| (u_at(i).clone(), u_weight.clone())));
            items.extend((0..v_size).map(|i| (v_at(i).clone(), v_weight.clone())));
            weighted_median(&items)
        }
        PivotRule::MedianOfThree => {
            let total = u_size + v_size;
            let probe = |t: usize| {
                if t < u_size {
                    u_at(t)
                } else {
                    v_at(t - u_size)
                }
            };
            let (a, b, c) = (probe(0), probe(total / 2), probe(total - 1));
            let mut three = [a, b, c];
            three.sort_unstable();
            three[1].clone()
        }
    }
}
