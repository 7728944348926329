//! Quarter-table solver: split the variables in four, enumerate each
//! quarter, and sweep candidate sums in increasing vector order.
//!
//! For a split `X1 | X2 | X3 | X4`, the quarter tables hold `U = sum_1`,
//! `V = sum_2`, `S = -sum_3`, and `T = b - sum_4`, so an assignment solves
//! the instance exactly when `u + v == s + t`. Each side's pair sums are
//! generated lazily through a priority queue over the sorted quarter
//! tables: the queue holds at most one frontier pair per left entry, so
//! the sweep stores `O(|U| + |S|)` live pairs while still visiting the
//! full `|U| * |V|` and `|S| * |T|` pair families in sorted order. Equal
//! front sums on both sides form a match block: counting multiplies the
//! block sizes, optimization adds the per-side minimum weights.
//!
//! Enumeration is not offered here — materializing solution sets is what
//! the half-table solver is for — and comparisons must be exact, since a
//! merely tolerant order cannot drive the sweep's equal-sum blocks.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::collections::HashSet;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::instance::{Goal, Instance, SolveOutcome, SolveStats, Status, VariablePartition};
use crate::scalar::{CompareMode, Scalar};
use crate::two_table::{build_part_entries, verify_outcome, TableBuildMode, TableEntry};
use crate::vector::LexVector;

/// The four quarter tables, each sorted by (vector, code), plus the split
/// that produced them. Unlike half tables, positions are not codes here;
/// `TableEntry::code` carries the assignment bits.
#[derive(Debug, Clone)]
pub struct QuarterTables {
    pub tables: [Vec<TableEntry>; 4],
    pub partition: VariablePartition,
}

impl QuarterTables {
    pub fn entry_count(&self) -> u64 {
        self.tables.iter().map(|t| t.len() as u64).sum()
    }
}

/// Builds the four sorted quarter tables for `instance`.
pub fn build_quarter_tables(instance: &Instance) -> QuarterTables {
    let partition = VariablePartition::split(instance.n(), 4);
    let zeros = || vec![Scalar::zero(); instance.m()];
    let mut tables = [
        build_part_entries(instance, partition.part(0), zeros(), false, TableBuildMode::Direct),
        build_part_entries(instance, partition.part(1), zeros(), false, TableBuildMode::Direct),
        build_part_entries(instance, partition.part(2), zeros(), true, TableBuildMode::Direct),
        build_part_entries(
            instance,
            partition.part(3),
            instance.rhs().to_vec(),
            true,
            TableBuildMode::Direct,
        ),
    ];
    for table in &mut tables {
        table.sort_unstable_by(|x, y| x.vec.cmp(&y.vec).then(x.code.cmp(&y.code)));
    }
    QuarterTables { tables, partition }
}

/// One frontier pair of a sweep: the sum of `left[left_pos]` and
/// `right[right_pos]`, ordered by (sum, left position, right position).
#[derive(Debug, Clone, PartialEq, Eq)]
struct SweepEntry {
    sum: LexVector,
    left_pos: u32,
    right_pos: u32,
}

impl Ord for SweepEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sum
            .cmp(&other.sum)
            .then(self.left_pos.cmp(&other.left_pos))
            .then(self.right_pos.cmp(&other.right_pos))
    }
}

impl PartialOrd for SweepEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best pair seen in one block of one sweep: `None` is plus infinity.
/// Ties keep the first offer, which is the pair popped earliest — the one
/// with the smallest (left, right) position pair.
#[derive(Debug, Default)]
struct MinTracker {
    best: Option<(Scalar, u32, u32)>,
}

impl MinTracker {
    fn offer(&mut self, weight: Scalar, left_pos: u32, right_pos: u32) {
        if self.best.as_ref().is_none_or(|(w, _, _)| weight < *w) {
            self.best = Some((weight, left_pos, right_pos));
        }
    }
}

/// Lazily enumerates `left[i].vec + right[j].vec` in increasing vector
/// order. Seeded with `(k, 0)` for every left position; popping `(i, j)`
/// pushes `(i, j+1)`, so each pair enters the heap exactly once and at
/// most one pair per left entry is live.
struct PairSweep<'a> {
    left: &'a [TableEntry],
    right: &'a [TableEntry],
    heap: BinaryHeap<Reverse<SweepEntry>>,
    pushes: u64,
    pops: u64,
    comparisons: u64,
    /// Push-once audit, kept only in debug builds on small products.
    seen: Option<HashSet<(u32, u32)>>,
}

impl<'a> PairSweep<'a> {
    fn new(left: &'a [TableEntry], right: &'a [TableEntry]) -> Self {
        let audit = cfg!(debug_assertions) && (left.len() as u64) * (right.len() as u64) <= 1 << 16;
        let mut sweep = PairSweep {
            left,
            right,
            heap: BinaryHeap::with_capacity(left.len()),
            pushes: 0,
            pops: 0,
            comparisons: 0,
            seen: audit.then(HashSet::new),
        };
        if !right.is_empty() {
            for k in 0..left.len() {
                sweep.push(k as u32, 0);
            }
        }
        sweep
    }

    fn push(&mut self, left_pos: u32, right_pos: u32) {
        if let Some(seen) = &mut self.seen {
            assert!(
                seen.insert((left_pos, right_pos)),
                "pair ({left_pos}, {right_pos}) pushed twice"
            );
        }
        let sum = &self.left[left_pos as usize].vec + &self.right[right_pos as usize].vec;
        self.heap.push(Reverse(SweepEntry { sum, left_pos, right_pos }));
        self.pushes += 1;
    }

    fn live(&self) -> u64 {
        self.heap.len() as u64
    }

    fn peek_sum(&self) -> Option<&LexVector> {
        self.heap.peek().map(|Reverse(e)| &e.sum)
    }

    /// Pops the front pair and pushes its right-successor.
    fn advance(&mut self) -> SweepEntry {
        let Reverse(entry) = self.heap.pop().expect("advance on an empty sweep");
        self.pops += 1;
        if (entry.right_pos as usize) + 1 < self.right.len() {
            self.push(entry.left_pos, entry.right_pos + 1);
        }
        entry
    }

    /// Pops every pair whose sum equals `key` (successors included),
    /// returning how many there were and the minimum-weight pair.
    fn drain_equal(&mut self, key: &LexVector) -> (u128, MinTracker) {
        let mut popped: u128 = 0;
        let mut min = MinTracker::default();
        loop {
            match self.heap.peek() {
                Some(Reverse(front)) => {
                    self.comparisons += 1;
                    if front.sum != *key {
                        break;
                    }
                }
                None => break,
            }
            let entry = self.advance();
            let weight = &self.left[entry.left_pos as usize].weight
                + &self.right[entry.right_pos as usize].weight;
            min.offer(weight, entry.left_pos, entry.right_pos);
            popped += 1;
        }
        (popped, min)
    }
}

/// Solves via quarter tables. Supports feasibility, optimization, and
/// counting under exact comparison; tolerant comparison and enumeration
/// are rejected.
pub fn solve_four_table(instance: &Instance, goal: Goal, mode: CompareMode) -> Result<SolveOutcome> {
    let started = Instant::now();
    if !mode.is_exact() {
        return Err(Error::Unsupported(
            "the quarter-table sweep requires exact comparison; use a two-table strategy for tolerant runs"
                .to_string(),
        ));
    }
    if matches!(goal, Goal::Enumerate { .. }) {
        return Err(Error::Unsupported(
            "the quarter-table sweep does not enumerate solutions; use a two-table strategy"
                .to_string(),
        ));
    }
    let partition = VariablePartition::split(instance.n(), 4);
    for part in partition.parts() {
        if part.len() > 31 {
            return Err(Error::Unsupported(format!(
                "a quarter table over {} variables needs 2^{} entries",
                part.len(),
                part.len()
            )));
        }
    }

    let quarters = build_quarter_tables(instance);
    let entries_built = quarters.entry_count();
    let [u, v, s, t] = &quarters.tables;
    let mut q1 = PairSweep::new(u, v);
    let mut q2 = PairSweep::new(s, t);

    let mut count: u128 = 0;
    let mut blocks: u64 = 0;
    let mut best: Option<(Scalar, [u32; 4])> = None;
    let mut first_pair: Option<[u32; 4]> = None;
    let mut peak_queue = q1.live() + q2.live();
    let mut compare_ops: u64 = 0;
    let mut early_exit = false;
    let mut prev_key: Option<LexVector> = None;

    loop {
        let decision = match (q1.peek_sum(), q2.peek_sum()) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => break,
        };
        compare_ops += 1;
        match decision {
            Ordering::Less => {
                q1.advance();
            }
            Ordering::Greater => {
                q2.advance();
            }
            Ordering::Equal => {
                let key = q1.peek_sum().expect("equal fronts exist").clone();
                debug_assert!(
                    prev_key.as_ref().is_none_or(|p| *p < key),
                    "matched sums must strictly increase"
                );
                let (n1, min1) = q1.drain_equal(&key);
                let (n2, min2) = q2.drain_equal(&key);
                debug_assert!(n1 > 0 && n2 > 0);
                count += n1 * n2;
                blocks += 1;
                let (w1, l1, r1) = min1.best.expect("drained block is nonempty");
                let (w2, l2, r2) = min2.best.expect("drained block is nonempty");
                let total = &w1 + &w2;
                if best.as_ref().is_none_or(|(w, _)| total < *w) {
                    best = Some((total, [l1, r1, l2, r2]));
                }
                first_pair.get_or_insert([l1, r1, l2, r2]);
                prev_key = Some(key);
                if matches!(goal, Goal::Feasibility) {
                    early_exit = true;
                    break;
                }
            }
        }
        peak_queue = peak_queue.max(q1.live() + q2.live());
    }

    let stats = SolveStats {
        table_entries_built: entries_built,
        comparisons: compare_ops + q1.comparisons + q2.comparisons,
        peak_live_entries: entries_built + peak_queue,
        match_blocks: blocks,
        queue_pushes: q1.pushes + q2.pushes,
        queue_pops: q1.pops + q2.pops,
        early_exit,
        wall_time_secs: started.elapsed().as_secs_f64(),
        ..SolveStats::default()
    };

    let decode = |positions: [u32; 4]| {
        let codes: Vec<u64> = positions
            .iter()
            .zip(&quarters.tables)
            .map(|(&pos, table)| table[pos as usize].code)
            .collect();
        quarters.partition.decode(&codes)
    };

    let mut outcome = SolveOutcome::infeasible(stats);
    match (goal, first_pair) {
        (_, None) => {}
        (Goal::Feasibility, Some(pair)) => {
            outcome.status = Status::Feasible;
            outcome.witness = Some(decode(pair));
        }
        (Goal::Count, Some(pair)) => {
            outcome.status = Status::Feasible;
            outcome.solution_count = Some(count);
            outcome.witness = Some(decode(pair));
        }
        (Goal::Optimize, _) => {
            let (_, positions) = best.expect("blocks imply a best pair");
            let witness = decode(positions);
            let (_, objective) = instance.evaluate(&witness);
            outcome.status = Status::Optimal;
            outcome.objective = Some(objective);
            outcome.witness = Some(witness);
        }
        (Goal::Enumerate { .. }, _) => unreachable!("rejected above"),
    }
    verify_outcome(instance, &outcome, mode);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Assignment;
    use crate::two_table::{solve_two_table, MatchAlgo};
    use proptest::prelude::*;

    fn unit_row() -> Instance {
        Instance::from_ints(4, &[&[1, 1, 1, 1]], &[2], Some(&[5, 1, 3, 2])).unwrap()
    }

    fn table_values(table: &[TableEntry]) -> Vec<(i64, u64)> {
        table
            .iter()
            .map(|e| {
                assert_eq!(e.vec.dim(), 1);
                (e.vec.coord(0).to_string().parse::<i64>().unwrap(), e.code)
            })
            .collect()
    }

    #[test]
    fn quarter_tables_hold_signed_sums_in_sorted_order() {
        let quarters = build_quarter_tables(&unit_row());
        assert_eq!(quarters.partition.parts(), &[0..1, 1..2, 2..3, 3..4]);
        let [u, v, s, t] = &quarters.tables;
        assert_eq!(table_values(u), vec![(0, 0), (1, 1)]);
        assert_eq!(table_values(v), vec![(0, 0), (1, 1)]);
        // The third quarter is negated, the fourth starts from b = 2.
        assert_eq!(table_values(s), vec![(-1, 1), (0, 0)]);
        assert_eq!(table_values(t), vec![(1, 1), (2, 0)]);
    }

    #[test]
    fn optimizes_the_unit_row() {
        let outcome = solve_four_table(&unit_row(), Goal::Optimize, CompareMode::Exact).unwrap();
        assert_eq!(outcome.status, Status::Optimal);
        assert_eq!(outcome.objective, Some(Scalar::from_int(3)));
        assert_eq!(outcome.witness.unwrap(), Assignment::from_bits(&[0, 1, 0, 1]));
    }

    #[test]
    fn counts_all_weight_two_selections() {
        let outcome = solve_four_table(&unit_row(), Goal::Count, CompareMode::Exact).unwrap();
        assert_eq!(outcome.solution_count, Some(6));
        assert_eq!(outcome.stats.match_blocks, 3);
    }

    #[test]
    fn feasibility_stops_at_the_first_matched_sum() {
        let outcome = solve_four_table(&unit_row(), Goal::Feasibility, CompareMode::Exact).unwrap();
        assert_eq!(outcome.status, Status::Feasible);
        assert!(outcome.stats.early_exit);
        let (residual, _) = unit_row().evaluate(&outcome.witness.unwrap());
        assert!(residual.is_zero());
    }

    #[test]
    fn reports_infeasibility() {
        let inst = Instance::from_ints(4, &[&[2, 2, 2, 2]], &[5], None).unwrap();
        let outcome = solve_four_table(&inst, Goal::Feasibility, CompareMode::Exact).unwrap();
        assert_eq!(outcome.status, Status::Infeasible);
        assert!(!outcome.stats.early_exit);
    }

    #[test]
    fn zero_constraints_drain_in_a_single_block() {
        let inst = Instance::from_ints(5, &[], &[], Some(&[3, -1, 4, -1, -5])).unwrap();
        let count = solve_four_table(&inst, Goal::Count, CompareMode::Exact).unwrap();
        assert_eq!(count.solution_count, Some(32));
        assert_eq!(count.stats.match_blocks, 1);
        let optimum = solve_four_table(&inst, Goal::Optimize, CompareMode::Exact).unwrap();
        assert_eq!(optimum.objective, Some(Scalar::from_int(-7)));
        assert_eq!(optimum.witness.unwrap(), Assignment::from_bits(&[0, 1, 0, 1, 1]));
    }

    #[test]
    fn frontier_never_outgrows_the_left_tables() {
        let inst = Instance::from_ints(
            8,
            &[&[3, -2, 5, 1, -4, 2, 6, -1]],
            &[4],
            Some(&[1, 2, 3, 4, 5, 6, 7, 8]),
        )
        .unwrap();
        let outcome = solve_four_table(&inst, Goal::Count, CompareMode::Exact).unwrap();
        let quarters = build_quarter_tables(&inst);
        let left_sizes = (quarters.tables[0].len() + quarters.tables[2].len()) as u64;
        assert!(outcome.stats.peak_live_entries <= outcome.stats.table_entries_built + left_sizes);
    }

    #[test]
    fn rejects_tolerant_mode_and_enumeration() {
        let inst = unit_row();
        assert!(matches!(
            solve_four_table(&inst, Goal::Feasibility, CompareMode::Tolerant(1e-9)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            solve_four_table(&inst, Goal::Enumerate { limit: 5 }, CompareMode::Exact),
            Err(Error::Unsupported(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// The sweep agrees with the half-table solver on status, count,
        /// and objective for small mechanical instances.
        #[test]
        fn agrees_with_the_half_table_solver(
            n in 1usize..=9,
            m in 0usize..=2,
            seed_rows in proptest::collection::vec(
                proptest::collection::vec(-4i64..=4, 9), 0..=2),
            rhs in proptest::collection::vec(-3i64..=6, 0..=2),
            costs in proptest::collection::vec(-5i64..=5, 9),
        ) {
            let a: Vec<Vec<i64>> = seed_rows.iter().take(m).map(|r| r[..n].to_vec()).collect();
            prop_assume!(a.len() == m && rhs.len() >= m);
            let rows: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
            let inst = Instance::from_ints(n, &rows, &rhs[..m], Some(&costs[..n])).unwrap();

            let counted = solve_four_table(&inst, Goal::Count, CompareMode::Exact).unwrap();
            let reference =
                solve_two_table(&inst, Goal::Count, MatchAlgo::Sort, CompareMode::Exact).unwrap();
            prop_assert_eq!(counted.status, reference.status);
            prop_assert_eq!(counted.solution_count, reference.solution_count);

            let optimized = solve_four_table(&inst, Goal::Optimize, CompareMode::Exact).unwrap();
            let best = solve_two_table(&inst, Goal::Optimize, MatchAlgo::Sort, CompareMode::Exact)
                .unwrap();
            prop_assert_eq!(optimized.status, best.status);
            prop_assert_eq!(optimized.objective, best.objective);
        }
    }
}
