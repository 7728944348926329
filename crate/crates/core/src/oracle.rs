//! Brute-force reference solver: scan every assignment in lexicographic
//! order, maintaining the residual incrementally.
//!
//! The scan walks assignments as binary strings with `x1` as the most
//! significant bit, so index order is lexicographic order. Consecutive
//! indices differ only in a trailing run of bits, which costs two column
//! updates per step on average — the whole scan is `O(2^n * m)` scalar
//! work with a single live assignment. Witnesses are therefore canonical:
//! the first feasible assignment is the lexicographically least solution,
//! and the first strict objective improvement yields the lexicographically
//! least optimal solution.
//!
//! This is the ground truth the table solvers are tested against; it
//! refuses instances beyond a configurable size cap rather than melt.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::instance::{Assignment, Goal, Instance, SolveOutcome, SolveStats, Status};
use crate::scalar::{CompareMode, Scalar};
use crate::two_table::verify_outcome;

/// Largest `n` the brute-force scan accepts unless overridden.
pub const DEFAULT_BRUTE_CAP: usize = 24;

/// The assignment at scan index `code`: bit `j` of `x` is bit `n - 1 - j`
/// of `code`.
fn assignment_at(code: u64, n: usize) -> Assignment {
    Assignment::new((0..n).map(|j| (code >> (n - 1 - j)) & 1 == 1).collect())
}

pub fn brute_force_solve(instance: &Instance, goal: Goal, mode: CompareMode) -> Result<SolveOutcome> {
    brute_force_solve_capped(instance, goal, mode, DEFAULT_BRUTE_CAP)
}

/// Under tolerant comparison an assignment counts as a solution when every
/// residual row satisfies `|A_i . x - b_i| <= eps` — the tolerance itself,
/// not the doubled bound table matching certifies.
pub fn brute_force_solve_capped(
    instance: &Instance,
    goal: Goal,
    mode: CompareMode,
    cap: usize,
) -> Result<SolveOutcome> {
    let started = Instant::now();
    let n = instance.n();
    let cap = cap.min(u64::BITS as usize - 1);
    if n > cap {
        return Err(Error::BruteForceCap { n, cap });
    }
    let eps = match mode {
        CompareMode::Exact => Scalar::zero(),
        CompareMode::Tolerant(e) => Scalar::from_f64(e)?,
    };
    let m = instance.m();

    // State at the current scan index: assignment, residual A.x - b,
    // number of rows outside tolerance, and objective value.
    let mut residual: Vec<Scalar> = instance.rhs().iter().map(|b| -b).collect();
    let mut bad_rows = residual.iter().filter(|r| r.abs() > eps).count();
    let mut objective = Scalar::zero();
    let mut zero_tests = m as u64;

    let mut count: u128 = 0;
    let mut first: Option<u64> = None;
    let mut best: Option<(Scalar, u64)> = None;
    let mut solutions: Vec<Assignment> = Vec::new();
    let mut scanned: u64 = 0;
    let mut early_exit = false;

    'scan: for code in 0..(1u64 << n) {
        if code > 0 {
            // Only the trailing bits 0..=tz(code) changed from code - 1.
            for k in 0..=code.trailing_zeros() as usize {
                let j = n - 1 - k;
                let selected = (code >> k) & 1 == 1;
                for (i, row) in residual.iter_mut().enumerate() {
                    let col = instance.coeff(i, j);
                    let was_ok = row.abs() <= eps;
                    *row = if selected { &*row + col } else { &*row - col };
                    let now_ok = row.abs() <= eps;
                    zero_tests += 2;
                    match (was_ok, now_ok) {
                        (true, false) => bad_rows += 1,
                        (false, true) => bad_rows -= 1,
                        _ => {}
                    }
                }
                let cj = instance.objective_coeff(j);
                objective = if selected { &objective + &cj } else { &objective - &cj };
            }
        }
        scanned += 1;
        if bad_rows > 0 {
            continue;
        }
        count += 1;
        first.get_or_insert(code);
        match goal {
            Goal::Feasibility => {
                early_exit = true;
                break 'scan;
            }
            Goal::Count => {}
            Goal::Optimize => {
                if best.as_ref().is_none_or(|(w, _)| objective < *w) {
                    best = Some((objective.clone(), code));
                }
            }
            Goal::Enumerate { limit } => {
                if (solutions.len() as u64) < limit {
                    solutions.push(assignment_at(code, n));
                }
                if solutions.len() as u64 >= limit {
                    early_exit = true;
                    break 'scan;
                }
            }
        }
    }

    let stats = SolveStats {
        // For a scan there is no table; count assignments examined.
        table_entries_built: scanned,
        comparisons: zero_tests,
        peak_live_entries: 1,
        early_exit,
        wall_time_secs: started.elapsed().as_secs_f64(),
        ..SolveStats::default()
    };

    let mut outcome = SolveOutcome::infeasible(stats);
    if let Some(first_code) = first {
        outcome.status = Status::Feasible;
        outcome.witness = Some(assignment_at(first_code, n));
        match goal {
            Goal::Feasibility => {}
            Goal::Count => outcome.solution_count = Some(count),
            Goal::Optimize => {
                let (_, code) = best.expect("a solution was seen");
                let witness = assignment_at(code, n);
                let (_, objective) = instance.evaluate(&witness);
                outcome.status = Status::Optimal;
                outcome.objective = Some(objective);
                outcome.witness = Some(witness);
            }
            Goal::Enumerate { .. } => {
                outcome.solutions = solutions;
            }
        }
    }
    outcome.stats.wall_time_secs = started.elapsed().as_secs_f64();
    verify_outcome(instance, &outcome, mode);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_table::{solve_two_table, MatchAlgo};
    use proptest::prelude::*;

    fn knapsack_2357() -> Instance {
        Instance::from_ints(4, &[&[2, 3, 5, 7]], &[5], None).unwrap()
    }

    #[test]
    fn finds_the_lexicographically_least_solution_first() {
        let outcome =
            brute_force_solve(&knapsack_2357(), Goal::Feasibility, CompareMode::Exact).unwrap();
        // Solutions are {1100, 0010}; 0010 comes first lexicographically.
        assert_eq!(outcome.witness.unwrap().to_bit_string(), "0010");
        assert!(outcome.stats.early_exit);
    }

    #[test]
    fn counts_and_enumerates_in_lex_order() {
        let counted = brute_force_solve(&knapsack_2357(), Goal::Count, CompareMode::Exact).unwrap();
        assert_eq!(counted.solution_count, Some(2));

        let listed = brute_force_solve(
            &knapsack_2357(),
            Goal::Enumerate { limit: 10 },
            CompareMode::Exact,
        )
        .unwrap();
        let strings: Vec<String> = listed.solutions.iter().map(Assignment::to_bit_string).collect();
        assert_eq!(strings, vec!["0010", "1100"]);

        let capped = brute_force_solve(
            &knapsack_2357(),
            Goal::Enumerate { limit: 1 },
            CompareMode::Exact,
        )
        .unwrap();
        assert_eq!(capped.solutions.len(), 1);
        assert!(capped.stats.early_exit);
    }

    #[test]
    fn optimization_breaks_ties_toward_the_lex_least_witness() {
        // Both 0001 and 0010 reach the optimum 0; the scan keeps 0001.
        let inst =
            Instance::from_ints(4, &[&[1, 1, 1, 1]], &[1], Some(&[1, 1, 0, 0])).unwrap();
        let outcome = brute_force_solve(&inst, Goal::Optimize, CompareMode::Exact).unwrap();
        assert_eq!(outcome.status, Status::Optimal);
        assert_eq!(outcome.objective, Some(Scalar::zero()));
        assert_eq!(outcome.witness.unwrap().to_bit_string(), "0001");
    }

    #[test]
    fn unconstrained_instances_count_every_assignment() {
        let inst = Instance::from_ints(5, &[], &[], None).unwrap();
        let outcome = brute_force_solve(&inst, Goal::Count, CompareMode::Exact).unwrap();
        assert_eq!(outcome.solution_count, Some(32));
        assert_eq!(outcome.stats.table_entries_built, 32);
    }

    #[test]
    fn refuses_instances_beyond_the_cap() {
        let inst = Instance::from_ints(5, &[&[1, 1, 1, 1, 1]], &[2], None).unwrap();
        let err =
            brute_force_solve_capped(&inst, Goal::Count, CompareMode::Exact, 4).unwrap_err();
        match err {
            Error::BruteForceCap { n, cap } => {
                assert_eq!((n, cap), (5, 4));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn tolerant_scan_accepts_near_misses() {
        let row = ["0.3", "0.35", "3"]
            .map(|t| crate::parse_scalar(t).unwrap().to_float_scalar());
        let b = crate::parse_scalar("0.7").unwrap().to_float_scalar();
        let inst = Instance::new(3, 1, vec![row.to_vec()], vec![b], None).unwrap();

        let exact = brute_force_solve(&inst, Goal::Count, CompareMode::Exact).unwrap();
        assert_eq!(exact.status, Status::Infeasible);

        let tolerant =
            brute_force_solve(&inst, Goal::Count, CompareMode::Tolerant(0.1)).unwrap();
        assert_eq!(tolerant.solution_count, Some(1));
        assert_eq!(tolerant.witness.unwrap().to_bit_string(), "110");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// The half-table solver agrees with the scan on status, count,
        /// and objective.
        #[test]
        fn table_solver_matches_the_scan(
            n in 1usize..=8,
            m in 0usize..=2,
            rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 8), 2),
            rhs in proptest::collection::vec(-3i64..=6, 2),
            costs in proptest::collection::vec(-5i64..=5, 8),
        ) {
            let a: Vec<Vec<i64>> = rows.iter().take(m).map(|r| r[..n].to_vec()).collect();
            let row_refs: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
            let inst = Instance::from_ints(n, &row_refs, &rhs[..m], Some(&costs[..n])).unwrap();

            let scan = brute_force_solve(&inst, Goal::Count, CompareMode::Exact)?;
            let table =
                solve_two_table(&inst, Goal::Count, MatchAlgo::Sort, CompareMode::Exact)?;
            prop_assert_eq!(scan.status, table.status);
            prop_assert_eq!(scan.solution_count, table.solution_count);

            let scan_best = brute_force_solve(&inst, Goal::Optimize, CompareMode::Exact)?;
            let table_best =
                solve_two_table(&inst, Goal::Optimize, MatchAlgo::Recursive, CompareMode::Exact)?;
            prop_assert_eq!(scan_best.status, table_best.status);
            prop_assert_eq!(scan_best.objective, table_best.objective);
        }
    }
}
