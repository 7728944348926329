//! Exact solver for 0-1 integer programs with linear equality constraints.
//!
//! An instance asks for `x` in `{0,1}^n` with `A·x = b` (and, optionally,
//! minimal `c^T·x`). Solvers answer four kinds of question — feasibility,
//! optimization, counting, and enumeration — and come in three families:
//!
//! * [`two_table`]: split the variables in half, tabulate both sides, and
//!   match half-sums, either by sorting or by a recursive partition that
//!   never materializes more than the matched blocks. `O(2^(n/2))` time
//!   and space.
//! * [`four_table`]: split in four and sweep pair sums from two priority
//!   queues in lockstep. The same time bound with `O(2^(n/4))` live pairs
//!   beyond the quarter tables.
//! * [`oracle`]: lexicographic exhaustive scan, the ground truth for
//!   everything else, refusing instances beyond a size cap.
//!
//! Arithmetic is exact by default ([`Scalar`] is an arbitrary-precision
//! rational with a machine-word fast path); floating-point data is
//! supported through tolerant comparison ([`CompareMode::Tolerant`]) on
//! the solvers that can honor it.

pub mod error;
pub mod scalar;
pub mod vector;

pub use error::{Error, Result};
pub use scalar::{compare_scalars, parse_scalar, render_scalar, CompareMode, Scalar};
pub use vector::{compare_lex, LexVector};

pub mod bench;
pub mod format;
pub mod four_table;
pub mod generate;
pub mod instance;
pub mod median;
pub mod oracle;
pub mod report;
pub mod two_table;
pub mod vector_equality;

use instance::{Goal, Instance, SolveOutcome};
use two_table::MatchAlgo;

/// The solver families, named as the command line names them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Half tables matched by sorting (`sort2`).
    TwoTableSort,
    /// Half tables matched by recursive partitioning (`recursive2`).
    TwoTableRecursive,
    /// Quarter tables swept by synchronized priority queues (`four-table`).
    FourTable,
    /// Exhaustive lexicographic scan (`brute`).
    Brute,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::TwoTableSort => "sort2",
            Algorithm::TwoTableRecursive => "recursive2",
            Algorithm::FourTable => "four-table",
            Algorithm::Brute => "brute",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sort2" => Ok(Algorithm::TwoTableSort),
            "recursive2" => Ok(Algorithm::TwoTableRecursive),
            "four-table" => Ok(Algorithm::FourTable),
            "brute" => Ok(Algorithm::Brute),
            other => Err(Error::Unsupported(format!(
                "unknown algorithm {other:?}; expected sort2, recursive2, four-table, or brute"
            ))),
        }
    }
}

/// Solves `instance` with the chosen algorithm. Restrictions surface as
/// [`Error::Unsupported`]: tolerant comparison needs `sort2` or `brute`,
/// enumeration is not offered by `four-table`, and `brute` refuses large
/// instances.
pub fn solve(
    instance: &Instance,
    goal: Goal,
    algorithm: Algorithm,
    mode: CompareMode,
) -> Result<SolveOutcome> {
    match algorithm {
        Algorithm::TwoTableSort => {
            two_table::solve_two_table(instance, goal, MatchAlgo::Sort, mode)
        }
        Algorithm::TwoTableRecursive => {
            two_table::solve_two_table(instance, goal, MatchAlgo::Recursive, mode)
        }
        Algorithm::FourTable => four_table::solve_four_table(instance, goal, mode),
        Algorithm::Brute => oracle::brute_force_solve(instance, goal, mode),
    }
}

/// Rough heap footprint of solving `n` variables and `m` rows with half
/// tables: `2^ceil(n/2) + 2^floor(n/2)` entries, each holding an `m`-vector
/// of inline scalars, a weight, a code, and its share of the match
/// bookkeeping. Scalars promoted off the fast path make this an
/// underestimate; it is meant for picking an algorithm, not for accounting.
pub fn estimated_two_table_bytes(n: usize, m: usize) -> u128 {
    let scalar = std::mem::size_of::<Scalar>() as u128;
    let per_entry = scalar * (m as u128 + 1) // coordinates and weight
        + std::mem::size_of::<Vec<Scalar>>() as u128 // vector header
        + 8 // code
        + 16; // sort-order slots
    let entries = (1u128 << n.div_ceil(2)) + (1u128 << (n / 2));
    entries * per_entry
}

/// Picks an algorithm for the given shape: half tables while the estimate
/// fits the memory budget, quarter tables beyond it. Tolerant comparison
/// forces the sort strategy, which is the only table solver honoring it.
pub fn auto_algorithm(n: usize, m: usize, memory_budget: u64, mode: CompareMode) -> Algorithm {
    if !mode.is_exact() {
        return Algorithm::TwoTableSort;
    }
    if estimated_two_table_bytes(n, m) <= memory_budget as u128 {
        Algorithm::TwoTableSort
    } else {
        Algorithm::FourTable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use instance::Status;

    #[test]
    fn algorithm_names_round_trip() {
        for algorithm in [
            Algorithm::TwoTableSort,
            Algorithm::TwoTableRecursive,
            Algorithm::FourTable,
            Algorithm::Brute,
        ] {
            assert_eq!(algorithm.to_string().parse::<Algorithm>().unwrap(), algorithm);
        }
        assert!("simplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_algorithm_solves_the_same_instance() {
        let inst =
            Instance::from_ints(4, &[&[1, 1, 1, 1]], &[2], Some(&[5, 1, 3, 2])).unwrap();
        for algorithm in [
            Algorithm::TwoTableSort,
            Algorithm::TwoTableRecursive,
            Algorithm::FourTable,
            Algorithm::Brute,
        ] {
            let outcome = solve(&inst, Goal::Optimize, algorithm, CompareMode::Exact).unwrap();
            assert_eq!(outcome.status, Status::Optimal, "{algorithm}");
            assert_eq!(outcome.objective, Some(Scalar::from_int(3)), "{algorithm}");
        }
    }

    #[test]
    fn auto_selection_tracks_the_budget() {
        // Small instances fit comfortably in a gigabyte.
        assert_eq!(
            auto_algorithm(24, 4, 1 << 30, CompareMode::Exact),
            Algorithm::TwoTableSort
        );
        // A 60-variable half table cannot.
        assert_eq!(
            auto_algorithm(60, 4, 1 << 30, CompareMode::Exact),
            Algorithm::FourTable
        );
        // Tolerant runs stay on the sort strategy regardless.
        assert_eq!(
            auto_algorithm(60, 4, 1 << 30, CompareMode::Tolerant(1e-9)),
            Algorithm::TwoTableSort
        );
    }

    #[test]
    fn footprint_estimates_grow_with_both_dimensions() {
        assert!(estimated_two_table_bytes(20, 2) < estimated_two_table_bytes(22, 2));
        assert!(estimated_two_table_bytes(20, 2) < estimated_two_table_bytes(20, 8));
        // 2^20 + 2^20 entries of a 2-row instance: around a hundred MB.
        let est = estimated_two_table_bytes(40, 2);
        assert!(est > 100 << 20 && est < 1 << 30, "{est}");
    }
}
