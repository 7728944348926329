//! Timing harness: solve planted instances of growing size and report one
//! CSV row per measurement.
//!
//! Every cell `(n, trial)` generates one planted instance (full density,
//! coefficients in `-5..=5`, with an objective) from the deterministic
//! seed `base + 100·n + trial`, and every requested algorithm solves that
//! same instance under the optimization goal, so timings compare like for
//! like. Growth is summarized per algorithm as the geometric mean of the
//! wall-time ratios between consecutive sizes, taking the fastest trial
//! per size.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::generate::{generate, Family, GenSpec};
use crate::instance::{Goal, Status};
use crate::oracle::DEFAULT_BRUTE_CAP;
use crate::scalar::CompareMode;
use crate::{solve, Algorithm};

pub const CSV_HEADER: &str =
    "n,m,algorithm,trial,wall_time,table_entries_built,peak_live_entries,status";

#[derive(Debug, Clone)]
pub struct BenchSpec {
    /// Instance sizes, benchmarked in the order given.
    pub n_list: Vec<usize>,
    pub m: usize,
    /// Instances per size; each is solved once by every algorithm.
    pub trials: u32,
    pub algorithms: Vec<Algorithm>,
    pub seed_base: u64,
}

/// One measurement: one algorithm solving one instance.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub algorithm: Algorithm,
    pub trial: u32,
    /// Seconds.
    pub wall_time: f64,
    pub table_entries_built: u64,
    pub peak_live_entries: u64,
    pub status: Status,
}

fn seed_for(base: u64, n: usize, trial: u32) -> u64 {
    base.wrapping_add(100 * n as u64).wrapping_add(trial as u64)
}

pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let mut problems = Vec::new();
    if spec.n_list.is_empty() {
        problems.push("the size list is empty".to_string());
    }
    if spec.trials == 0 {
        problems.push("at least one trial is needed".to_string());
    }
    if spec.algorithms.is_empty() {
        problems.push("no algorithms requested".to_string());
    }
    if spec.algorithms.contains(&Algorithm::Brute) {
        if let Some(&worst) = spec.n_list.iter().max() {
            if worst > DEFAULT_BRUTE_CAP {
                problems.push(format!(
                    "brute cannot run n = {worst}, its cap is {DEFAULT_BRUTE_CAP}"
                ));
            }
        }
    }
    if let Some(problem) = problems.into_iter().next() {
        return Err(Error::Spec(problem));
    }

    let mut rows = Vec::new();
    for &n in &spec.n_list {
        for trial in 0..spec.trials {
            let mut gen = GenSpec::new(Family::Planted, n, spec.m, seed_for(spec.seed_base, n, trial));
            gen.with_objective = true;
            let instance = generate(&gen)?.instance;
            for &algorithm in &spec.algorithms {
                let outcome = solve(&instance, Goal::Optimize, algorithm, CompareMode::Exact)?;
                rows.push(BenchRow {
                    n,
                    m: spec.m,
                    algorithm,
                    trial,
                    wall_time: outcome.stats.wall_time_secs,
                    table_entries_built: outcome.stats.table_entries_built,
                    peak_live_entries: outcome.stats.peak_live_entries,
                    status: outcome.status,
                });
            }
        }
    }
    Ok(rows)
}

/// Per algorithm, the geometric mean of wall-time ratios between
/// consecutive sizes, using the fastest trial per size. Algorithms
/// measured at fewer than two sizes are omitted. Times are floored at a
/// nanosecond so instant solves cannot divide by zero.
pub fn growth_ratios(rows: &[BenchRow]) -> Vec<(Algorithm, f64)> {
    let mut algorithms = Vec::new();
    for row in rows {
        if !algorithms.contains(&row.algorithm) {
            algorithms.push(row.algorithm);
        }
    }
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();

    let mut out = Vec::new();
    for algorithm in algorithms {
        let best: Vec<f64> = sizes
            .iter()
            .map(|&n| {
                rows.iter()
                    .filter(|r| r.algorithm == algorithm && r.n == n)
                    .map(|r| r.wall_time.max(1e-9))
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|t| t.is_finite())
            .collect();
        if best.len() < 2 {
            continue;
        }
        let log_mean = best.windows(2).map(|w| (w[1] / w[0]).ln()).sum::<f64>()
            / (best.len() - 1) as f64;
        out.push((algorithm, log_mean.exp()));
    }
    out
}

/// The measurement table as CSV, followed by one comment line per
/// algorithm with its growth summary.
pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{},{},{}",
            r.n,
            r.m,
            r.algorithm,
            r.trial,
            r.wall_time,
            r.table_entries_built,
            r.peak_live_entries,
            r.status
        );
    }
    for (algorithm, ratio) in growth_ratios(rows) {
        let _ = writeln!(out, "# growth_ratio algorithm={algorithm} geomean={ratio:.3}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> BenchSpec {
        BenchSpec {
            n_list: vec![4, 6],
            m: 1,
            trials: 2,
            algorithms: vec![Algorithm::TwoTableSort, Algorithm::FourTable],
            seed_base: 7,
        }
    }

    #[test]
    fn measures_every_cell_once_per_algorithm() {
        let rows = run_bench(&tiny_spec()).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2);
        // Planted instances with an objective always optimize.
        assert!(rows.iter().all(|r| r.status == Status::Optimal));
        // The same instance feeds both algorithms in a cell, which shows
        // in deterministic table sizes.
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].n, pair[1].n);
            assert_eq!(pair[0].trial, pair[1].trial);
            assert_ne!(pair[0].algorithm, pair[1].algorithm);
        }
    }

    #[test]
    fn csv_has_the_fixed_header_and_growth_footers() {
        let rows = run_bench(&tiny_spec()).unwrap();
        let csv = render_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let body: Vec<&str> = lines.collect();
        assert_eq!(body.iter().filter(|l| !l.starts_with('#')).count(), 8);
        assert!(body.iter().any(|l| l.starts_with("# growth_ratio algorithm=sort2 ")), "{csv}");
        assert!(
            body.iter().any(|l| l.starts_with("# growth_ratio algorithm=four-table ")),
            "{csv}"
        );
        let data = body[0];
        assert!(data.starts_with("4,1,sort2,0,"), "{data}");
        assert!(data.ends_with(",optimal"), "{data}");
    }

    #[test]
    fn growth_summary_is_the_geometric_mean_of_step_ratios() {
        let row = |n: usize, wall_time: f64| BenchRow {
            n,
            m: 1,
            algorithm: Algorithm::TwoTableSort,
            trial: 0,
            wall_time,
            table_entries_built: 0,
            peak_live_entries: 0,
            status: Status::Optimal,
        };
        // Fastest per size: 1s, 2s, 8s. Ratios 2 and 4, geomean sqrt(8).
        let rows = vec![row(10, 1.0), row(10, 3.0), row(12, 2.0), row(14, 8.0)];
        let ratios = growth_ratios(&rows);
        assert_eq!(ratios.len(), 1);
        assert!((ratios[0].1 - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn instrumentation_columns_match_the_construction_counts() {
        let spec = BenchSpec {
            n_list: vec![8, 10, 12, 14, 16],
            m: 4,
            trials: 1,
            algorithms: vec![Algorithm::TwoTableSort, Algorithm::FourTable],
            seed_base: 7,
        };
        for row in run_bench(&spec).unwrap() {
            match row.algorithm {
                // Both half tables are always materialized in full.
                Algorithm::TwoTableSort => assert_eq!(
                    row.table_entries_built,
                    (1 << row.n.div_ceil(2)) + (1 << (row.n / 2)),
                    "n = {}",
                    row.n
                ),
                // Four quarter tables plus two queues that never outgrow
                // their seeding table.
                Algorithm::FourTable => assert!(
                    row.peak_live_entries <= 6 * (1 << row.n.div_ceil(4)),
                    "n = {}: peak {}",
                    row.n,
                    row.peak_live_entries
                ),
                _ => unreachable!("only the requested algorithms run"),
            }
        }
    }

    #[test]
    fn brute_scans_quadratically_more_than_the_half_tables_hold() {
        let spec = BenchSpec {
            n_list: vec![20],
            m: 4,
            trials: 1,
            algorithms: vec![Algorithm::TwoTableSort, Algorithm::Brute],
            seed_base: 7,
        };
        let rows = run_bench(&spec).unwrap();
        let built = |a: Algorithm| {
            rows.iter().find(|r| r.algorithm == a).unwrap().table_entries_built
        };
        assert_eq!(built(Algorithm::TwoTableSort), (1 << 10) + (1 << 10));
        assert_eq!(built(Algorithm::Brute), 1 << 20);
    }

    #[test]
    fn refuses_impossible_specifications() {
        let mut spec = tiny_spec();
        spec.n_list.clear();
        assert!(matches!(run_bench(&spec).unwrap_err(), Error::Spec(_)));

        let mut spec = tiny_spec();
        spec.algorithms = vec![Algorithm::Brute];
        spec.n_list = vec![4, 30];
        let err = run_bench(&spec).unwrap_err();
        assert!(err.to_string().contains("cap is 24"), "{err}");
    }
}
