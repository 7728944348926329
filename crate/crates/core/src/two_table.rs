//! Half-table solver: split the variables in two, enumerate both halves,
//! and match half-sums through the vector-equality machinery.
//!
//! For a split `X1 | X2`, table `U` holds one entry per assignment of `X1`
//! with vector `sum_{j in X1} A_.j * x_j`, and table `V` holds `b - sum_{j
//! in X2} A_.j * x_j` per assignment of `X2`. An assignment is a solution
//! exactly when its `U` and `V` vectors are equal, so the match list of
//! `(U, V)` compresses the full solution set: feasibility reads off any
//! block, counting sums block sizes, and optimization minimizes the entry
//! weights `c^T * half` separately per side within each block.

use std::ops::Range;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::instance::{
    Assignment, Goal, Instance, SolveOutcome, SolveStats, Status, VariablePartition,
};
use crate::scalar::{CompareMode, Scalar};
use crate::vector::LexVector;
use crate::vector_equality::{
    recursive_vector_equality_with, sort_vector_equality_bounded, MatchList, PivotRule, VectorSet,
};

/// One half- or quarter-assignment: its constraint-space vector, its
/// objective contribution, and the bit code of the underlying assignment
/// (bit `t` drives the `t`-th variable of the owning block).
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub vec: LexVector,
    pub weight: Scalar,
    pub code: u64,
}

/// The two half tables plus the variable split that produced them. Both
/// tables are in code order: `u[i].code == i`.
#[derive(Debug, Clone)]
pub struct HalfTables {
    pub u: Vec<TableEntry>,
    pub v: Vec<TableEntry>,
    pub partition: VariablePartition,
}

impl HalfTables {
    pub fn entry_count(&self) -> u64 {
        (self.u.len() + self.v.len()) as u64
    }
}

/// How table vectors are computed during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableBuildMode {
    /// Recompute each entry from its code; the baseline.
    #[default]
    Direct,
    /// Walk codes in single-bit-flip order, adding or subtracting one
    /// column per step. Identical to `Direct` under exact arithmetic;
    /// floating-point entries may differ by rounding, since subtraction
    /// does not perfectly undo an earlier addition.
    Incremental,
}

/// Matching strategy for the half tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchAlgo {
    #[default]
    Sort,
    Recursive,
}

/// Everything configurable about a half-table solve beyond the goal.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoTableConfig {
    pub algo: MatchAlgo,
    pub mode: CompareMode,
    pub build: TableBuildMode,
    pub pivot: PivotRule,
}

/// Refuse table widths whose enumeration could never complete anyway;
/// keeps shifts well-defined long before memory would run out.
pub(crate) const MAX_PART_WIDTH: usize = 48;

pub(crate) fn check_part_widths(partition: &VariablePartition) -> Result<()> {
    for part in partition.parts() {
        if part.len() > MAX_PART_WIDTH {
            return Err(Error::Unsupported(format!(
                "a table over {} variables needs 2^{} entries",
                part.len(),
                part.len()
            )));
        }
    }
    Ok(())
}

/// Builds the entries of one variable block. `base` is the vector of the
/// all-zero code; each selected variable then adds its column `A_.j`
/// (subtracts, when `negate` is set). Entries come back in code order.
pub(crate) fn build_part_entries(
    instance: &Instance,
    part: Range<usize>,
    base: Vec<Scalar>,
    negate: bool,
    build: TableBuildMode,
) -> Vec<TableEntry> {
    debug_assert_eq!(base.len(), instance.m());
    let width = part.len();
    debug_assert!(width <= MAX_PART_WIDTH);
    let total: u64 = 1 << width;
    let apply = |acc: &Scalar, col: &Scalar, add: bool| {
        if add != negate {
            acc + col
        } else {
            acc - col
        }
    };

    let mut entries = Vec::with_capacity(total as usize);
    match build {
        TableBuildMode::Direct => {
            for code in 0..total {
                let mut vec = base.clone();
                let mut weight = Scalar::zero();
                for t in 0..width {
                    if (code >> t) & 1 == 1 {
                        let j = part.start + t;
                        for (i, acc) in vec.iter_mut().enumerate() {
                            *acc = apply(acc, instance.coeff(i, j), true);
                        }
                        weight = &weight + &instance.objective_coeff(j);
                    }
                }
                entries.push(TableEntry {
                    vec: LexVector::new(vec),
                    weight,
                    code,
                });
            }
        }
        TableBuildMode::Incremental => {
            let mut vec = base;
            let mut weight = Scalar::zero();
            let mut code = 0u64;
            entries.push(TableEntry {
                vec: LexVector::new(vec.clone()),
                weight: weight.clone(),
                code,
            });
            for step in 1..total {
                // Single-bit-flip enumeration: step i flips bit tz(i).
                let t = step.trailing_zeros() as usize;
                code ^= 1 << t;
                let selected = (code >> t) & 1 == 1;
                let j = part.start + t;
                for (i, acc) in vec.iter_mut().enumerate() {
                    *acc = apply(acc, instance.coeff(i, j), selected);
                }
                let cj = instance.objective_coeff(j);
                weight = if selected { &weight + &cj } else { &weight - &cj };
                entries.push(TableEntry {
                    vec: LexVector::new(vec.clone()),
                    weight: weight.clone(),
                    code,
                });
            }
            entries.sort_unstable_by_key(|e| e.code);
        }
    }
    debug_assert!(entries.iter().enumerate().all(|(i, e)| e.code == i as u64));
    entries
}

/// Builds both half tables for the two-way contiguous split of `instance`.
pub fn build_half_tables(instance: &Instance) -> HalfTables {
    build_half_tables_with(instance, TableBuildMode::Direct)
}

pub fn build_half_tables_with(instance: &Instance, build: TableBuildMode) -> HalfTables {
    let partition = VariablePartition::split(instance.n(), 2);
    let zeros = vec![Scalar::zero(); instance.m()];
    let u = build_part_entries(instance, partition.part(0), zeros, false, build);
    let v = build_part_entries(instance, partition.part(1), instance.rhs().to_vec(), true, build);
    HalfTables { u, v, partition }
}

/// Reassembles a full assignment from the codes of a matched entry pair.
pub fn decode_witness(u_code: u64, v_code: u64, partition: &VariablePartition) -> Assignment {
    assert_eq!(partition.block_count(), 2, "half-table decode needs a two-way split");
    partition.decode(&[u_code, v_code])
}

/// Builds the half tables and runs the requested matcher over them,
/// returning both for inspection. Table vectors are cloned into the match
/// query, so prefer [`solve_two_table`] for plain solving.
pub fn match_half_tables(
    instance: &Instance,
    algo: MatchAlgo,
    mode: CompareMode,
) -> Result<(HalfTables, MatchList)> {
    check_part_widths(&VariablePartition::split(instance.n(), 2))?;
    let tables = build_half_tables(instance);
    let vectors = |entries: &[TableEntry]| -> Vec<LexVector> {
        entries.iter().map(|e| e.vec.clone()).collect()
    };
    let u_set = VectorSet::new(vectors(&tables.u)).expect("uniform table dimensions");
    let v_set = VectorSet::new(vectors(&tables.v)).expect("uniform table dimensions");
    let list = run_matcher(&u_set, &v_set, algo, mode, PivotRule::WeightedMedian, None)?;
    Ok((tables, list))
}

fn run_matcher(
    u_set: &VectorSet,
    v_set: &VectorSet,
    algo: MatchAlgo,
    mode: CompareMode,
    pivot: PivotRule,
    max_blocks: Option<usize>,
) -> Result<MatchList> {
    match algo {
        MatchAlgo::Sort => Ok(sort_vector_equality_bounded(u_set, v_set, mode, max_blocks)),
        MatchAlgo::Recursive => {
            if !mode.is_exact() {
                return Err(Error::Unsupported(
                    "recursive matching requires exact comparison; use the sort strategy for tolerant runs"
                        .to_string(),
                ));
            }
            recursive_vector_equality_with(u_set, v_set, mode, pivot, None)
        }
    }
}

/// Solves via half tables. The recursive matcher requires exact mode; the
/// sort matcher additionally supports tolerant comparison, where matched
/// witnesses satisfy `|A·x - b| <= 2*eps` per row (blocks anchor at their
/// first matched value).
pub fn solve_two_table(
    instance: &Instance,
    goal: Goal,
    algo: MatchAlgo,
    mode: CompareMode,
) -> Result<SolveOutcome> {
    solve_two_table_with(
        instance,
        goal,
        TwoTableConfig {
            algo,
            mode,
            ..TwoTableConfig::default()
        },
    )
}

pub fn solve_two_table_with(
    instance: &Instance,
    goal: Goal,
    config: TwoTableConfig,
) -> Result<SolveOutcome> {
    let started = Instant::now();
    let partition = VariablePartition::split(instance.n(), 2);
    check_part_widths(&partition)?;
    if matches!(config.algo, MatchAlgo::Recursive) && !config.mode.is_exact() {
        return Err(Error::Unsupported(
            "recursive matching requires exact comparison; use the sort strategy for tolerant runs"
                .to_string(),
        ));
    }

    let tables = build_half_tables_with(instance, config.build);
    let entries_built = tables.entry_count();

    // Tables are in code order, so moving the vectors out leaves weights
    // addressable by code == position.
    let split = |entries: Vec<TableEntry>| -> (Vec<LexVector>, Vec<Scalar>) {
        entries.into_iter().map(|e| (e.vec, e.weight)).unzip()
    };
    let (u_vecs, u_weights) = split(tables.u);
    let (v_vecs, v_weights) = split(tables.v);
    let u_set = VectorSet::new(u_vecs).expect("uniform table dimensions");
    let v_set = VectorSet::new(v_vecs).expect("uniform table dimensions");

    let early_cap = match (goal, config.algo) {
        (Goal::Feasibility, MatchAlgo::Sort) => Some(1),
        _ => None,
    };
    let list = run_matcher(&u_set, &v_set, config.algo, config.mode, config.pivot, early_cap)?;

    let mut stats = SolveStats {
        table_entries_built: entries_built,
        comparisons: list.comparisons,
        peak_live_entries: entries_built,
        match_blocks: list.blocks.len() as u64,
        early_exit: early_cap.is_some() && !list.is_empty(),
        ..SolveStats::default()
    };

    let mut outcome = shape_outcome(
        instance,
        goal,
        config.mode,
        &list,
        &u_weights,
        &v_weights,
        &partition,
        &mut stats,
    );
    stats.wall_time_secs = started.elapsed().as_secs_f64();
    outcome.stats = stats;
    verify_outcome(instance, &outcome, config.mode);
    Ok(outcome)
}

/// Minimum-weight entry of one side of a block; the scan order is by code,
/// so ties resolve to the lowest code.
fn block_min(range: Range<usize>, order: &[usize], weights: &[Scalar]) -> (Scalar, u64) {
    let mut best: Option<(Scalar, u64)> = None;
    for &code in &order[range] {
        let w = &weights[code];
        if best.as_ref().is_none_or(|(bw, _)| w < bw) {
            best = Some((w.clone(), code as u64));
        }
    }
    best.expect("blocks are never empty")
}

#[allow(clippy::too_many_arguments)]
fn shape_outcome(
    instance: &Instance,
    goal: Goal,
    mode: CompareMode,
    list: &MatchList,
    u_weights: &[Scalar],
    v_weights: &[Scalar],
    partition: &VariablePartition,
    stats: &mut SolveStats,
) -> SolveOutcome {
    if list.is_empty() {
        return SolveOutcome::infeasible(SolveStats::default());
    }
    let first_witness = || {
        let block = &list.blocks[0];
        decode_witness(
            list.u_order[block.u_range.start] as u64,
            list.v_order[block.v_range.start] as u64,
            partition,
        )
    };
    let mut outcome = SolveOutcome::infeasible(SolveStats::default());
    outcome.status = Status::Feasible;
    match goal {
        Goal::Feasibility => {
            outcome.witness = Some(first_witness());
        }
        Goal::Count => {
            outcome.solution_count = Some(list.pair_count());
            outcome.witness = Some(first_witness());
        }
        Goal::Optimize => {
            let mut best: Option<(Scalar, u64, u64)> = None;
            for block in &list.blocks {
                let (uw, u_code) = block_min(block.u_range.clone(), &list.u_order, u_weights);
                let (vw, v_code) = block_min(block.v_range.clone(), &list.v_order, v_weights);
                stats.comparisons += (block.u_range.len() + block.v_range.len()) as u64;
                let total = &uw + &vw;
                if best.as_ref().is_none_or(|(bw, _, _)| total < *bw) {
                    best = Some((total, u_code, v_code));
                }
            }
            let (_, u_code, v_code) = best.expect("nonempty list");
            let witness = decode_witness(u_code, v_code, partition);
            // Report the witness's evaluated objective: equal to the
            // minimized weight sum under exact arithmetic, and free of
            // re-association rounding under floating-point input.
            let (_, objective) = instance.evaluate(&witness);
            outcome.status = Status::Optimal;
            outcome.objective = Some(objective);
            outcome.witness = Some(witness);
        }
        Goal::Enumerate { limit } => {
            'blocks: for block in &list.blocks {
                for i in block.u_range.clone() {
                    for j in block.v_range.clone() {
                        if outcome.solutions.len() as u64 >= limit {
                            break 'blocks;
                        }
                        let x = decode_witness(
                            list.u_order[i] as u64,
                            list.v_order[j] as u64,
                            partition,
                        );
                        debug_assert!(verify_solution(instance, &x, mode).is_none());
                        outcome.solutions.push(x);
                    }
                }
            }
            outcome.witness = outcome.solutions.first().cloned().or_else(|| Some(first_witness()));
        }
    }
    outcome
}

/// None when the assignment satisfies the constraints (within twice the
/// tolerance under tolerant comparison); otherwise the offending residual.
fn verify_solution(instance: &Instance, x: &Assignment, mode: CompareMode) -> Option<Scalar> {
    let (residual, _) = instance.evaluate(x);
    let worst = residual.max_abs();
    let bound = match mode {
        CompareMode::Exact => Scalar::zero(),
        CompareMode::Tolerant(eps) => {
            let eps = Scalar::from_f64(eps).expect("tolerance is finite");
            &eps + &eps
        }
    };
    if worst <= bound {
        None
    } else {
        Some(worst)
    }
}

/// Solver self-check: any reported witness must satisfy the instance, and a
/// reported optimum must equal its witness's objective.
pub(crate) fn verify_outcome(instance: &Instance, outcome: &SolveOutcome, mode: CompareMode) {
    if let Some(x) = &outcome.witness {
        if let Some(worst) = verify_solution(instance, x, mode) {
            panic!("solver returned witness {x} with residual {worst}");
        }
        if let Some(objective) = &outcome.objective {
            let (_, actual) = instance.evaluate(x);
            assert!(
                *objective == actual,
                "reported objective {objective} but the witness evaluates to {actual}"
            );
        }
    } else {
        assert_eq!(outcome.status, Status::Infeasible, "feasible outcomes carry a witness");
    }
}
