//! Problem data and solver-facing result types.
//!
//! An instance asks for `x` in `{0,1}^n` with `A·x = b` (m equality rows)
//! and, when an objective vector `c` is present, minimal `c^T·x`.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::LexVector;

/// A 0-1 program with linear equality constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    a: Vec<Vec<Scalar>>,
    b: Vec<Scalar>,
    c: Option<Vec<Scalar>>,
}

impl Instance {
    /// Validates raw fields against the declared shape `n` x `m` and returns
    /// a well-formed instance, or every violation found. `m = 0` (always
    /// feasible) is legal; `n` must be positive.
    pub fn new(
        n: usize,
        m: usize,
        a: Vec<Vec<Scalar>>,
        b: Vec<Scalar>,
        c: Option<Vec<Scalar>>,
    ) -> Result<Self> {
        let mut violations = Vec::new();
        if n == 0 {
            violations.push("n must be positive".to_string());
        }
        if a.len() != m {
            violations.push(format!("A has {} of {} rows", a.len(), m));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                violations.push(format!("row {} has {} of {} entries", i + 1, row.len(), n));
            }
        }
        if b.len() != m {
            violations.push(format!("b has {} of {} entries", b.len(), m));
        }
        if let Some(obj) = &c {
            if obj.len() != n {
                violations.push(format!("c has {} of {} entries", obj.len(), n));
            }
        }
        if violations.is_empty() {
            Ok(Instance { n, a, b, c })
        } else {
            Err(Error::Validation { violations })
        }
    }

    /// Convenience constructor from integer data; shapes are validated.
    pub fn from_ints(n: usize, a: &[&[i64]], b: &[i64], c: Option<&[i64]>) -> Result<Self> {
        let to_row = |row: &&[i64]| row.iter().map(|&v| Scalar::from_int(v)).collect();
        Instance::new(
            n,
            b.len(),
            a.iter().map(to_row).collect(),
            b.iter().map(|&v| Scalar::from_int(v)).collect(),
            c.map(|row| row.iter().map(|&v| Scalar::from_int(v)).collect()),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.a[i]
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Scalar {
        &self.a[i][j]
    }

    pub fn rhs(&self) -> &[Scalar] {
        &self.b
    }

    pub fn objective(&self) -> Option<&[Scalar]> {
        self.c.as_deref()
    }

    /// Objective coefficient of variable `j`; zero when no objective is set.
    pub fn objective_coeff(&self, j: usize) -> Scalar {
        match &self.c {
            Some(c) => c[j].clone(),
            None => Scalar::zero(),
        }
    }

    /// Residual `A·x - b` and objective `c^T·x` for one assignment.
    pub fn evaluate(&self, x: &Assignment) -> (LexVector, Scalar) {
        assert_eq!(x.len(), self.n, "assignment length {} for n = {}", x.len(), self.n);
        let residual = (0..self.m())
            .map(|i| {
                let mut acc = -&self.b[i];
                for j in 0..self.n {
                    if x.bit(j) {
                        acc = &acc + &self.a[i][j];
                    }
                }
                acc
            })
            .collect();
        let mut objective = Scalar::zero();
        if let Some(c) = &self.c {
            for j in 0..self.n {
                if x.bit(j) {
                    objective = &objective + &c[j];
                }
            }
        }
        (LexVector::new(residual), objective)
    }

    /// The same instance with every coefficient converted to a float scalar.
    pub fn to_float(&self) -> Instance {
        let conv_row = |row: &Vec<Scalar>| row.iter().map(Scalar::to_float_scalar).collect();
        Instance {
            n: self.n,
            a: self.a.iter().map(conv_row).collect(),
            b: self.b.iter().map(Scalar::to_float_scalar).collect(),
            c: self.c.as_ref().map(|c| c.iter().map(Scalar::to_float_scalar).collect()),
        }
    }

    /// Non-fatal oddities worth surfacing: currently a row count at or above
    /// the number of assignments, which usually signals transposed input.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = self.m();
        if self.n < usize::BITS as usize - 1 && m >= 1usize << self.n {
            out.push(format!(
                "m = {m} is at least 2^n = {}; the constraint count exceeds the search space",
                1usize << self.n
            ));
        }
        out
    }
}

/// One candidate solution: a 0/1 value per variable.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn zeroes(n: usize) -> Self {
        Assignment { bits: vec![false; n] }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Assignment {
            bits: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.bits[j] = value;
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Compact `0`/`1` string, first variable first.
    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment({self})")
    }
}

/// A split of the variable indices `0..n` into `k` contiguous blocks whose
/// sizes differ by at most one, earlier blocks taking the extra variable.
/// Blocks may be empty when `n < k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariablePartition {
    n: usize,
    parts: Vec<Range<usize>>,
}

impl VariablePartition {
    /// Splits `n` variables into `k` blocks. Only `k = 2` and `k = 4` are
    /// meaningful here; anything else is a caller bug.
    pub fn split(n: usize, k: usize) -> Self {
        assert!(k == 2 || k == 4, "unsupported block count {k}");
        let base = n / k;
        let extra = n % k;
        let mut parts = Vec::with_capacity(k);
        let mut start = 0;
        for i in 0..k {
            let size = base + usize::from(i < extra);
            parts.push(start..start + size);
            start += size;
        }
        VariablePartition { n, parts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, i: usize) -> Range<usize> {
        self.parts[i].clone()
    }

    pub fn parts(&self) -> &[Range<usize>] {
        &self.parts
    }

    /// Rebuilds a full assignment from one code per block. Bit `t` of a
    /// block's code (low bit first) drives the `t`-th variable of that
    /// block. Codes must fit their block widths.
    pub fn decode(&self, codes: &[u64]) -> Assignment {
        assert_eq!(codes.len(), self.parts.len(), "one code per block");
        let mut x = Assignment::zeroes(self.n);
        for (part, &code) in self.parts.iter().zip(codes) {
            let width = part.len();
            assert!(
                width >= 64 || code < (1u64 << width),
                "code {code} out of range for a block of {width} variables"
            );
            for (t, j) in part.clone().enumerate() {
                x.set(j, (code >> t) & 1 == 1);
            }
        }
        x
    }
}

/// Outcome quality: was anything found, and is it provably best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Infeasible,
    Feasible,
    Optimal,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Infeasible => "infeasible",
            Status::Feasible => "feasible",
            Status::Optimal => "optimal",
        })
    }
}

/// What the caller wants from a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    /// Any solution, stopping as early as the algorithm allows.
    Feasibility,
    /// A minimum-objective solution.
    Optimize,
    /// The exact number of solutions.
    Count,
    /// Up to `limit` distinct solutions.
    Enumerate { limit: u64 },
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Goal::Feasibility => "feasibility",
            Goal::Optimize => "optimize",
            Goal::Count => "count",
            Goal::Enumerate { .. } => "enumerate",
        })
    }
}

/// Work counters for one solve. `wall_time_secs` is measured; the rest are
/// exact counts. For table solvers `table_entries_built` is the number of
/// half- or quarter-assignment entries; for exhaustive search it is the
/// number of assignments scanned.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SolveStats {
    pub table_entries_built: u64,
    pub comparisons: u64,
    pub peak_live_entries: u64,
    pub match_blocks: u64,
    pub queue_pushes: u64,
    pub queue_pops: u64,
    pub early_exit: bool,
    pub wall_time_secs: f64,
}

/// Result of one solve. Any status other than `Infeasible` carries a
/// witness that re-evaluates to a zero residual (within tolerance for
/// tolerant runs); `Optimal` additionally carries the witness's objective.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: Status,
    pub witness: Option<Assignment>,
    pub objective: Option<Scalar>,
    pub solution_count: Option<u128>,
    /// Filled by enumeration goals only.
    pub solutions: Vec<Assignment>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn infeasible(stats: SolveStats) -> Self {
        SolveOutcome {
            status: Status::Infeasible,
            witness: None,
            objective: None,
            solution_count: None,
            solutions: Vec::new(),
            stats,
        }
    }
}
