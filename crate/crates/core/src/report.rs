//! Self-contained solve reports, renderable as text or serialized as JSON.
//!
//! A report carries everything needed to interpret a result without the
//! instance file at hand: the outcome, the exact objective alongside a
//! float approximation, the verified residual of the returned witness,
//! what was asked of which algorithm, and the work counters.

use serde::Serialize;

use crate::instance::{Goal, Instance, SolveOutcome, SolveStats, Status};
use crate::scalar::{render_scalar, CompareMode};
use crate::Algorithm;

/// Shape of the instance a report refers to.
#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub n: usize,
    pub m: usize,
    pub has_objective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultReport {
    pub status: Status,
    /// Exact objective value in canonical scalar notation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    /// The objective as a float, for quick reading; may round.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective_approx: Option<f64>,
    /// Witness assignment as a bit string, first variable first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_count: Option<u128>,
    /// Enumerated solutions as bit strings.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<String>,
    pub algorithm: String,
    pub goal: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub input: InputSummary,
    /// Largest absolute residual row of the witness, re-evaluated exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_residual: Option<String>,
    pub stats: SolveStats,
    pub version: String,
}

impl ResultReport {
    pub fn new(
        instance: &Instance,
        outcome: &SolveOutcome,
        algorithm: Algorithm,
        goal: Goal,
        mode: CompareMode,
    ) -> Self {
        let max_abs_residual = outcome.witness.as_ref().map(|x| {
            let (residual, _) = instance.evaluate(x);
            render_scalar(&residual.max_abs())
        });
        ResultReport {
            status: outcome.status,
            objective: outcome.objective.as_ref().map(render_scalar),
            objective_approx: outcome.objective.as_ref().map(|v| v.to_f64()),
            witness: outcome.witness.as_ref().map(|x| x.to_bit_string()),
            solution_count: outcome.solution_count,
            solutions: outcome.solutions.iter().map(|x| x.to_bit_string()).collect(),
            algorithm: algorithm.to_string(),
            goal: goal.to_string(),
            mode: if mode.is_exact() { "exact" } else { "float" }.to_string(),
            tolerance: mode.tolerance(),
            input: InputSummary {
                n: instance.n(),
                m: instance.m(),
                has_objective: instance.objective().is_some(),
            },
            max_abs_residual,
            stats: outcome.stats.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Plain `key: value` lines for terminal output.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v);
            out.push('\n');
        };
        line("status", self.status.to_string());
        if let Some(objective) = &self.objective {
            line("objective", objective.clone());
            if let Some(approx) = self.objective_approx {
                if objective.contains('/') {
                    line("objective_approx", format!("{approx}"));
                }
            }
        }
        if let Some(witness) = &self.witness {
            line("witness", witness.clone());
        }
        if let Some(count) = self.solution_count {
            line("count", count.to_string());
        }
        for solution in &self.solutions {
            line("solution", solution.clone());
        }
        if let Some(residual) = &self.max_abs_residual {
            line("max_abs_residual", residual.clone());
        }
        line(
            "run",
            format!("algorithm={} goal={} mode={}", self.algorithm, self.goal, self.mode),
        );
        if let Some(tolerance) = self.tolerance {
            line("tolerance", format!("{tolerance}"));
        }
        line(
            "work",
            format!(
                "entries={} comparisons={} peak={} blocks={} pushes={} pops={}{}",
                self.stats.table_entries_built,
                self.stats.comparisons,
                self.stats.peak_live_entries,
                self.stats.match_blocks,
                self.stats.queue_pushes,
                self.stats.queue_pops,
                if self.stats.early_exit { " early-exit" } else { "" },
            ),
        );
        line("time", format!("{:.6}s", self.stats.wall_time_secs));
        out
    }
}
