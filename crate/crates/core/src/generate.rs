//! Seeded instance generators for testing and benchmarking.
//!
//! Every generator draws from a ChaCha12 stream seeded with a single
//! `u64`, so a `(family, parameters, seed)` triple pins the instance
//! byte-for-byte across platforms and runs. Each family documents its
//! draw order; changing any parameter changes the draw sequence, so
//! reproducibility is only promised for identical `GenSpec` values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance};
use crate::scalar::Scalar;

/// Name of the random stream every generator uses, recorded in generated
/// files so an instance can be re-derived later.
pub const RNG_ALGORITHM: &str = "chacha12-seed64";

/// Instance families the generator can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Independent uniform data. Draw order: `A` row-major (per cell one
    /// density draw, then one value draw from `-R..=R` if selected), then
    /// `b` entries from `-R..=R`, then the objective if requested.
    Random,
    /// Like `Random`, but feasible by construction: after `A`, a hidden
    /// assignment is drawn bit by bit and `b = A·x*`. Draw order: `A`,
    /// hidden bits, objective.
    Planted,
    /// A single constraint with positive weights. Draw order: weights
    /// from `1..=R`, then either a hidden assignment (planted target,
    /// `b = ` its weight) or a uniform target from `0..=sum(weights)`,
    /// then the objective.
    SubsetSum,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Random => "random",
            Family::Planted => "planted",
            Family::SubsetSum => "subset-sum",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Family::Random),
            "planted" => Ok(Family::Planted),
            "subset-sum" => Ok(Family::SubsetSum),
            other => Err(Error::Unsupported(format!(
                "unknown family {other:?}; expected random, planted, or subset-sum"
            ))),
        }
    }
}

/// Full description of one generated instance.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Coefficients are drawn from `-coeff_range..=coeff_range` (subset-sum
    /// weights from `1..=coeff_range`).
    pub coeff_range: i64,
    /// Probability that a matrix cell is drawn at all; skipped cells are 0.
    pub density: f64,
    pub with_objective: bool,
    /// Subset-sum only: take the target from a hidden assignment instead
    /// of drawing it uniformly.
    pub planted_target: bool,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, m: usize, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            m,
            seed,
            coeff_range: 5,
            density: 1.0,
            with_objective: false,
            planted_target: false,
        }
    }
}

/// A generated instance plus the hidden assignment, for families that
/// plant one.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub witness: Option<Assignment>,
}

fn validate(spec: &GenSpec) -> Result<()> {
    let mut violations = Vec::new();
    if spec.n == 0 {
        violations.push("n must be positive".to_string());
    }
    if spec.coeff_range < 1 {
        violations.push("coefficient range must be at least 1".to_string());
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        violations.push("density must lie in (0, 1]".to_string());
    }
    if spec.family == Family::SubsetSum && spec.m != 1 {
        violations.push("subset-sum instances have exactly one constraint".to_string());
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation { violations })
    }
}

fn draw_matrix(spec: &GenSpec, rng: &mut ChaCha12Rng) -> Vec<Vec<Scalar>> {
    let r = spec.coeff_range;
    (0..spec.m)
        .map(|_| {
            (0..spec.n)
                .map(|_| {
                    if rng.gen_bool(spec.density) {
                        Scalar::from_int(rng.gen_range(-r..=r))
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn draw_assignment(n: usize, rng: &mut ChaCha12Rng) -> Assignment {
    Assignment::new((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

fn draw_objective(spec: &GenSpec, rng: &mut ChaCha12Rng) -> Option<Vec<Scalar>> {
    let r = spec.coeff_range;
    spec.with_objective
        .then(|| (0..spec.n).map(|_| Scalar::from_int(rng.gen_range(-r..=r))).collect())
}

fn matrix_times(a: &[Vec<Scalar>], x: &Assignment) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (j, coeff) in row.iter().enumerate() {
                if x.bit(j) {
                    acc = &acc + coeff;
                }
            }
            acc
        })
        .collect()
}

/// Generates the instance described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    validate(spec)?;
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let r = spec.coeff_range;
    let (a, b, witness) = match spec.family {
        Family::Random => {
            let a = draw_matrix(spec, &mut rng);
            let b = (0..spec.m)
                .map(|_| Scalar::from_int(rng.gen_range(-r..=r)))
                .collect();
            (a, b, None)
        }
        Family::Planted => {
            let a = draw_matrix(spec, &mut rng);
            let hidden = draw_assignment(spec.n, &mut rng);
            let b = matrix_times(&a, &hidden);
            (a, b, Some(hidden))
        }
        Family::SubsetSum => {
            let weights: Vec<Scalar> =
                (0..spec.n).map(|_| Scalar::from_int(rng.gen_range(1..=r))).collect();
            let a = vec![weights];
            let (target, hidden) = if spec.planted_target {
                let hidden = draw_assignment(spec.n, &mut rng);
                (matrix_times(&a, &hidden).remove(0), Some(hidden))
            } else {
                let total: i64 = a[0]
                    .iter()
                    .map(|w| w.to_string().parse::<i64>().expect("integer weight"))
                    .sum();
                (Scalar::from_int(rng.gen_range(0..=total)), None)
            };
            (a, vec![target], hidden)
        }
    };
    let c = draw_objective(spec, &mut rng);
    let instance = Instance::new(spec.n, spec.m, a, b, c)?;
    Ok(Generated { instance, witness })
}
