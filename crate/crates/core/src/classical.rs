//! Classical Markov chains on weighted graphs.
//!
//! The discrete chain uses a row-stochastic matrix `M` (`m_ij` is the weight of
//! the edge `i -> j`) and updates `π'_j = Σ_i m_ij π_i`. The continuous-time
//! chain uses a generator `Q` with non-negative off-diagonal rates and zero
//! column sums, so `dπ/dt = Q π` conserves probability; `Q = Mᵀ - I` links the
//! two.

use num_complex::Complex64;
use thiserror::Error;

use crate::hypercube::JumpOperator;
use crate::numerics::{expm, tol, ComplexMatrix};

/// Iteration cap for [`stationary`].
pub const POWER_ITERATION_CAP: usize = 1_000_000;
pub const DEFAULT_STATIONARY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: f64 },
    #[error("column {col} sums to {sum}, not 0")]
    ColumnSum { col: usize, sum: f64 },
    #[error("entry ({row}, {col}) = {value} is not allowed here")]
    BadEntry { row: usize, col: usize, value: f64 },
    #[error("probability vector sums to {0}, not 1")]
    NotNormalised(f64),
    #[error("power iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("time must be finite and non-negative, got {0}")]
    BadTime(f64),
}

/// Row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    n: usize,
    m: Vec<f64>,
}

impl StochasticMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, ClassicalError> {
        let n = rows.len();
        let mut m = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ClassicalError::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&x) {
                    return Err(ClassicalError::BadEntry {
                        row: i,
                        col: j,
                        value: x,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol::STOCHASTIC {
                return Err(ClassicalError::RowSum { row: i, sum });
            }
            m.extend_from_slice(row);
        }
        Ok(Self { n, m })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = 1.0;
        }
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.n + j]
    }

    /// Continuous-time generator `Mᵀ - I`.
    pub fn generator(&self) -> RateMatrix {
        let n = self.n;
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                q[j * n + i] = self.get(i, j);
            }
            q[i * n + i] -= 1.0;
        }
        RateMatrix { n, q }
    }
}

/// A point on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self, ClassicalError> {
        for (i, &x) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Err(ClassicalError::BadEntry {
                    row: i,
                    col: 0,
                    value: x,
                });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::STOCHASTIC {
            return Err(ClassicalError::NotNormalised(sum));
        }
        Ok(Self(p))
    }

    /// Wraps values already known to be a distribution up to rounding; tiny
    /// negative dust is clamped and the sum renormalised.
    pub(crate) fn from_raw(mut p: Vec<f64>) -> Self {
        for x in p.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = p.iter().sum();
        if sum > 0.0 {
            for x in p.iter_mut() {
                *x /= sum;
            }
        }
        Self(p)
    }

    pub fn delta(n: usize, i: usize) -> Self {
        let mut p = vec![0.0; n];
        p[i] = 1.0;
        Self(p)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn max_diff(&self, other: &ProbabilityVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Generator of a continuous-time Markov chain acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    n: usize,
    q: Vec<f64>,
}

impl RateMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, ClassicalError> {
        let n = rows.len();
        let mut q = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(ClassicalError::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            q.extend_from_slice(row);
        }
        let out = Self { n, q };
        out.validate()?;
        Ok(out)
    }

    /// Generator for transitions `from -> to` at a common `rate` per jump.
    pub fn from_jumps(n: usize, jumps: &[JumpOperator], rate: f64) -> Result<Self, ClassicalError> {
        let mut q = vec![0.0; n * n];
        for jump in jumps {
            if jump.from >= n || jump.to >= n {
                return Err(ClassicalError::DimensionMismatch {
                    expected: n,
                    got: jump.from.max(jump.to) + 1,
                });
            }
            q[jump.to * n + jump.from] += rate;
            q[jump.from * n + jump.from] -= rate;
        }
        let out = Self { n, q };
        out.validate()?;
        Ok(out)
    }

    fn validate(&self) -> Result<(), ClassicalError> {
        let n = self.n;
        let scale = self.q.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        for j in 0..n {
            let mut sum = 0.0;
            for i in 0..n {
                let x = self.q[i * n + j];
                if !x.is_finite() || (i != j && x < 0.0) {
                    return Err(ClassicalError::BadEntry {
                        row: i,
                        col: j,
                        value: x,
                    });
                }
                sum += x;
            }
            if sum.abs() > tol::STOCHASTIC * scale * n as f64 {
                return Err(ClassicalError::ColumnSum { col: j, sum });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.n + j]
    }

    fn to_complex(&self) -> ComplexMatrix {
        let data = self.q.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        ComplexMatrix::from_vec(self.n, self.n, data).expect("square by construction")
    }
}

/// One step of the discrete chain.
pub fn step(m: &StochasticMatrix, pi: &ProbabilityVector) -> Result<ProbabilityVector, ClassicalError> {
    if m.n() != pi.len() {
        return Err(ClassicalError::DimensionMismatch {
            expected: m.n(),
            got: pi.len(),
        });
    }
    Ok(ProbabilityVector(step_raw(m, pi.as_slice())))
}

fn step_raw(m: &StochasticMatrix, pi: &[f64]) -> Vec<f64> {
    let n = m.n();
    let mut out = vec![0.0; n];
    for (i, &p) in pi.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += m.get(i, j) * p;
        }
    }
    out
}

/// Outcome of the stationary-distribution search.
#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    pub distribution: ProbabilityVector,
    pub iterations: usize,
    /// False when a second power iteration from a point mass fails to reach
    /// the same distribution (reducible or periodic chains).
    pub unique: bool,
}

/// Stationary distribution by power iteration from the uniform distribution.
pub fn stationary(m: &StochasticMatrix, tol: f64) -> Result<Stationary, ClassicalError> {
    let n = m.n();
    let (pi, iterations) = power_iterate(m, ProbabilityVector::uniform(n).0, tol, POWER_ITERATION_CAP)?;
    let unique = match power_iterate(m, ProbabilityVector::delta(n, 0).0, tol, POWER_ITERATION_CAP) {
        Ok((other, _)) => other
            .iter()
            .zip(&pi)
            .all(|(a, b)| (a - b).abs() < 10.0 * tol.max(1e-12)),
        Err(_) => false,
    };
    Ok(Stationary {
        distribution: ProbabilityVector::from_raw(pi),
        iterations,
        unique,
    })
}

fn power_iterate(
    m: &StochasticMatrix,
    mut pi: Vec<f64>,
    tol: f64,
    cap: usize,
) -> Result<(Vec<f64>, usize), ClassicalError> {
    let mut residual = f64::INFINITY;
    for k in 0..cap {
        let next = step_raw(m, &pi);
        residual = next
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual < tol {
            return Ok((pi, k));
        }
        pi = next;
    }
    Err(ClassicalError::NonConvergence {
        iterations: cap,
        residual,
    })
}

/// `exp(Q t) π₀` with normalisation drift removed.
pub fn ctmc_evolve(q: &RateMatrix, pi0: &ProbabilityVector, t: f64) -> Result<ProbabilityVector, ClassicalError> {
    if q.n() != pi0.len() {
        return Err(ClassicalError::DimensionMismatch {
            expected: q.n(),
            got: pi0.len(),
        });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(ClassicalError::BadTime(t));
    }
    if t == 0.0 {
        return Ok(pi0.clone());
    }
    let propagator = expm(&q.to_complex().scale_real(t)).expect("square generator");
    let v: Vec<Complex64> = pi0.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let out = propagator.apply(&v).expect("matching dimension");
    Ok(ProbabilityVector::from_raw(out.iter().map(|z| z.re).collect()))
}
