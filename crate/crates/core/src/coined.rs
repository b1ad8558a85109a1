//! Coin algebra for discrete coined walks.
//!
//! Holds the Hadamard, biased-Hadamard and neuron coins, the unitarity check
//! that separates them, a reference Hadamard walk on the line and the
//! time-averaged position distribution. The neuron coin, built from the
//! firing probability of a neuron, is not unitary except at `p = 1/2`; the
//! line walk refuses such coins instead of renormalising them.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::hopfield::{Pattern, WeightMatrix};
use crate::numerics::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoinError {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("firing probability needs at least two neurons, got {0}")]
    TooFewNeurons(usize),
    #[error("neuron index {index} out of range for {n} neurons")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pattern length {got} does not match {expected} neurons")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coin is not unitary: max |C^H C - I| = {}", .0.deviation)]
    NonUnitary(UnitarityReport),
    #[error("amplitudes not normalised: |α|² + |β|² = {0}")]
    NotNormalised(f64),
    #[error("walker reached the edge of its position range ±{0}")]
    RangeExhausted(usize),
    #[error("averaging window must be positive and at most the history length ({available})")]
    BadWindow { available: usize },
}

/// 2×2 coin acting on `{|0⟩, |1⟩}`; column `k` is the image of `|k⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator(pub [[Complex64; 2]; 2]);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl CoinOperator {
    pub fn identity() -> Self {
        Self([[re(1.0), re(0.0)], [re(0.0), re(1.0)]])
    }

    /// Coin from the images of the two basis states.
    pub fn from_columns(image0: [f64; 2], image1: [f64; 2]) -> Self {
        Self([
            [re(image0[0]), re(image1[0])],
            [re(image0[1]), re(image1[1])],
        ])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn apply(&self, amp: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.0[0][0] * amp[0] + self.0[0][1] * amp[1],
            self.0[1][0] * amp[0] + self.0[1][1] * amp[1],
        ]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn compose(&self, other: &CoinOperator) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[re(0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }
}

/// Standard Hadamard coin `[[1, 1], [1, -1]] / √2`.
pub fn hadamard_coin() -> CoinOperator {
    CoinOperator::from_columns([FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
}

fn check_probability(p: f64) -> Result<(), CoinError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(CoinError::ProbabilityOutOfRange(p))
    }
}

/// Biased Hadamard coin: `|0⟩ → √p|0⟩ + √(1-p)|1⟩`, `|1⟩ → √(1-p)|0⟩ - √p|1⟩`.
pub fn biased_coin(p: f64) -> Result<CoinOperator, CoinError> {
    check_probability(p)?;
    let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
    Ok(CoinOperator::from_columns([a, b], [b, -a]))
}

/// Neuron coin: `|0⟩ → √(1-p)|0⟩ + √p|1⟩`, `|1⟩ → √(1-p)|0⟩ - √p|1⟩`.
///
/// Both images share the same `|0⟩` amplitude, so the columns are orthogonal
/// only when `1 - 2p = 0`.
pub fn neuron_coin(p: f64) -> Result<CoinOperator, CoinError> {
    check_probability(p)?;
    let (a, b) = ((1.0 - p).sqrt(), p.sqrt());
    Ok(CoinOperator::from_columns([a, b], [a, -b]))
}

/// Normalised input signal `(Σ_j w_ij x_j + (N-1)) / (2(N-1))`.
pub fn firing_probability(w: &WeightMatrix, state: &Pattern, i: usize) -> Result<f64, CoinError> {
    let n = w.n();
    if n < 2 {
        return Err(CoinError::TooFewNeurons(n));
    }
    if state.len() != n {
        return Err(CoinError::LengthMismatch {
            expected: n,
            got: state.len(),
        });
    }
    if i >= n {
        return Err(CoinError::IndexOutOfRange { index: i, n });
    }
    let signal: f64 = (0..n).map(|j| w.get(i, j) * state.value(j)).sum();
    let range = (n - 1) as f64;
    Ok(((signal + range) / (2.0 * range)).clamp(0.0, 1.0))
}

/// Outcome of a unitarity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityReport {
    pub unitary: bool,
    /// Max-entry norm of `C^H C - I`.
    pub deviation: f64,
}

pub fn is_unitary(c: &CoinOperator, tol: f64) -> UnitarityReport {
    let g = c.adjoint().compose(c);
    let mut deviation: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let target = if i == j { re(1.0) } else { re(0.0) };
            deviation = deviation.max((g.0[i][j] - target).norm());
        }
    }
    UnitarityReport {
        unitary: deviation < tol,
        deviation,
    }
}

/// Single-quron superposition `α|0⟩ + β|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuronAmplitudes {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl QuronAmplitudes {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self, CoinError> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > tol::HERMITICITY {
            return Err(CoinError::NotNormalised(norm));
        }
        Ok(Self { alpha, beta })
    }

    pub fn basis(firing: bool) -> Self {
        if firing {
            Self { alpha: re(0.0), beta: re(1.0) }
        } else {
            Self { alpha: re(1.0), beta: re(0.0) }
        }
    }

    /// Applies a coin; nonunitary coins are rejected.
    pub fn evolve(&self, c: &CoinOperator) -> Result<Self, CoinError> {
        let report = is_unitary(c, tol::UNITARITY);
        if !report.unitary {
            return Err(CoinError::NonUnitary(report));
        }
        let [alpha, beta] = c.apply([self.alpha, self.beta]);
        Ok(Self { alpha, beta })
    }

    pub fn firing_probability(&self) -> f64 {
        self.beta.norm_sqr()
    }
}

/// Walker on the integer line with positions `-range..=range` and a two-state
/// coin at each position.
#[derive(Debug, Clone, PartialEq)]
pub struct LineWalkerState {
    range: usize,
    amps: Vec<[Complex64; 2]>,
}

impl LineWalkerState {
    /// Walker localised at the origin with the given coin state.
    pub fn at_origin(range: usize, coin: [Complex64; 2]) -> Result<Self, CoinError> {
        let norm = coin[0].norm_sqr() + coin[1].norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(CoinError::NotNormalised(norm));
        }
        let mut amps = vec![[re(0.0); 2]; 2 * range + 1];
        amps[range] = coin;
        Ok(Self { range, amps })
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let r = self.range as i64;
        -r..=r
    }

    pub fn amplitude(&self, position: i64) -> [Complex64; 2] {
        let idx = position + self.range as i64;
        if idx < 0 || idx as usize >= self.amps.len() {
            return [re(0.0); 2];
        }
        self.amps[idx as usize]
    }

    /// Position distribution over `-range..=range`.
    pub fn distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).collect()
    }

    pub fn total_norm(&self) -> f64 {
        self.distribution().iter().sum()
    }

    pub fn mean_position(&self) -> f64 {
        self.positions().zip(self.distribution()).map(|(x, p)| x as f64 * p).sum()
    }
}

/// Coin on every site, then coin-`|0⟩` amplitude moves left and coin-`|1⟩`
/// amplitude moves right.
pub fn line_walk_step(s: &LineWalkerState, c: &CoinOperator) -> Result<LineWalkerState, CoinError> {
    let report = is_unitary(c, tol::UNITARITY);
    if !report.unitary {
        return Err(CoinError::NonUnitary(report));
    }
    let len = s.amps.len();
    let mut next = vec![[re(0.0); 2]; len];
    for (k, amp) in s.amps.iter().enumerate() {
        if amp[0] == re(0.0) && amp[1] == re(0.0) {
            continue;
        }
        if k == 0 || k == len - 1 {
            return Err(CoinError::RangeExhausted(s.range));
        }
        let [left, right] = c.apply(*amp);
        next[k - 1][0] += left;
        next[k + 1][1] += right;
    }
    Ok(LineWalkerState {
        range: s.range,
        amps: next,
    })
}

/// `P̄_T(x) = (1/T) Σ_{t<T} P_t(x)` over the first `window` entries.
pub fn time_averaged_distribution(history: &[Vec<f64>], window: usize) -> Result<Vec<f64>, CoinError> {
    if window == 0 || window > history.len() {
        return Err(CoinError::BadWindow {
            available: history.len(),
        });
    }
    let len = history[0].len();
    let mut avg = vec![0.0; len];
    for dist in &history[..window] {
        if dist.len() != len {
            return Err(CoinError::LengthMismatch {
                expected: len,
                got: dist.len(),
            });
        }
        for (a, &p) in avg.iter_mut().zip(dist) {
            *a += p;
        }
    }
    let scale = 1.0 / window as f64;
    avg.iter_mut().for_each(|a| *a *= scale);
    Ok(avg)
}
