//! Binary Hopfield network: asynchronous threshold dynamics, the Ising-type
//! energy, and Hebbian storage of firing patterns.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfieldError {
    #[error("pattern must contain at least one bit")]
    EmptyPattern,
    #[error("invalid character {0:?} in bit string (expected '0' or '1')")]
    InvalidBit(char),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("neuron index {index} out of range for {n} neurons")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("weight matrix invalid: {0}")]
    InvalidWeights(String),
    #[error("threshold {index} is not finite")]
    NonFiniteThreshold { index: usize },
    #[error("cannot store an empty list of patterns")]
    NoPatterns,
}

/// A firing pattern `(x_1, …, x_N)`; neuron 1 is the leftmost character of
/// the bit-string form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    bits: Vec<bool>,
}

impl Pattern {
    pub fn new(bits: Vec<bool>) -> Result<Self, HopfieldError> {
        if bits.is_empty() {
            return Err(HopfieldError::EmptyPattern);
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Result<Self, HopfieldError> {
        Self::new(vec![false; n])
    }

    /// Pattern of length `n` whose bit string is the binary form of `index`.
    pub fn from_index(index: usize, n: usize) -> Result<Self, HopfieldError> {
        if n == 0 {
            return Err(HopfieldError::EmptyPattern);
        }
        if n < usize::BITS as usize && index >> n != 0 {
            return Err(HopfieldError::IndexOutOfRange { index, n: 1 << n });
        }
        Ok(Self {
            bits: (0..n).map(|k| (index >> (n - 1 - k)) & 1 == 1).collect(),
        })
    }

    /// Basis index with neuron 1 as the most significant bit.
    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    /// Activity `x_i` as 0.0 / 1.0.
    pub fn value(&self, i: usize) -> f64 {
        if self.bits[i] {
            1.0
        } else {
            0.0
        }
    }

    pub fn flipped(&self, i: usize) -> Pattern {
        let mut p = self.clone();
        p.bits[i] = !p.bits[i];
        p
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl FromStr for Pattern {
    type Err = HopfieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(HopfieldError::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Pattern::new(bits)
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of positions at which two patterns differ.
pub fn hamming(a: &Pattern, b: &Pattern) -> Result<usize, HopfieldError> {
    if a.len() != b.len() {
        return Err(HopfieldError::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count())
}

/// Symmetric, zero-diagonal connection strengths with entries in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(n: usize, w: Vec<f64>) -> Result<Self, HopfieldError> {
        if w.len() != n * n {
            return Err(HopfieldError::LengthMismatch {
                expected: n * n,
                got: w.len(),
            });
        }
        for i in 0..n {
            if w[i * n + i] != 0.0 {
                return Err(HopfieldError::InvalidWeights(format!("w[{i}][{i}] must be zero")));
            }
            for j in 0..n {
                let x = w[i * n + j];
                if !x.is_finite() || x.abs() > 1.0 {
                    return Err(HopfieldError::InvalidWeights(format!(
                        "w[{i}][{j}] = {x} outside [-1, 1]"
                    )));
                }
                if x != w[j * n + i] {
                    return Err(HopfieldError::InvalidWeights(format!(
                        "w[{i}][{j}] != w[{j}][{i}]"
                    )));
                }
            }
        }
        Ok(Self { n, w })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, HopfieldError> {
        let n = rows.len();
        let mut w = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(HopfieldError::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            w.extend_from_slice(row);
        }
        Self::new(n, w)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            w: vec![0.0; n * n],
        }
    }

    /// Builds weights from a list of `(i, j, w_ij)` couplings, mirrored to
    /// `w_ji`.
    pub fn from_couplings(n: usize, couplings: &[(usize, usize, f64)]) -> Result<Self, HopfieldError> {
        let mut w = vec![0.0; n * n];
        for &(i, j, x) in couplings {
            if i >= n || j >= n {
                return Err(HopfieldError::IndexOutOfRange { index: i.max(j), n });
            }
            w[i * n + j] = x;
            w[j * n + i] = x;
        }
        Self::new(n, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }
}

/// Per-neuron firing thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds(Vec<f64>);

impl Thresholds {
    pub fn new(theta: Vec<f64>) -> Result<Self, HopfieldError> {
        if let Some(index) = theta.iter().position(|t| !t.is_finite()) {
            return Err(HopfieldError::NonFiniteThreshold { index });
        }
        Ok(Self(theta))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// Direction of the threshold comparison in the update rule.
///
/// `Standard` fires when the input reaches the threshold. `AsPrinted` fires
/// when the input is at or below it, the inverted inequality some texts print.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdSense {
    #[default]
    Standard,
    AsPrinted,
}

/// Order in which neurons are visited during a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOrder {
    Cyclic,
    /// Fresh permutation every sweep, drawn from a ChaCha8 stream seeded once.
    Random { seed: u64 },
}

fn check_dims(state: &Pattern, w: &WeightMatrix, theta: &Thresholds) -> Result<(), HopfieldError> {
    for got in [w.n(), theta.len()] {
        if got != state.len() {
            return Err(HopfieldError::LengthMismatch {
                expected: state.len(),
                got,
            });
        }
    }
    Ok(())
}

fn local_field(state: &Pattern, w: &WeightMatrix, i: usize) -> f64 {
    (0..state.len())
        .filter(|&j| j != i)
        .map(|j| w.get(j, i) * state.value(j))
        .sum()
}

/// New value of neuron `i` given the rest of the network.
pub fn update_neuron(
    state: &Pattern,
    w: &WeightMatrix,
    theta: &Thresholds,
    i: usize,
    sense: ThresholdSense,
) -> Result<bool, HopfieldError> {
    check_dims(state, w, theta)?;
    if i >= state.len() {
        return Err(HopfieldError::IndexOutOfRange {
            index: i,
            n: state.len(),
        });
    }
    let field = local_field(state, w, i);
    Ok(match sense {
        ThresholdSense::Standard => field >= theta.get(i),
        ThresholdSense::AsPrinted => field <= theta.get(i),
    })
}

/// `E = -½ Σ_ij w_ij x_i x_j + Σ_i θ_i x_i`.
pub fn energy(state: &Pattern, w: &WeightMatrix, theta: &Thresholds) -> Result<f64, HopfieldError> {
    check_dims(state, w, theta)?;
    let n = state.len();
    let mut pair = 0.0;
    for i in 0..n {
        for j in 0..n {
            pair += w.get(i, j) * state.value(i) * state.value(j);
        }
    }
    let bias: f64 = (0..n).map(|i| theta.get(i) * state.value(i)).sum();
    Ok(-0.5 * pair + bias)
}

/// Result of an asynchronous run.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfieldTrajectory {
    /// Initial state followed by the state after every neuron flip.
    pub states: Vec<Pattern>,
    /// Energy of each entry in `states`.
    pub energies: Vec<f64>,
    /// Sweeps performed, including the final quiet sweep when converged.
    pub sweeps: usize,
    pub converged: bool,
}

impl HopfieldTrajectory {
    pub fn final_state(&self) -> &Pattern {
        self.states.last().expect("trajectory always holds the initial state")
    }

    /// Number of neuron flips performed.
    pub fn changes(&self) -> usize {
        self.states.len() - 1
    }
}

/// Asynchronous single-neuron dynamics until a full sweep leaves the state
/// unchanged or `max_sweeps` sweeps have run.
pub fn run_async(
    state: &Pattern,
    w: &WeightMatrix,
    theta: &Thresholds,
    order: UpdateOrder,
    sense: ThresholdSense,
    max_sweeps: usize,
) -> Result<HopfieldTrajectory, HopfieldError> {
    check_dims(state, w, theta)?;
    let n = state.len();
    let mut rng = match order {
        UpdateOrder::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        UpdateOrder::Cyclic => None,
    };
    let mut schedule: Vec<usize> = (0..n).collect();

    let mut current = state.clone();
    let mut states = vec![current.clone()];
    let mut energies = vec![energy(&current, w, theta)?];
    let mut sweeps = 0;
    let mut converged = false;

    while sweeps < max_sweeps {
        sweeps += 1;
        if let Some(rng) = rng.as_mut() {
            schedule.shuffle(rng);
        }
        let mut changed = false;
        for &i in &schedule {
            let next = update_neuron(&current, w, theta, i, sense)?;
            if next != current.bit(i) {
                current.set(i, next);
                states.push(current.clone());
                energies.push(energy(&current, w, theta)?);
                changed = true;
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }

    Ok(HopfieldTrajectory {
        states,
        energies,
        sweeps,
        converged,
    })
}

/// Hebb rule `w_ij = (1/P) Σ_μ (2x_i^μ - 1)(2x_j^μ - 1)`, zero diagonal,
/// clamped to `[-1, 1]`.
pub fn hebbian_store(patterns: &[Pattern]) -> Result<WeightMatrix, HopfieldError> {
    let first = patterns.first().ok_or(HopfieldError::NoPatterns)?;
    let n = first.len();
    for p in patterns {
        if p.len() != n {
            return Err(HopfieldError::LengthMismatch {
                expected: n,
                got: p.len(),
            });
        }
    }
    let spin = |p: &Pattern, i: usize| 2.0 * p.value(i) - 1.0;
    let count = patterns.len() as f64;
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let sum: f64 = patterns.iter().map(|p| spin(p, i) * spin(p, j)).sum();
            let x = (sum / count).clamp(-1.0, 1.0);
            w[i * n + j] = x;
            w[j * n + i] = x;
        }
    }
    WeightMatrix::new(n, w)
}
