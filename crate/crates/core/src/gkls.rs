//! GKLS evolution of the walker's density matrix over firing-pattern space.
//!
//! The master equation is
//!
//! ```text
//! dρ/dt = -iκ[H, ρ] - γ Σ_k (½ L_k†L_k ρ + ½ ρ L_k†L_k - L_k ρ L_k†)
//! ```
//!
//! with `H` the sink-isolated hypercube adjacency and `L_k = |j⟩⟨i|` the
//! directed jumps from [`crate::hypercube`]. For such jumps `L†L = |i⟩⟨i|` and
//! `LρL† = ρ_ii |j⟩⟨j|`, so the dissipator reduces to a diagonal damping of
//! rows/columns plus a population transfer and is applied without forming
//! any matrices.
//!
//! All times handled here (`t_max`, `dt`, sample times, mixing times) are in
//! units of `1/γ`; with `γ = 0` the unit is the bare time.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::classical::ProbabilityVector;
use crate::hypercube::{build_hamiltonian, build_jump_operators, HypercubeSpec, JumpOperator};
use crate::numerics::{hermitian_eigenvalues, tol, ComplexMatrix, NumericsError};

pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_SINK_THRESHOLD: f64 = 0.99;
pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_DT: f64 = 0.005;
pub const DEFAULT_SAMPLE_EVERY: f64 = 0.05;
pub const MAX_DT: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid walk parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: state is {state}x{state}, operators are {ops}x{ops}")]
    DimensionMismatch { state: usize, ops: usize },
    #[error(
        "integration diagnostics breached at t = {t}: trace drift {trace_drift:e}, \
         min eigenvalue {min_eig:e}; rerun with a smaller dt (current {dt})"
    )]
    Diagnostics {
        t: f64,
        dt: f64,
        trace_drift: f64,
        min_eig: f64,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Health numbers for a density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub trace_drift: f64,
    pub min_eig: f64,
    pub purity: f64,
    /// Max-entry norm of `ρ - ρ†`.
    pub hermitian_residual: f64,
    /// Largest off-diagonal modulus.
    pub max_coherence: f64,
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates a candidate state against the density-matrix tolerances.
    pub fn new(m: ComplexMatrix) -> Result<Self, WalkError> {
        if !m.is_square() {
            return Err(WalkError::InvalidState(format!(
                "matrix is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let rho = Self(m);
        let d = rho.diagnostics()?;
        if d.hermitian_residual > tol::HERMITICITY {
            return Err(WalkError::InvalidState(format!(
                "not Hermitian (residual {:e})",
                d.hermitian_residual
            )));
        }
        if d.trace_drift > tol::TRACE_DRIFT {
            return Err(WalkError::InvalidState(format!(
                "trace differs from 1 by {:e}",
                d.trace_drift
            )));
        }
        if d.min_eig < tol::POSITIVITY_FLOOR {
            return Err(WalkError::InvalidState(format!(
                "negative eigenvalue {:e}",
                d.min_eig
            )));
        }
        Ok(rho)
    }

    /// `|i⟩⟨i|`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    /// `|ψ⟩⟨ψ|` for a normalised state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self, WalkError> {
        let dim = psi.len();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn diagnostics(&self) -> Result<Diagnostics, WalkError> {
        diagnostics_of(&self.0)
    }
}

fn diagnostics_of(m: &ComplexMatrix) -> Result<Diagnostics, WalkError> {
    let hermitian_residual = m.hermitian_residual();
    let trace_drift = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let min_eig = if hermitian_residual <= tol::HERMITICITY {
        hermitian_eigenvalues(m)?.first().copied().unwrap_or(0.0)
    } else {
        f64::NEG_INFINITY
    };
    let n = m.rows();
    let mut max_coherence: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                max_coherence = max_coherence.max(m[(i, j)].norm());
            }
        }
    }
    Ok(Diagnostics {
        trace_drift,
        min_eig,
        purity: purity_of(m),
        hermitian_residual,
        max_coherence,
    })
}

fn purity_of(m: &ComplexMatrix) -> f64 {
    // tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
    m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    purity_of(&rho.0)
}

/// Diagonal of `ρ` in the firing-pattern basis.
pub fn populations(rho: &DensityMatrix) -> ProbabilityVector {
    populations_of(&rho.0)
}

fn populations_of(m: &ComplexMatrix) -> ProbabilityVector {
    let raw = m
        .diagonal()
        .into_iter()
        .map(|z| if z.re.abs() < tol::POPULATION_DUST { 0.0 } else { z.re })
        .collect();
    ProbabilityVector::from_raw(raw)
}

/// Coherent strength, dissipative strength and integration grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkParams {
    pub kappa: f64,
    pub gamma: f64,
    /// Horizon in units of `1/γ`.
    pub t_max: f64,
    /// RK4 step in units of `1/γ`.
    pub dt: f64,
    /// Sampling stride in units of `1/γ`.
    pub sample_every: f64,
}

impl Default for WalkParams {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            gamma: 1.0,
            t_max: DEFAULT_T_MAX,
            dt: DEFAULT_DT,
            sample_every: DEFAULT_SAMPLE_EVERY,
        }
    }
}

impl WalkParams {
    pub fn new(kappa: f64, gamma: f64) -> Self {
        Self {
            kappa,
            gamma,
            ..Self::default()
        }
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_sample_every(mut self, sample_every: f64) -> Self {
        self.sample_every = sample_every;
        self
    }

    pub fn validate(&self) -> Result<(), WalkError> {
        let bad = |msg: String| Err(WalkError::InvalidParams(msg));
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return bad(format!("kappa must be >= 0, got {}", self.kappa));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad(format!("gamma must be >= 0, got {}", self.gamma));
        }
        if self.kappa == 0.0 && self.gamma == 0.0 {
            return bad("kappa and gamma cannot both be zero".into());
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return bad(format!("t_max must be > 0, got {}", self.t_max));
        }
        if !(self.dt > 0.0 && self.dt <= MAX_DT) {
            return bad(format!("dt must lie in (0, {MAX_DT}], got {}", self.dt));
        }
        if !(self.sample_every.is_finite() && self.sample_every > 0.0) {
            return bad(format!("sample_every must be > 0, got {}", self.sample_every));
        }
        Ok(())
    }

    /// Length of one reported time unit in bare time.
    pub fn time_unit(&self) -> f64 {
        if self.gamma > 0.0 {
            1.0 / self.gamma
        } else {
            1.0
        }
    }
}

/// Right-hand side of the master equation, evaluated as written.
pub fn lindblad_rhs(
    rho: &ComplexMatrix,
    h: &ComplexMatrix,
    jumps: &[JumpOperator],
    kappa: f64,
    gamma: f64,
) -> Result<ComplexMatrix, WalkError> {
    let dim = rho.rows();
    if !rho.is_square() || h.shape() != (dim, dim) {
        return Err(WalkError::DimensionMismatch {
            state: dim,
            ops: h.rows(),
        });
    }
    if let Some(j) = jumps.iter().find(|j| j.from >= dim || j.to >= dim) {
        return Err(WalkError::DimensionMismatch {
            state: dim,
            ops: j.from.max(j.to) + 1,
        });
    }
    let commutator = &h.matmul(rho)? - &rho.matmul(h)?;
    let mut out = commutator.scale(Complex64::new(0.0, -kappa));
    add_dissipator(&mut out, rho, jumps, gamma);
    Ok(out)
}

/// `out += -γ Σ_k (½{L†L, ρ} - LρL†)` for `L = |to⟩⟨from|`.
fn add_dissipator(out: &mut ComplexMatrix, rho: &ComplexMatrix, jumps: &[JumpOperator], gamma: f64) {
    if gamma == 0.0 || jumps.is_empty() {
        return;
    }
    let dim = rho.rows();
    let mut out_degree = vec![0.0; dim];
    for j in jumps {
        out_degree[j.from] += 1.0;
    }
    for a in 0..dim {
        for b in 0..dim {
            let damping = 0.5 * (out_degree[a] + out_degree[b]);
            if damping != 0.0 {
                out[(a, b)] -= rho[(a, b)] * (gamma * damping);
            }
        }
    }
    for j in jumps {
        let feed = rho[(j.from, j.from)] * gamma;
        out[(j.to, j.to)] += feed;
    }
}

/// Precomputed generator with a sparse Hamiltonian, used by [`evolve`].
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    kappa: f64,
    gamma: f64,
    /// Non-zero `H_ij` per row.
    h_rows: Vec<Vec<(usize, f64)>>,
    out_degree: Vec<f64>,
    jumps: Vec<JumpOperator>,
}

impl Liouvillian {
    pub fn new(spec: &HypercubeSpec, kappa: f64, gamma: f64) -> Self {
        let h = build_hamiltonian(spec);
        let jumps = build_jump_operators(spec);
        Self::from_parts(&h, jumps, kappa, gamma)
    }

    /// `h` must be real symmetric.
    pub fn from_parts(h: &ComplexMatrix, jumps: Vec<JumpOperator>, kappa: f64, gamma: f64) -> Self {
        let dim = h.rows();
        let h_rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .filter(|&j| h[(i, j)].norm() != 0.0)
                    .map(|j| (j, h[(i, j)].re))
                    .collect()
            })
            .collect();
        let mut out_degree = vec![0.0; dim];
        for j in &jumps {
            out_degree[j.from] += 1.0;
        }
        Self {
            dim,
            kappa,
            gamma,
            h_rows,
            out_degree,
            jumps,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jumps(&self) -> &[JumpOperator] {
        &self.jumps
    }

    /// Writes `L(ρ)` into `out`.
    pub fn apply_into(&self, rho: &ComplexMatrix, out: &mut ComplexMatrix) {
        let n = self.dim;
        let minus_i_kappa = Complex64::new(0.0, -self.kappa);
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for a in 0..n {
            for b in 0..n {
                // (Hρ)_ab - (ρH)_ab with H real symmetric, so (ρH)_ab = Σ_k ρ_ak H_bk.
                let mut comm = Complex64::new(0.0, 0.0);
                for &(k, hv) in &self.h_rows[a] {
                    comm += r[k * n + b] * hv;
                }
                for &(k, hv) in &self.h_rows[b] {
                    comm -= r[a * n + k] * hv;
                }
                let damping = 0.5 * self.gamma * (self.out_degree[a] + self.out_degree[b]);
                o[a * n + b] = minus_i_kappa * comm - r[a * n + b] * damping;
            }
        }
        if self.gamma != 0.0 {
            for j in &self.jumps {
                o[j.to * n + j.to] += r[j.from * n + j.from] * self.gamma;
            }
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        self.apply_into(rho, &mut out);
        out
    }

    /// Dense `dim² × dim²` superoperator on row-major `vec(ρ)`.
    pub fn superoperator(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut s = ComplexMatrix::zeros(n * n, n * n);
        let mut basis = ComplexMatrix::zeros(n, n);
        let mut image = ComplexMatrix::zeros(n, n);
        for col in 0..n * n {
            basis.as_mut_slice()[col] = Complex64::new(1.0, 0.0);
            self.apply_into(&basis, &mut image);
            for (row, &v) in image.as_slice().iter().enumerate() {
                s[(row, col)] = v;
            }
            basis.as_mut_slice()[col] = Complex64::new(0.0, 0.0);
        }
        s
    }
}

/// RK4 state with preallocated stage buffers.
struct Rk4 {
    k1: ComplexMatrix,
    k2: ComplexMatrix,
    k3: ComplexMatrix,
    k4: ComplexMatrix,
    stage: ComplexMatrix,
}

impl Rk4 {
    fn new(dim: usize) -> Self {
        let z = ComplexMatrix::zeros(dim, dim);
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            stage: z,
        }
    }

    fn step(&mut self, gen: &Liouvillian, y: &mut ComplexMatrix, h: f64) {
        let half = 0.5 * h;
        gen.apply_into(y, &mut self.k1);
        Self::combine(&mut self.stage, y, &self.k1, half);
        gen.apply_into(&self.stage, &mut self.k2);
        Self::combine(&mut self.stage, y, &self.k2, half);
        gen.apply_into(&self.stage, &mut self.k3);
        Self::combine(&mut self.stage, y, &self.k3, h);
        gen.apply_into(&self.stage, &mut self.k4);
        let sixth = h / 6.0;
        for ((((yv, a), b), c), d) in y
            .as_mut_slice()
            .iter_mut()
            .zip(self.k1.as_slice())
            .zip(self.k2.as_slice())
            .zip(self.k3.as_slice())
            .zip(self.k4.as_slice())
        {
            *yv += (a + (b + c) * 2.0 + d) * sixth;
        }
    }

    fn combine(out: &mut ComplexMatrix, y: &ComplexMatrix, k: &ComplexMatrix, h: f64) {
        for ((o, &a), &b) in out.as_mut_slice().iter_mut().zip(y.as_slice()).zip(k.as_slice()) {
            *o = a + b * h;
        }
    }
}

/// Sampled populations and diagnostics of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Quron count; pattern labels are derived from it.
    pub n: usize,
    pub sinks: Vec<usize>,
    /// Sample times in units of `1/γ`.
    pub times: Vec<f64>,
    pub populations: Vec<ProbabilityVector>,
    pub diagnostics: Vec<Diagnostics>,
    pub final_state: DensityMatrix,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Population of vertex `v` at every sample.
    pub fn series(&self, v: usize) -> Vec<f64> {
        self.populations.iter().map(|p| p.as_slice()[v]).collect()
    }

    /// Total sink population at every sample.
    pub fn sink_population(&self) -> Vec<f64> {
        self.populations
            .iter()
            .map(|p| self.sinks.iter().map(|&s| p.as_slice()[s]).sum())
            .collect()
    }

    /// Index of the sample closest to time `t`.
    pub fn sample_at(&self, t: f64) -> usize {
        let mut best = 0;
        for (k, &tk) in self.times.iter().enumerate() {
            if (tk - t).abs() < (self.times[best] - t).abs() {
                best = k;
            }
        }
        best
    }
}

/// Integrates the walk from `rho0` to `params.t_max`.
pub fn evolve(rho0: &DensityMatrix, spec: &HypercubeSpec, params: &WalkParams) -> Result<Trajectory, WalkError> {
    params.validate()?;
    if rho0.dim() != spec.dim() {
        return Err(WalkError::DimensionMismatch {
            state: rho0.dim(),
            ops: spec.dim(),
        });
    }
    let gen = Liouvillian::new(spec, params.kappa, params.gamma);
    evolve_with(rho0, &gen, spec.n(), spec.sink_indices(), params)
}

/// As [`evolve`], with a prebuilt generator.
pub fn evolve_with(
    rho0: &DensityMatrix,
    gen: &Liouvillian,
    n: usize,
    sinks: Vec<usize>,
    params: &WalkParams,
) -> Result<Trajectory, WalkError> {
    params.validate()?;
    let steps = (params.t_max / params.dt).round().max(1.0) as usize;
    let stride = ((params.sample_every / params.dt).round() as usize).max(1);
    let h = params.dt * params.time_unit();

    let mut rho = rho0.matrix().clone();
    let mut rk = Rk4::new(gen.dim());
    let mut traj = Trajectory {
        n,
        sinks,
        times: Vec::with_capacity(steps / stride + 2),
        populations: Vec::new(),
        diagnostics: Vec::new(),
        final_state: rho0.clone(),
    };

    let record = |traj: &mut Trajectory, rho: &ComplexMatrix, step: usize| -> Result<(), WalkError> {
        let t = step as f64 * params.dt;
        let d = diagnostics_of(rho)?;
        if d.trace_drift > tol::INTEGRATION_TRACE_BREACH || d.min_eig < tol::INTEGRATION_POSITIVITY_BREACH {
            return Err(WalkError::Diagnostics {
                t,
                dt: params.dt,
                trace_drift: d.trace_drift,
                min_eig: d.min_eig,
            });
        }
        traj.times.push(t);
        traj.populations.push(populations_of(rho));
        traj.diagnostics.push(d);
        Ok(())
    };

    record(&mut traj, &rho, 0)?;
    for step in 1..=steps {
        rk.step(gen, &mut rho, h);
        if step % stride == 0 || step == steps {
            record(&mut traj, &rho, step)?;
        }
    }
    traj.final_state = DensityMatrix(rho);
    Ok(traj)
}

/// First sampled time after which populations stay within `epsilon` of the
/// final sample, or 0 when the final sink population is below
/// `sink_threshold` (the run did not retrieve a memory).
pub fn mixing_time(traj: &Trajectory, epsilon: f64, sink_threshold: f64) -> f64 {
    let Some(last) = traj.populations.last() else {
        return 0.0;
    };
    let sink_total: f64 = traj.sinks.iter().map(|&s| last.as_slice()[s]).sum();
    if sink_total < sink_threshold {
        return 0.0;
    }
    let mut first_settled = traj.len() - 1;
    for k in (0..traj.len()).rev() {
        if traj.populations[k].max_diff(last) < epsilon {
            first_settled = k;
        } else {
            break;
        }
    }
    traj.times[first_settled]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopfield::Pattern;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Dissipator built from explicit jump matrices and dense products.
    fn dense_rhs(rho: &ComplexMatrix, h: &ComplexMatrix, jumps: &[JumpOperator], kappa: f64, gamma: f64) -> ComplexMatrix {
        let dim = rho.rows();
        let mut out = (&(h * rho) - &(rho * h)).scale(Complex64::new(0.0, -kappa));
        for j in jumps {
            let l = j.to_matrix(dim);
            let ld = l.adjoint();
            let ldl = &ld * &l;
            let term = &(&(&ldl * rho).scale_real(0.5) + &(rho * &ldl).scale_real(0.5)) - &(&(&l * rho) * &ld);
            out = &out - &term.scale_real(gamma);
        }
        out
    }

    fn random_state(dim: usize, seed: u64) -> DensityMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        // ρ = A A† / tr(A A†)
        let data = (0..dim * dim).map(|_| Complex64::new(next(), next())).collect();
        let a = ComplexMatrix::from_vec(dim, dim, data).unwrap();
        let m = &a * &a.adjoint();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
    }

    #[test]
    fn zero_generators_give_zero() {
        let spec = HypercubeSpec::from_strs(&["101", "111"]).unwrap();
        let h = build_hamiltonian(&spec);
        let jumps = build_jump_operators(&spec);
        let rho = random_state(8, 3);
        let d = lindblad_rhs(rho.matrix(), &h, &jumps, 0.0, 0.0).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn commuting_state_is_stationary_without_dissipation() {
        // ρ diagonal in H's eigenbasis: take ρ = I/d, which commutes with anything.
        let spec = HypercubeSpec::from_strs(&["101", "111"]).unwrap();
        let h = build_hamiltonian(&spec);
        let rho = DensityMatrix::maximally_mixed(8);
        let d = lindblad_rhs(rho.matrix(), &h, &build_jump_operators(&spec), 1.0, 0.0).unwrap();
        assert!(d.max_abs() < 1e-15);
    }

    #[test]
    fn two_level_decay_derivative() {
        let h = ComplexMatrix::zeros(2, 2);
        let rho = DensityMatrix::basis(2, 0);
        let d = lindblad_rhs(rho.matrix(), &h, &[JumpOperator::new(0, 1)], 0.0, 1.0).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c(-1.0), c(1.0)]);
        assert_eq!(d, expected);
    }

    #[test]
    fn rhs_matches_dense_oracle_and_stays_hermitian() {
        let spec = HypercubeSpec::from_strs(&["1011", "1111"]).unwrap();
        let h = build_hamiltonian(&spec);
        let jumps = build_jump_operators(&spec);
        let gen = Liouvillian::new(&spec, 0.7, 1.3);
        for seed in 0..3 {
            let rho = random_state(16, seed);
            let got = lindblad_rhs(rho.matrix(), &h, &jumps, 0.7, 1.3).unwrap();
            let oracle = dense_rhs(rho.matrix(), &h, &jumps, 0.7, 1.3);
            assert!((&got - &oracle).max_abs() < 1e-13);
            assert!((&gen.apply(rho.matrix()) - &oracle).max_abs() < 1e-13);
            assert!(got.hermitian_residual() < 1e-12);
            assert!(got.trace().norm() < 1e-13);
        }
    }

    #[test]
    fn rhs_rejects_mismatched_shapes() {
        let rho = DensityMatrix::basis(4, 0);
        let h = ComplexMatrix::zeros(2, 2);
        assert!(lindblad_rhs(rho.matrix(), &h, &[], 1.0, 1.0).is_err());
        let h = ComplexMatrix::zeros(4, 4);
        assert!(lindblad_rhs(rho.matrix(), &h, &[JumpOperator::new(0, 7)], 1.0, 1.0).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.5);
        m[(1, 1)] = c(-0.5);
        assert!(DensityMatrix::new(m).is_err());
        let mut m = DensityMatrix::maximally_mixed(2).into_matrix();
        m[(0, 1)] = Complex64::new(0.0, 0.1);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::new(DensityMatrix::maximally_mixed(4).into_matrix()).is_ok());
    }

    #[test]
    fn populations_and_purity() {
        let p = populations(&DensityMatrix::basis(4, 2));
        assert_eq!(p.as_slice(), &[0.0, 0.0, 1.0, 0.0]);
        let mixed = DensityMatrix::maximally_mixed(8);
        assert!(populations(&mixed).as_slice().iter().all(|&x| (x - 0.125).abs() < 1e-15));
        assert!((purity(&mixed) - 0.125).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[c(s), c(s)]).unwrap();
        let pp = populations(&plus);
        assert!((pp.as_slice()[0] - 0.5).abs() < 1e-15);
        assert!((purity(&plus) - 1.0).abs() < 1e-15);
        assert_eq!(purity(&DensityMatrix::basis(4, 1)), 1.0);
    }

    #[test]
    fn params_validation() {
        assert!(WalkParams::new(1.0, 1.0).validate().is_ok());
        assert!(WalkParams::new(0.0, 0.0).validate().is_err());
        assert!(WalkParams::new(-1.0, 1.0).validate().is_err());
        assert!(WalkParams::new(1.0, 1.0).with_dt(0.02).validate().is_err());
        assert!(WalkParams::new(1.0, 1.0).with_t_max(0.0).validate().is_err());
        assert!(WalkParams::new(1.0, 0.0).validate().is_ok());
    }

    #[test]
    fn single_quron_decay_closed_form() {
        let spec = HypercubeSpec::from_strs(&["1"]).unwrap();
        let params = WalkParams::new(0.0, 1.0).with_t_max(5.0).with_sample_every(0.25);
        let traj = evolve(&DensityMatrix::basis(2, 0), &spec, &params).unwrap();
        for (t, p) in traj.times.iter().zip(&traj.populations) {
            assert!((p.as_slice()[1] - (1.0 - (-t).exp())).abs() < 1e-6);
        }
    }

    #[test]
    fn time_is_measured_in_inverse_gamma() {
        // Decay at rate γ reported in units of 1/γ looks identical for any γ.
        let spec = HypercubeSpec::from_strs(&["1"]).unwrap();
        let a = evolve(&DensityMatrix::basis(2, 0), &spec, &WalkParams::new(0.0, 0.2).with_t_max(3.0)).unwrap();
        let b = evolve(&DensityMatrix::basis(2, 0), &spec, &WalkParams::new(0.0, 2.0).with_t_max(3.0)).unwrap();
        assert_eq!(a.times, b.times);
        for (pa, pb) in a.populations.iter().zip(&b.populations) {
            assert!(pa.max_diff(pb) < 1e-14);
        }
    }

    #[test]
    fn coherent_walk_preserves_purity_and_never_feeds_sinks() {
        let spec = HypercubeSpec::from_strs(&["101", "111"]).unwrap();
        let params = WalkParams::new(1.0, 0.0).with_t_max(10.0);
        let traj = evolve(&DensityMatrix::basis(8, 0), &spec, &params).unwrap();
        for d in &traj.diagnostics {
            assert!((d.purity - 1.0).abs() < 1e-8);
        }
        assert!(traj.sink_population().iter().all(|&s| s == 0.0));
        assert_eq!(mixing_time(&traj, DEFAULT_EPSILON, DEFAULT_SINK_THRESHOLD), 0.0);
    }

    #[test]
    fn mixing_time_of_constant_trajectory_is_first_sample() {
        let spec = HypercubeSpec::from_strs(&["11"]).unwrap();
        // Start inside the sink: nothing moves.
        let params = WalkParams::new(1.0, 1.0).with_t_max(2.0);
        let traj = evolve(&DensityMatrix::basis(4, 3), &spec, &params).unwrap();
        assert_eq!(mixing_time(&traj, DEFAULT_EPSILON, DEFAULT_SINK_THRESHOLD), 0.0);
        assert_eq!(traj.times[0], 0.0);
        // A non-zero first sample time is reported as such.
        let mut shifted = traj.clone();
        shifted.times.iter_mut().for_each(|t| *t += 1.0);
        assert_eq!(mixing_time(&shifted, DEFAULT_EPSILON, DEFAULT_SINK_THRESHOLD), 1.0);
    }

    #[test]
    fn evolve_matches_superoperator_exponential() {
        let spec = HypercubeSpec::from_strs(&["101", "111"]).unwrap();
        let gen = Liouvillian::new(&spec, 1.0, 1.0);
        let params = WalkParams::new(1.0, 1.0).with_t_max(2.0).with_sample_every(0.5);
        let traj = evolve(&DensityMatrix::basis(8, 0), &spec, &params).unwrap();
        let prop = crate::numerics::expm(&gen.superoperator().scale_real(2.0)).unwrap();
        let v0 = DensityMatrix::basis(8, 0).into_matrix();
        let v = prop.apply(v0.as_slice()).unwrap();
        let last = traj.populations.last().unwrap();
        for i in 0..8 {
            assert!((v[i * 8 + i].re - last.as_slice()[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn evolve_rejects_wrong_dimension() {
        let spec = HypercubeSpec::new(2, vec![Pattern::from_index(3, 2).unwrap()]).unwrap();
        assert!(matches!(
            evolve(&DensityMatrix::basis(8, 0), &spec, &WalkParams::default()),
            Err(WalkError::DimensionMismatch { .. })
        ));
    }
}
