//! Commands behind the `qwalk` CLI.
//!
//! Every command is a pure function from a validated config to in-memory
//! results plus their CSV (and optional SVG) rendering; the binary writes the
//! files once all work is done.

pub mod config;
pub mod output;
pub mod svg;

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::classical::{ctmc_evolve, ProbabilityVector, RateMatrix};
use crate::coined::{biased_coin, is_unitary, neuron_coin, CoinError};
use crate::gkls::{evolve, mixing_time, Trajectory, WalkError, WalkParams};
use crate::hopfield::{hebbian_store, run_async, HopfieldError, Pattern, Thresholds, UpdateOrder};
use crate::hypercube::build_jump_operators;
use crate::numerics::tol;

pub use config::{OrderKind, ScenarioConfig, SweepGrid};
use output::{fmt_real, populations_csv, trajectory_csv};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Hopfield(#[from] HopfieldError),
    #[error(transparent)]
    Coin(#[from] CoinError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    /// 2 for configuration problems, 3 for numerical diagnostics, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config { .. } => 2,
            ExperimentError::Walk(WalkError::InvalidParams(_) | WalkError::InvalidState(_)) => 2,
            ExperimentError::Walk(_) => 3,
            ExperimentError::Hopfield(_) | ExperimentError::Coin(_) => 2,
            ExperimentError::Io(_) => 1,
        }
    }
}

pub struct Simulation {
    pub trajectory: Trajectory,
    pub csv: String,
    pub svg: Option<String>,
}

/// Integrates one scenario and renders its trajectory.
pub fn run_simulate(cfg: &ScenarioConfig, with_svg: bool) -> Result<Simulation, ExperimentError> {
    let spec = cfg.spec()?;
    let rho0 = cfg.initial_state()?;
    let params = cfg.params()?;
    let trajectory = evolve(&rho0, &spec, &params)?;
    let csv = trajectory_csv(&trajectory);
    let svg = with_svg.then(|| {
        let labels = output::pattern_labels(cfg.n);
        let series: Vec<(String, Vec<f64>)> = labels
            .into_iter()
            .enumerate()
            .map(|(v, label)| (label.trim_start_matches("pattern_").to_string(), trajectory.series(v)))
            .collect();
        let title = format!(
            "N = {}, sinks {}, κ = {}, γ = {}",
            cfg.n,
            cfg.sinks.iter().map(Pattern::to_string).collect::<Vec<_>>().join(", "),
            cfg.kappa,
            cfg.gamma
        );
        svg::line_chart(&title, &trajectory.times, &series)
    });
    Ok(Simulation { trajectory, csv, svg })
}

/// One grid point of a mixing-time sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub kappa: f64,
    pub gamma: f64,
    /// Mixing time in units of `1/γ`; 0 when no memory was retrieved, -1 when
    /// the point failed.
    pub t_mix: f64,
    pub diagnostics: String,
}

pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub csv: String,
    pub svg: Option<String>,
}

fn sweep_point(cfg: &ScenarioConfig, kappa: f64, gamma: f64) -> SweepPoint {
    let mut point = SweepPoint {
        kappa,
        gamma,
        t_mix: 0.0,
        diagnostics: String::new(),
    };
    if kappa == 0.0 && gamma == 0.0 {
        point.diagnostics = "static walk".into();
        return point;
    }
    let result = (|| -> Result<f64, ExperimentError> {
        let spec = cfg.spec()?;
        let rho0 = cfg.initial_state()?;
        let params = WalkParams {
            kappa,
            gamma,
            t_max: cfg.t_max,
            dt: cfg.dt,
            sample_every: cfg.sample_every,
        };
        let traj = evolve(&rho0, &spec, &params)?;
        Ok(mixing_time(&traj, cfg.epsilon, cfg.sink_threshold))
    })();
    match result {
        Ok(t) => point.t_mix = t,
        Err(e) => {
            point.t_mix = -1.0;
            point.diagnostics = e.to_string().replace([',', '\n'], ";");
        }
    }
    point
}

/// Mixing time over a (κ, γ) grid; rows are sorted by γ then κ.
pub fn run_sweep(cfg: &ScenarioConfig, grid: &SweepGrid, parallel: bool, with_svg: bool) -> Result<Sweep, ExperimentError> {
    // Surface config problems before fanning out.
    cfg.spec()?;
    cfg.initial_state()?;
    let pts = grid.points();
    let mut points: Vec<SweepPoint> = if parallel {
        pts.par_iter().map(|&(k, g)| sweep_point(cfg, k, g)).collect()
    } else {
        pts.iter().map(|&(k, g)| sweep_point(cfg, k, g)).collect()
    };
    points.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.kappa.total_cmp(&b.kappa)));

    let mut csv = String::from("kappa,gamma,t_mix,diagnostics\n");
    for p in &points {
        let _ = writeln!(csv, "{},{},{},{}", fmt_real(p.kappa), fmt_real(p.gamma), fmt_real(p.t_mix), p.diagnostics);
    }
    let svg = with_svg.then(|| {
        let mut kappas = grid.kappas.clone();
        let mut gammas = grid.gammas.clone();
        kappas.sort_by(f64::total_cmp);
        kappas.dedup();
        gammas.sort_by(f64::total_cmp);
        gammas.dedup();
        let values: Vec<Vec<f64>> = gammas
            .iter()
            .map(|&g| {
                kappas
                    .iter()
                    .map(|&k| {
                        points
                            .iter()
                            .find(|p| p.kappa == k && p.gamma == g)
                            .map_or(-1.0, |p| p.t_mix)
                    })
                    .collect()
            })
            .collect();
        svg::heat_map("Mixing time T_M", &kappas, &gammas, &values)
    });
    Ok(Sweep { points, csv, svg })
}

/// Row of the coin unitarity table.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinRow {
    pub p: f64,
    pub kind: &'static str,
    pub deviation: f64,
    pub unitary: bool,
}

/// Default probability grid `0, 0.05, …, 1`.
pub fn default_coin_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

pub fn run_coin_check(grid: &[f64]) -> Result<(Vec<CoinRow>, String), ExperimentError> {
    let mut rows = Vec::with_capacity(2 * grid.len());
    for &p in grid {
        for (kind, coin) in [("neuron", neuron_coin(p)?), ("biased", biased_coin(p)?)] {
            let r = is_unitary(&coin, tol::UNITARITY);
            rows.push(CoinRow {
                p,
                kind,
                deviation: r.deviation,
                unitary: r.unitary,
            });
        }
    }
    let mut csv = String::from("p,kind,deviation,unitary\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{}", fmt_real(r.p), r.kind, fmt_real(r.deviation), r.unitary);
    }
    Ok((rows, csv))
}

/// Outcome of presenting one input to the classical network.
#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalRow {
    pub input: Pattern,
    pub output: Pattern,
    pub changes: usize,
    pub sweeps: usize,
    pub converged: bool,
    pub energies: Vec<f64>,
}

pub fn run_hopfield(cfg: &ScenarioConfig) -> Result<(Vec<RetrievalRow>, String), ExperimentError> {
    let (stored, inputs) = cfg.hopfield_patterns()?;
    let w = hebbian_store(&stored)?;
    let theta = Thresholds::zeros(cfg.n);
    let order = match cfg.update_order {
        OrderKind::Cyclic => UpdateOrder::Cyclic,
        OrderKind::Random => UpdateOrder::Random { seed: cfg.seed },
    };
    let mut rows = Vec::with_capacity(inputs.len());
    for input in inputs {
        let traj = run_async(&input, &w, &theta, order, cfg.threshold_sense, cfg.max_sweeps)?;
        rows.push(RetrievalRow {
            output: traj.final_state().clone(),
            changes: traj.changes(),
            sweeps: traj.sweeps,
            converged: traj.converged,
            energies: traj.energies,
            input,
        });
    }
    let mut csv = String::from("input,output,steps,sweeps,converged,energy_trace\n");
    for r in &rows {
        let trace: Vec<String> = r.energies.iter().map(|&e| fmt_real(e)).collect();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.input,
            r.output,
            r.changes,
            r.sweeps,
            r.converged,
            trace.join(";")
        );
    }
    Ok((rows, csv))
}

pub struct ClassicalRun {
    pub times: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    pub csv: String,
}

/// Classical continuous-time walk on the same jump graph (rate γ per jump),
/// sampled on the simulation grid.
pub fn run_classical(cfg: &ScenarioConfig) -> Result<ClassicalRun, ExperimentError> {
    let spec = cfg.spec()?;
    let initial = cfg.initial_pattern()?;
    let params = cfg.params()?;
    let gamma = if cfg.gamma > 0.0 { cfg.gamma } else { 1.0 };
    let q = RateMatrix::from_jumps(spec.dim(), &build_jump_operators(&spec), gamma)
        .expect("jump generator is valid by construction");
    let pi0 = ProbabilityVector::delta(spec.dim(), initial.index());
    let samples = (params.t_max / params.sample_every).round() as usize;
    let mut times = Vec::with_capacity(samples + 1);
    let mut pops = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let t = (k as f64 * params.sample_every).min(params.t_max);
        let p = ctmc_evolve(&q, &pi0, t * params.time_unit()).expect("validated inputs");
        times.push(t);
        pops.push(p.into_vec());
    }
    let csv = populations_csv(cfg.n, &times, &pops);
    Ok(ClassicalRun {
        times,
        populations: pops,
        csv,
    })
}
