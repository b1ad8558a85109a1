//! Scenario configuration files.
//!
//! A config is a flat JSON object. Unknown keys are rejected so that typos
//! surface as errors instead of silently falling back to defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::gkls::{self, DensityMatrix, WalkParams};
use crate::hopfield::{Pattern, ThresholdSense};
use crate::hypercube::{EquidistantRule, HypercubeSpec};

use super::ExperimentError;

/// Dense 64×64 density matrices are the practical ceiling.
pub const MAX_CONFIG_QURONS: usize = 6;

/// Default sweep axis for both κ and γ.
pub const DEFAULT_GRID: [f64; 5] = [0.2, 0.65, 1.1, 1.55, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    #[default]
    Cyclic,
    Random,
}

/// Scenario as written in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n: usize,
    #[serde(default)]
    pub sinks: Vec<Pattern>,
    pub initial: Option<Pattern>,
    #[serde(default = "one")]
    pub kappa: f64,
    #[serde(default = "one")]
    pub gamma: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_sink_threshold")]
    pub sink_threshold: f64,
    /// Output file name, resolved against the `--out` directory.
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub edge_weights: Vec<(Pattern, Pattern, f64)>,
    #[serde(default)]
    pub equidistant_rule: EquidistantRule,
    #[serde(default)]
    pub threshold_sense: ThresholdSense,
    #[serde(default)]
    pub seed: u64,
    /// Sweep axes; default to [`DEFAULT_GRID`].
    pub kappas: Option<Vec<f64>>,
    pub gammas: Option<Vec<f64>>,
    /// Hopfield runs: patterns to store and inputs to present.
    #[serde(default)]
    pub stored: Vec<Pattern>,
    #[serde(default)]
    pub inputs: Vec<Pattern>,
    #[serde(default)]
    pub update_order: OrderKind,
    #[serde(default = "default_max_sweeps")]
    pub max_sweeps: usize,
}

fn one() -> f64 {
    1.0
}
fn default_t_max() -> f64 {
    gkls::DEFAULT_T_MAX
}
fn default_dt() -> f64 {
    gkls::DEFAULT_DT
}
fn default_sample_every() -> f64 {
    gkls::DEFAULT_SAMPLE_EVERY
}
fn default_epsilon() -> f64 {
    gkls::DEFAULT_EPSILON
}
fn default_sink_threshold() -> f64 {
    gkls::DEFAULT_SINK_THRESHOLD
}
fn default_max_sweeps() -> usize {
    100
}

fn field_error(field: &str, msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Config {
        field: field.to_string(),
        message: msg.into(),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| field_error("<file>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| field_error("<file>", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn check_n(&self) -> Result<(), ExperimentError> {
        if self.n == 0 || self.n > MAX_CONFIG_QURONS {
            return Err(field_error(
                "n",
                format!("must be in 1..={MAX_CONFIG_QURONS}, got {}", self.n),
            ));
        }
        Ok(())
    }

    fn check_len(&self, field: &str, p: &Pattern) -> Result<(), ExperimentError> {
        if p.len() != self.n {
            return Err(field_error(
                field,
                format!("pattern {p} has length {}, expected {}", p.len(), self.n),
            ));
        }
        Ok(())
    }

    /// Hypercube spec with weight overrides and the equidistant rule applied.
    pub fn spec(&self) -> Result<HypercubeSpec, ExperimentError> {
        self.check_n()?;
        if self.sinks.is_empty() {
            return Err(field_error("sinks", "at least one sink is required"));
        }
        for s in &self.sinks {
            self.check_len("sinks", s)?;
        }
        let mut spec = HypercubeSpec::new(self.n, self.sinks.clone())
            .map_err(|e| field_error("sinks", e.to_string()))?
            .with_rule(self.equidistant_rule);
        for (a, b, w) in &self.edge_weights {
            spec = spec
                .with_edge_weight(a, b, *w)
                .map_err(|e| field_error("edge_weights", e.to_string()))?;
        }
        Ok(spec)
    }

    pub fn initial_pattern(&self) -> Result<Pattern, ExperimentError> {
        let p = self
            .initial
            .clone()
            .ok_or_else(|| field_error("initial", "missing initial pattern"))?;
        self.check_len("initial", &p)?;
        Ok(p)
    }

    /// `|initial⟩⟨initial|`.
    pub fn initial_state(&self) -> Result<DensityMatrix, ExperimentError> {
        let p = self.initial_pattern()?;
        Ok(DensityMatrix::basis(1 << self.n, p.index()))
    }

    pub fn params(&self) -> Result<WalkParams, ExperimentError> {
        let params = WalkParams {
            kappa: self.kappa,
            gamma: self.gamma,
            t_max: self.t_max,
            dt: self.dt,
            sample_every: self.sample_every,
        };
        params.validate().map_err(|e| field_error("kappa/gamma/t_max/dt/sample_every", e.to_string()))?;
        self.check_mixing()?;
        Ok(params)
    }

    fn check_mixing(&self) -> Result<(), ExperimentError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(field_error("epsilon", format!("must be > 0, got {}", self.epsilon)));
        }
        if !(0.0..=1.0).contains(&self.sink_threshold) {
            return Err(field_error(
                "sink_threshold",
                format!("must lie in [0, 1], got {}", self.sink_threshold),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<SweepGrid, ExperimentError> {
        let kappas = self.kappas.clone().unwrap_or_else(|| DEFAULT_GRID.to_vec());
        let gammas = self.gammas.clone().unwrap_or_else(|| DEFAULT_GRID.to_vec());
        for (field, values) in [("kappas", &kappas), ("gammas", &gammas)] {
            if values.is_empty() {
                return Err(field_error(field, "grid axis must not be empty"));
            }
            if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(field_error(field, format!("values must be >= 0, got {v}")));
            }
        }
        // Validate the fixed fields once with a representative point.
        if !(self.dt > 0.0 && self.dt <= gkls::MAX_DT) {
            return Err(field_error("dt", format!("must lie in (0, {}], got {}", gkls::MAX_DT, self.dt)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(field_error("t_max", format!("must be > 0, got {}", self.t_max)));
        }
        if !(self.sample_every > 0.0 && self.sample_every.is_finite()) {
            return Err(field_error("sample_every", format!("must be > 0, got {}", self.sample_every)));
        }
        self.check_mixing()?;
        Ok(SweepGrid { kappas, gammas })
    }

    pub fn hopfield_patterns(&self) -> Result<(Vec<Pattern>, Vec<Pattern>), ExperimentError> {
        self.check_n()?;
        if self.stored.is_empty() {
            return Err(field_error("stored", "at least one stored pattern is required"));
        }
        for p in &self.stored {
            self.check_len("stored", p)?;
        }
        for p in &self.inputs {
            self.check_len("inputs", p)?;
        }
        let inputs = if self.inputs.is_empty() {
            // Every stored pattern and each of its one-bit corruptions.
            let mut v = Vec::new();
            for p in &self.stored {
                v.push(p.clone());
                v.extend((0..p.len()).map(|i| p.flipped(i)));
            }
            v
        } else {
            self.inputs.clone()
        };
        Ok((self.stored.clone(), inputs))
    }
}

/// Axes of a (κ, γ) mixing-time sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub kappas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl SweepGrid {
    /// All `(κ, γ)` points, ordered by γ then κ.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.gammas
            .iter()
            .flat_map(|&g| self.kappas.iter().map(move |&k| (k, g)))
            .collect()
    }
}
