//! Hypercube walk ingredients: sink-isolated Hamiltonian and directed jump
//! operators.
//!
//! Vertices are the `2^N` firing patterns, indexed with neuron 1 as the most
//! significant bit. Two vertices share an edge when their Hamming distance is
//! one; every non-sink vertex also carries a self-loop. Sinks (memorised
//! patterns) are cut out of the Hamiltonian entirely and can only be entered
//! through jump operators, which point along each edge towards the endpoint
//! closer to the sink set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hopfield::Pattern;
use crate::numerics::ComplexMatrix;

/// Largest quron count accepted by [`HypercubeSpec`].
pub const MAX_QURONS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("quron count must be in 1..={MAX_QURONS}, got {0}")]
    BadDimension(usize),
    #[error("at least one sink is required")]
    NoSinks,
    #[error("sink {0} listed twice")]
    DuplicateSink(Pattern),
    #[error("every vertex is a sink; at least one free vertex is required")]
    AllSinks,
    #[error("pattern {pattern} has length {got}, expected {expected}")]
    PatternLength {
        pattern: Pattern,
        expected: usize,
        got: usize,
    },
    #[error("edge weight override {a}-{b} does not join adjacent vertices")]
    NotAnEdge { a: Pattern, b: Pattern },
    #[error("edge weight {weight} for {a}-{b} must be positive and finite")]
    BadWeight { a: Pattern, b: Pattern, weight: f64 },
    #[error("conflicting weights for edge {a}-{b}")]
    ConflictingWeight { a: Pattern, b: Pattern },
}

/// How edges whose endpoints are equally far from the sinks are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquidistantRule {
    /// No jump operator on equidistant edges.
    #[default]
    Strict,
    /// Jump operators in both directions on equidistant edges.
    Lte,
}

/// Directed incoherent transition `|to⟩⟨from|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JumpOperator {
    pub from: usize,
    pub to: usize,
}

impl JumpOperator {
    pub fn new(from: usize, to: usize) -> Self {
        Self { from, to }
    }

    pub fn to_matrix(&self, dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(self.to, self.from)] = Complex64::new(1.0, 0.0);
        m
    }
}

/// Dimension, sink set and edge weights of a walk.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeSpec {
    n: usize,
    sinks: Vec<Pattern>,
    sink_mask: Vec<bool>,
    /// Explicit weights keyed by `(min index, max index)`; absent edges weigh 1.
    weights: BTreeMap<(usize, usize), f64>,
    rule: EquidistantRule,
}

impl HypercubeSpec {
    pub fn new(n: usize, sinks: Vec<Pattern>) -> Result<Self, SpecError> {
        if n == 0 || n > MAX_QURONS {
            return Err(SpecError::BadDimension(n));
        }
        if sinks.is_empty() {
            return Err(SpecError::NoSinks);
        }
        let dim = 1usize << n;
        let mut sink_mask = vec![false; dim];
        for s in &sinks {
            check_len(s, n)?;
            if std::mem::replace(&mut sink_mask[s.index()], true) {
                return Err(SpecError::DuplicateSink(s.clone()));
            }
        }
        if sinks.len() >= dim {
            return Err(SpecError::AllSinks);
        }
        Ok(Self {
            n,
            sinks,
            sink_mask,
            weights: BTreeMap::new(),
            rule: EquidistantRule::Strict,
        })
    }

    /// Parses sink bit strings; the dimension is taken from the first sink.
    pub fn from_strs(sinks: &[&str]) -> Result<Self, SpecError> {
        let parsed: Vec<Pattern> = sinks
            .iter()
            .map(|s| s.parse().expect("valid bit string"))
            .collect();
        let n = parsed.first().map_or(0, Pattern::len);
        Self::new(n, parsed)
    }

    pub fn with_rule(mut self, rule: EquidistantRule) -> Self {
        self.rule = rule;
        self
    }

    /// Overrides `a_ij = a_ji` for an edge or self-loop.
    pub fn with_edge_weight(mut self, a: &Pattern, b: &Pattern, weight: f64) -> Result<Self, SpecError> {
        check_len(a, self.n)?;
        check_len(b, self.n)?;
        let (i, j) = (a.index(), b.index());
        if (i ^ j).count_ones() > 1 {
            return Err(SpecError::NotAnEdge {
                a: a.clone(),
                b: b.clone(),
            });
        }
        if !weight.is_finite() || weight <= 0.0 {
            return Err(SpecError::BadWeight {
                a: a.clone(),
                b: b.clone(),
                weight,
            });
        }
        let key = (i.min(j), i.max(j));
        if let Some(&old) = self.weights.get(&key) {
            if old != weight {
                return Err(SpecError::ConflictingWeight {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
        }
        self.weights.insert(key, weight);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn sinks(&self) -> &[Pattern] {
        &self.sinks
    }

    pub fn sink_indices(&self) -> Vec<usize> {
        self.sinks.iter().map(Pattern::index).collect()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.sink_mask[v]
    }

    pub fn rule(&self) -> EquidistantRule {
        self.rule
    }

    /// `a_ij`, defaulting to 1.
    pub fn edge_weight(&self, i: usize, j: usize) -> f64 {
        *self.weights.get(&(i.min(j), i.max(j))).unwrap_or(&1.0)
    }
}

fn check_len(p: &Pattern, n: usize) -> Result<(), SpecError> {
    if p.len() != n {
        return Err(SpecError::PatternLength {
            pattern: p.clone(),
            expected: n,
            got: p.len(),
        });
    }
    Ok(())
}

/// Basis index of a pattern, neuron 1 most significant.
pub fn vertex_index(p: &Pattern) -> usize {
    p.index()
}

/// Smallest Hamming distance from `v` to any sink.
pub fn min_sink_distance(v: usize, spec: &HypercubeSpec) -> u32 {
    spec.sinks
        .iter()
        .map(|s| (v ^ s.index()).count_ones())
        .min()
        .expect("spec has at least one sink")
}

/// Adjacency Hamiltonian with self-loops and every sink row/column removed.
pub fn build_hamiltonian(spec: &HypercubeSpec) -> ComplexMatrix {
    let dim = spec.dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in (0..dim).filter(|&i| !spec.is_sink(i)) {
        h[(i, i)] = Complex64::new(spec.edge_weight(i, i), 0.0);
        for bit in 0..spec.n() {
            let j = i ^ (1 << bit);
            if !spec.is_sink(j) {
                h[(i, j)] = Complex64::new(spec.edge_weight(i, j), 0.0);
            }
        }
    }
    h
}

/// Jump operators along hypercube edges, each pointing to the endpoint closer
/// to the sink set. Sinks never emit.
pub fn build_jump_operators(spec: &HypercubeSpec) -> Vec<JumpOperator> {
    let dim = spec.dim();
    let dist: Vec<u32> = (0..dim).map(|v| min_sink_distance(v, spec)).collect();
    let mut out = Vec::new();
    for from in (0..dim).filter(|&v| !spec.is_sink(v)) {
        for bit in (0..spec.n()).rev() {
            let to = from ^ (1 << bit);
            let emit = match spec.rule() {
                EquidistantRule::Strict => dist[to] < dist[from],
                EquidistantRule::Lte => dist[to] <= dist[from],
            };
            if emit {
                out.push(JumpOperator { from, to });
            }
        }
    }
    out
}

/// True when every non-sink vertex has a directed jump path into a sink.
pub fn reachability_check(spec: &HypercubeSpec) -> bool {
    let dim = spec.dim();
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for jump in build_jump_operators(spec) {
        incoming[jump.to].push(jump.from);
    }
    let mut reached: BTreeSet<usize> = spec.sink_indices().into_iter().collect();
    let mut queue: VecDeque<usize> = reached.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for &u in &incoming[v] {
            if reached.insert(u) {
                queue.push_back(u);
            }
        }
    }
    reached.len() == dim
}
