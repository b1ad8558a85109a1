//! Stochastic quantum walks on the hypercube of neural firing patterns.
//!
//! The crate builds a GKLS master equation whose coherent part is the
//! adjacency matrix of a hypercube with isolated sink vertices and whose
//! dissipative part is a set of directed jump operators flowing towards the
//! sinks. Sinks play the role of memorised patterns, so the walk behaves as an
//! associative memory. Classical baselines (Hopfield networks, Markov chains)
//! and the coin algebra of discrete coined walks live alongside it.

pub mod classical;
pub mod coined;
pub mod experiments;
pub mod gkls;
pub mod hopfield;
pub mod hypercube;
pub mod numerics;

pub use hopfield::Pattern;
pub use numerics::ComplexMatrix;
