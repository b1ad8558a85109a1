//! Tolerance table shared across the crate.

/// Max-entry norm of `A - A^H` accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-10;
/// Max-entry norm of `C^H C - I` accepted as unitary.
pub const UNITARITY: f64 = 1e-10;
/// Allowed `|tr(rho) - 1|` for a density matrix.
pub const TRACE_DRIFT: f64 = 1e-9;
/// Smallest eigenvalue a density matrix may have.
pub const POSITIVITY_FLOOR: f64 = -1e-8;
/// Sum-to-one tolerance for stochastic vectors and matrix rows.
pub const STOCHASTIC: f64 = 1e-12;
/// Trace drift beyond which an integration run is aborted.
pub const INTEGRATION_TRACE_BREACH: f64 = 1e-6;
/// Eigenvalue below which an integration run is aborted.
pub const INTEGRATION_POSITIVITY_BREACH: f64 = -1e-6;
/// Populations smaller than this in magnitude are treated as zero.
pub const POPULATION_DUST: f64 = 1e-12;
