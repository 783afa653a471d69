//! Numerical tolerances shared across the crate.
//!
//! The problems handled here are at most 16-dimensional, so double precision
//! leaves several digits of headroom over every threshold below.

/// Maximum entrywise deviation `|h - h†|` accepted for a Hermitian input.
pub const HERMITIAN: f64 = 1e-10;

/// Reconstruction accuracy promised by the eigen- and singular-value solvers.
pub const RECONSTRUCTION: f64 = 1e-9;

/// Relative threshold below which singular values are clamped to zero.
pub const ZERO: f64 = 1e-12;

/// Unit-norm tolerance for state vectors.
pub const STATE_NORM: f64 = 1e-12;

/// Unitarity tolerance `‖U†U − I‖_max` for operators handed to the analysis code.
pub const UNITARY: f64 = 1e-9;

/// Equality tolerance for Schmidt coefficients and canonical angles.
pub const EQ: f64 = 1e-8;

/// Schmidt coefficients at or below this value do not count towards the rank.
pub const SCHMIDT_RANK: f64 = 1e-10;

/// Default overlap threshold for transition-graph edges.
pub const OVERLAP: f64 = 1e-9;

/// Default relative threshold for numerical rank of state sets.
pub const RANK: f64 = 1e-9;

/// Concurrence below which a two-qubit state counts as a product state.
pub const PRODUCT: f64 = 1e-9;

/// Maximum number of Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;
