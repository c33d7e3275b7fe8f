//! Numerical tolerances shared across the crate.
//!
//! Every threshold used to accept, classify or reject a numerical result lives
//! here so callers can see (and tests can reference) the exact values.

/// Largest entrywise deviation from (anti)symmetry that `make_coupling`
/// silently repairs.
pub const SYMMETRY: f64 = 1e-12;

/// Largest entrywise deviation of `Q·Qᵀ` from the identity for a matrix to be
/// accepted as orthogonal.
pub const ORTHOGONALITY: f64 = 1e-8;

/// Distance from `±1` below which an eigenvalue of an orthogonal matrix is
/// classified as real.
pub const UNIT_EIGENVALUE: f64 = 1e-8;

/// Default singular-value threshold, relative to the largest singular value.
pub const SINGULAR_RELATIVE: f64 = 1e-12;

/// Pivots below this magnitude make `log_abs_det` report an exact zero.
pub const LOG_DET_FLOOR: f64 = 1e-300;

/// Smallest singular value of `T + I` accepted when forming the pairing matrix.
pub const CAYLEY_CONDITION: f64 = 1e-10;

/// Largest antisymmetry defect of the pairing matrix before it is repaired.
pub const PAIRING_ANTISYMMETRY: f64 = 1e-8;

/// Degeneracy threshold for the exact ground-state gap.
pub const DEGENERATE_GAP: f64 = 1e-9;

/// Default finite-difference step for the derivative of the generator.
pub const GENERATOR_STEP: f64 = 1e-5;
