//! Numerical tolerances shared across modules.

/// Half-width of the band around `∂D` reported as `BOUNDARY`.
pub const DELTA_BOUNDARY: f64 = 1e-9;

/// Backward-error residual accepted by the root solver.
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Iteration cap for one Aberth run.
pub const ROOT_MAX_ITER: usize = 200;

/// Modulus tolerance for "on the unit circle" preconditions.
pub const UNIT_CIRCLE: f64 = 1e-12;

/// Rank threshold for normals and intersection spaces, relative to the
/// largest entry of the matrix.
pub const RANK: f64 = 1e-8;

/// Symmetry check in `symmetric_eval`, relative to `max(1, |value|)`.
pub const SYMMETRY: f64 = 1e-10;

/// Minimal distance from `2 − ωs` to zero accepted by `Φ_ω`.
pub const PHI_POLE: f64 = 1e-12;

/// Largest degree handled by [`crate::sympoly`].
pub const MAX_DEGREE: usize = 16;

/// Largest multiset size for exhaustive permutation search.
pub const MAX_MATCH: usize = 8;
