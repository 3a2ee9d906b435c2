//! Numerical tolerances shared across the solver stack.

/// Absolute slack for every feasibility check (floors, monotonicity, participation).
pub const FEAS: f64 = 1e-9;

/// Two candidate utilities closer than this are treated as a tie.
pub const TIE: f64 = 1e-9;

/// Relative residual bound for polynomial roots.
pub const ROOT: f64 = 1e-10;

/// Residual bound on `U_D` for points reported on the participation curve.
pub const CURVE: f64 = 1e-7;

/// Strictness margin for sweep classification.
pub const CLASS: f64 = 1e-6;

/// Coefficients smaller than this fraction of the largest one are trimmed.
pub const COEFF: f64 = 1e-13;
