//! Default tolerances for unit-scale geometric quantities.
//!
//! Every threshold used by the library and its check suites is named here;
//! suite runners accept overrides but default to these values.

/// Absolute tolerance for matching endpoints of composable path classes.
pub const POINT_TOL: f64 = 1e-9;

/// Angular margin around π below which two sphere points are treated as
/// antipodal and the geodesic between them as non-unique.
pub const ANTIPODAL_ANGLE_TOL: f64 = 1e-6;

/// Relative tolerance for the multiplicative 2-cocycle identity.
pub const COCYCLE_REL_TOL: f64 = 1e-9;

/// Absolute tolerance for additive cocycle and coboundary identities
/// (circular distance modulo the form modulus).
pub const ADDITIVE_COCYCLE_TOL: f64 = 1e-8;

/// Absolute tolerance for `δδ = 0` residuals.
pub const DELTA_SQUARED_TOL: f64 = 1e-9;

/// Least-squares residual above which a finite 2-cochain is reported as
/// not being a coboundary.
pub const TRIVIALITY_RESIDUAL: f64 = 1e-8;

/// Relative tolerance for trivializer contracts `δg = f`.
pub const TRIVIALIZER_REL_TOL: f64 = 1e-9;

/// Relative tolerance for the sphere ball trivializer, which accumulates
/// rounding through four triangle integrals.
pub const BALL_TRIVIALIZER_REL_TOL: f64 = 1e-8;

/// Coefficient-wise tolerance for star-product associativity.
pub const ASSOCIATIVITY_TOL: f64 = 1e-9;

/// Deviation of quantized weights from unit modulus.
pub const UNIT_WEIGHT_TOL: f64 = 1e-9;

/// Rejection margin (radians away from π) used by random samplers so that
/// sampled configurations stay clear of the antipodal threshold.
pub const SAMPLER_ANTIPODAL_MARGIN: f64 = 1e-3;
