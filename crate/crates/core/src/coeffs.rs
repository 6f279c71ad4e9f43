//! Coefficient arithmetic: reals modulo a modulus, and nonzero weights.
//!
//! `ModReal` is the additive group `ℝ/μℝ` (plain `ℝ` when `μ = 0`);
//! `Weight` is a nonzero complex scalar multiplying a product in the
//! deformed algebra. `exp_weight` maps one to the other: continuously via a
//! coupling λ when the modulus is zero, and through the quantized family
//! `x ↦ exp((2nπi/μ)x)` when it is positive.

use std::ops::{Div, Mul};

pub use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CoeffsError {
    #[error("continuous mode requires modulus 0, got {0}")]
    ContinuousNeedsModulusZero(f64),
    #[error("quantized mode requires a positive modulus, got {0}")]
    QuantizedNeedsPositiveModulus(f64),
    #[error("weight must be nonzero and finite, got {0}")]
    InvalidWeight(Complex64),
}

/// A real number together with a modulus `μ ≥ 0`, representing an element
/// of `ℝ/μℝ`. With `μ = 0` the value is an unconstrained real; with
/// `μ > 0` the stored representative is canonical in `[0, μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModReal {
    value: f64,
    modulus: f64,
}

impl ModReal {
    /// Canonicalizes `value` modulo `modulus`. Identity when `modulus = 0`.
    pub fn new(value: f64, modulus: f64) -> Self {
        assert!(
            modulus >= 0.0 && modulus.is_finite(),
            "modulus must be a finite non-negative real, got {modulus}"
        );
        let value = canonical(value, modulus);
        Self { value, modulus }
    }

    /// A plain real (modulus zero).
    pub fn plain(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// Group addition in `ℝ/μℝ`. Panics on modulus mismatch: mixing
    /// coefficient groups is a contract violation, not a data error.
    pub fn add(&self, other: &Self) -> Self {
        assert!(
            self.modulus == other.modulus,
            "modulus mismatch: {} vs {}",
            self.modulus,
            other.modulus
        );
        Self::new(self.value + other.value, self.modulus)
    }

    /// Additive inverse in `ℝ/μℝ`.
    pub fn neg(&self) -> Self {
        Self::new(-self.value, self.modulus)
    }

    /// Circular distance to `other`: the distance from the difference of
    /// representatives to the nearest multiple of the modulus.
    pub fn circular_distance(&self, other: &Self) -> f64 {
        assert!(
            self.modulus == other.modulus,
            "modulus mismatch: {} vs {}",
            self.modulus,
            other.modulus
        );
        circular_distance(self.value - other.value, self.modulus)
    }

    /// Equality of canonical representatives up to `tol`, compared
    /// circularly so that values straddling the seam at `0 ≡ μ` match.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.circular_distance(other) <= tol
    }
}

/// Canonical representative of `x` in `[0, mu)`; identity for `mu = 0`.
pub fn canonical(x: f64, mu: f64) -> f64 {
    if mu == 0.0 {
        return x;
    }
    let mut r = x.rem_euclid(mu);
    // rem_euclid can round up to mu itself for tiny negative inputs
    if r >= mu {
        r -= mu;
    }
    if r < 0.0 {
        r += mu;
    }
    r
}

/// Distance from `x` to the nearest multiple of `mu` (absolute value when
/// `mu = 0`).
pub fn circular_distance(x: f64, mu: f64) -> f64 {
    if mu == 0.0 {
        return x.abs();
    }
    let r = canonical(x, mu);
    r.min(mu - r)
}

/// A nonzero scalar attached to a product of the deformed algebra.
/// Quantized deformations produce unit-modulus weights (phases).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight(Complex64);

impl Weight {
    pub fn new(z: Complex64) -> Result<Self, CoeffsError> {
        if z.norm_sqr() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(CoeffsError::InvalidWeight(z));
        }
        Ok(Self(z))
    }

    pub fn one() -> Self {
        Self(Complex64::new(1.0, 0.0))
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self(Complex64::from_polar(r, theta))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn abs(&self) -> f64 {
        self.0.norm()
    }

    pub fn arg(&self) -> f64 {
        self.0.arg()
    }

    pub fn as_complex(&self) -> Complex64 {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.inv())
    }

    /// Relative distance `|a − b| / max(|a|, |b|)`.
    pub fn rel_distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm() / self.abs().max(other.abs())
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        Weight(self.0 * rhs.0)
    }
}

impl Div for Weight {
    type Output = Weight;
    fn div(self, rhs: Weight) -> Weight {
        Weight(self.0 / rhs.0)
    }
}

/// Which family of deformations a weight is drawn from.
///
/// `Continuous(λ)` exponentiates a plain real cocycle value, `exp(λ·x)`;
/// it requires modulus zero. `Quantized(n)` produces the phase
/// `exp((2nπi/μ)x)`, well defined on `ℝ/μℝ` because the map has period μ;
/// it requires a positive modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeformationMode {
    Continuous(Complex64),
    Quantized(i64),
}

impl DeformationMode {
    /// Continuous family with a real coupling.
    pub fn coupling(lambda: f64) -> Self {
        Self::Continuous(Complex64::new(lambda, 0.0))
    }

    /// Continuous family with a complex coupling.
    pub fn coupling_complex(lambda: Complex64) -> Self {
        Self::Continuous(lambda)
    }

    /// Quantized family with integer quantum number.
    pub fn quantum(n: i64) -> Self {
        Self::Quantized(n)
    }

    /// Checks that the mode is compatible with coefficients of the given
    /// modulus.
    pub fn check_modulus(&self, modulus: f64) -> Result<(), CoeffsError> {
        match self {
            Self::Continuous(_) if modulus != 0.0 => {
                Err(CoeffsError::ContinuousNeedsModulusZero(modulus))
            }
            Self::Quantized(_) if modulus <= 0.0 => {
                Err(CoeffsError::QuantizedNeedsPositiveModulus(modulus))
            }
            _ => Ok(()),
        }
    }
}

/// Exponentiates an additive cocycle value into a multiplicative weight.
///
/// Errors when the mode does not match the modulus of `x` (a λ-family on a
/// quantized group, or a quantum number on plain reals).
pub fn exp_weight(mode: &DeformationMode, x: &ModReal) -> Result<Weight, CoeffsError> {
    mode.check_modulus(x.modulus())?;
    match mode {
        DeformationMode::Continuous(lambda) => {
            let z = (lambda * Complex64::new(x.value(), 0.0)).exp();
            Weight::new(z)
        }
        DeformationMode::Quantized(n) => {
            let theta = 2.0 * std::f64::consts::PI * (*n as f64) / x.modulus() * x.value();
            Ok(Weight::from_polar(1.0, theta))
        }
    }
}
