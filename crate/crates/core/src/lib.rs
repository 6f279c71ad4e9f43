//! Coherent deformations of surface path algebras driven by an area 2-form.
//!
//! The library realizes the homotopy path algebra of two closed surfaces —
//! a flat torus (plane modulo a lattice) and the unit sphere — and deforms
//! the concatenation product of the algebra by a multiplicative weight
//! attached to each composable pair of path classes. The weight is the
//! exponential of the signed area swept between the two classes and the
//! shortest geodesic of their product, reduced modulo the surface modulus:
//! zero for the torus (a continuous family of deformations indexed by a
//! coupling λ) and `4π·|c|` for the sphere at form scale `c` (a discrete
//! family indexed by an integer quantum number).
//!
//! Modules:
//!
//! - [`coeffs`] — arithmetic in `ℝ/μℝ` and the group of nonzero weights.
//! - [`monoid`] — partial monoids with zero, cochains and coboundaries,
//!   formal sums, the deformed product, and a triviality solver for finite
//!   monoids.
//! - [`geometry`] — the torus and sphere backends: points, path classes,
//!   geodesics, and oriented triangle integrals of the area form.
//! - [`deformation`] — the geometric area cocycle, weight families, the
//!   star product, and local/cover trivializing cochains.
//! - [`scenarios`] — equator phase traces and torus deflection tables, with
//!   CSV output.
//! - [`sample`] — seeded random samplers used by the verification suites.
//! - [`verify`] — the named check suites behind the CLI.

pub mod coeffs;
pub mod deformation;
pub mod geometry;
pub mod monoid;
pub mod sample;
pub mod scenarios;
pub mod tol;
pub mod verify;

pub use coeffs::{DeformationMode, ModReal, Weight};
pub use deformation::Deformation;
pub use geometry::{Manifold, Sphere, Torus, TwoForm};
pub use monoid::{Eval, PartialMonoid, Product};
