//! Surface backends: points, homotopy path classes, shortest geodesics,
//! and oriented triangle integrals of the area 2-form.
//!
//! Two backends are provided, both with closed-form geometry: the flat
//! torus [`Torus`] (plane modulo a lattice) and the unit sphere
//! [`Sphere`]. Each implements [`crate::monoid::PartialMonoid`] over its
//! path classes — concatenation is zero on mismatched endpoints and
//! undefined where no unique shortest geodesic exists — and [`Manifold`]
//! for the geometric operations the deformation layer consumes.

mod sphere;
mod torus;

pub use sphere::{Sphere, SphereClass, SphereGeodesic, SpherePoint};
pub use torus::{signed_area, Lattice, Torus, TorusClass, TorusGeodesic, TorusPoint};

use thiserror::Error;

use crate::coeffs::ModReal;
use crate::monoid::{Eval, PartialMonoid, Product};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("lattice basis is degenerate (|det| = {0:e})")]
    DegenerateLattice(f64),
    #[error("point coordinates must be finite")]
    NonFinitePoint,
    #[error("cannot normalize a near-zero vector (norm {0:e})")]
    ZeroVector(f64),
    #[error("form scale must be finite and nonzero, got {0}")]
    InvalidScale(f64),
    #[error("piecewise path junction {index} does not match (gap {gap:e})")]
    JunctionMismatch { index: usize, gap: f64 },
    #[error("piecewise path needs at least one segment")]
    EmptyPath,
}

/// A constant multiple of the Riemannian area form, together with the
/// modulus of its group of sphere-integrals: `0` on the torus and
/// `4π·|scale|` on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoForm {
    scale: f64,
    modulus: f64,
}

impl TwoForm {
    pub fn new(scale: f64, modulus: f64) -> Result<Self, GeometryError> {
        if scale == 0.0 || !scale.is_finite() {
            return Err(GeometryError::InvalidScale(scale));
        }
        assert!(modulus >= 0.0 && modulus.is_finite());
        Ok(Self { scale, modulus })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// Scales a raw (unit-form) area into a coefficient value.
    pub fn apply(&self, raw_area: f64) -> ModReal {
        ModReal::new(self.scale * raw_area, self.modulus)
    }
}

/// Geometric operations a backend supplies on top of its path-class
/// monoid.
pub trait Manifold: PartialMonoid {
    type Point: Clone + PartialEq + std::fmt::Debug;
    /// A directed geodesic segment of arbitrary length, evaluable by arc
    /// length from its start.
    type Geodesic: Clone + std::fmt::Debug;

    /// Modulus of the unit-scale area form (`0` when every 2-sphere in the
    /// surface bounds).
    fn modulus_unit(&self) -> f64;

    fn area_form(&self, scale: f64) -> Result<TwoForm, GeometryError> {
        TwoForm::new(scale, self.modulus_unit() * scale.abs())
    }

    fn endpoints(&self, pc: &Self::Elem) -> (Self::Point, Self::Point);

    /// Geodesic distance between points.
    fn distance(&self, p: &Self::Point, q: &Self::Point) -> f64;

    /// Largest radius on which the exponential map at `p` is injective.
    fn injectivity_radius(&self, p: &Self::Point) -> f64;

    /// Largest ball radius admitted by [`crate::deformation::BallTrivializer`]:
    /// the injectivity radius, except on the sphere where cone triangles
    /// must stay within a hemisphere.
    fn trivializer_radius_bound(&self, p: &Self::Point) -> f64;

    /// The unique shortest geodesic representing a path class.
    fn shortest_geodesic(&self, pc: &Self::Elem) -> Eval<Self::Geodesic>;

    fn geodesic_length(&self, pc: &Self::Elem) -> Eval<f64>;

    /// Path class with reversed direction (negated deck class on the
    /// torus).
    fn reversed(&self, pc: &Self::Elem) -> Self::Elem;

    /// Unit-form area of the filling bounded by the geodesics of `a`, `b`
    /// and their product: `Zero` on mismatched endpoints, `Undefined` when
    /// any of the three geodesics fails uniqueness. Well defined modulo
    /// [`Manifold::modulus_unit`].
    fn triangle_area(&self, a: &Self::Elem, b: &Self::Elem) -> Product<f64>;

    /// Unit-form area swept between `gamma`, the prefix of `arc` up to arc
    /// length `upto`, and the shortest geodesic closing the product. The
    /// arc must start at `gamma`'s end; it may be arbitrarily long (an
    /// actual traveled geodesic, not a class representative).
    fn swept_area(&self, gamma: &Self::Elem, arc: &Self::Geodesic, upto: f64) -> Eval<f64>;

    /// Unit-form area of the cone triangle (base, start, end) used by ball
    /// trivializers; `Undefined` when either endpoint (lifted next to the
    /// base, on the torus) leaves the ball of the given radius.
    fn cone_area(&self, base: &Self::Point, radius: f64, pc: &Self::Elem) -> Eval<f64>;

    /// The class of a junction-matching chain, from overall endpoints and
    /// total deck class; used where intermediate products may be
    /// undefined.
    fn assemble_class(&self, segs: &[Self::Elem]) -> Eval<Self::Elem>;
}

/// An ordered chain of path classes with matching junctions.
#[derive(Debug, Clone)]
pub struct PiecewisePath<M: Manifold> {
    segments: Vec<M::Elem>,
    length: f64,
}

impl<M: Manifold> PiecewisePath<M> {
    /// Validates junctions (consecutive endpoints within `point_tol`) and
    /// records the total geodesic length. Zero-length segments are
    /// allowed.
    pub fn new(m: &M, segments: Vec<M::Elem>, point_tol: f64) -> Result<Self, GeometryError> {
        if segments.is_empty() {
            return Err(GeometryError::EmptyPath);
        }
        let mut length = 0.0;
        for (i, window) in segments.windows(2).enumerate() {
            let (_, end) = m.endpoints(&window[0]);
            let (start, _) = m.endpoints(&window[1]);
            let gap = m.distance(&end, &start);
            if gap > point_tol {
                return Err(GeometryError::JunctionMismatch { index: i, gap });
            }
        }
        for seg in &segments {
            if let Eval::Defined(l) = m.geodesic_length(seg) {
                length += l;
            }
        }
        Ok(Self { segments, length })
    }

    pub fn segments(&self) -> &[M::Elem] {
        &self.segments
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Collapses a piecewise path to the single class with the endpoints of
/// the whole path: deck classes add on the torus; on the sphere the result
/// is undefined if the overall endpoints are antipodal. Invariant under
/// refinement of the subdivision.
pub fn reduce_to_class<M: Manifold>(m: &M, path: &PiecewisePath<M>) -> Eval<M::Elem> {
    // assembled from overall endpoints and summed classes rather than by
    // folding products: an intermediate product may fail geodesic
    // uniqueness even though the reduced class is fine
    m.assemble_class(path.segments())
}
