//! Unit sphere backend.
//!
//! Points are unit 3-vectors; path classes are ordered non-antipodal point
//! pairs (the sphere is simply connected, so the class tag is trivial).
//! Shortest geodesics are minor great-circle arcs, unique exactly away
//! from antipodal pairs; the area form has modulus `4π` at unit scale.
//!
//! Signed triangle areas use the two-argument arctangent form of the
//! solid-angle formula, `Ω = 2·atan2(det[p,q,r], 1 + p·q + q·r + r·p)`,
//! which stays stable for thin triangles and, read modulo 4π, assigns the
//! correct hemisphere area `2π` to loops of minor arcs that wrap a full
//! great circle.

use crate::coeffs::ModReal;
use crate::monoid::{Eval, PartialMonoid, Product};
use crate::tol::{ANTIPODAL_ANGLE_TOL, POINT_TOL};

use super::{GeometryError, Manifold, TwoForm};

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: Vec3, k: f64) -> Vec3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn triple(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    dot(a, cross(b, c))
}

/// A point of the unit sphere; renormalized on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    v: Vec3,
}

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        let v = [x, y, z];
        if !v.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinitePoint);
        }
        let n = norm(v);
        if n <= 1e-12 {
            return Err(GeometryError::ZeroVector(n));
        }
        Ok(Self {
            v: scale(v, 1.0 / n),
        })
    }

    /// Point at the given colatitude (angle from the north pole) and
    /// longitude.
    pub fn from_colat_lon(colat: f64, lon: f64) -> Self {
        Self {
            v: [
                colat.sin() * lon.cos(),
                colat.sin() * lon.sin(),
                colat.cos(),
            ],
        }
    }

    pub fn north_pole() -> Self {
        Self { v: [0.0, 0.0, 1.0] }
    }

    pub fn coords(&self) -> Vec3 {
        self.v
    }

    /// Central angle to another point, computed from both the cross and
    /// dot products for accuracy near 0 and π.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        norm(cross(self.v, other.v)).atan2(dot(self.v, other.v))
    }

    pub fn is_antipodal_to(&self, other: &SpherePoint) -> bool {
        self.angle_to(other) > std::f64::consts::PI - ANTIPODAL_ANGLE_TOL
    }
}

/// A homotopy class of sphere paths: just the ordered endpoints, valid
/// only when they are not antipodal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereClass {
    start: SpherePoint,
    end: SpherePoint,
}

impl SphereClass {
    pub fn start(&self) -> SpherePoint {
        self.start
    }

    pub fn end(&self) -> SpherePoint {
        self.end
    }
}

/// A directed great-circle arc of arbitrary length: start point, unit
/// tangent at the start, and arc length.
#[derive(Debug, Clone, Copy)]
pub struct SphereGeodesic {
    start: SpherePoint,
    tangent: Vec3,
    length: f64,
}

impl SphereGeodesic {
    /// An arc from an explicit start and tangent direction; the tangent is
    /// projected orthogonal to the start and normalized.
    pub fn from_direction(
        start: SpherePoint,
        tangent: Vec3,
        length: f64,
    ) -> Result<Self, GeometryError> {
        assert!(length >= 0.0);
        let radial = dot(tangent, start.v);
        let t = add(tangent, scale(start.v, -radial));
        let n = norm(t);
        if n <= 1e-12 {
            return Err(GeometryError::ZeroVector(n));
        }
        Ok(Self {
            start,
            tangent: scale(t, 1.0 / n),
            length,
        })
    }

    pub fn start(&self) -> SpherePoint {
        self.start
    }

    pub fn tangent(&self) -> Vec3 {
        self.tangent
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Point at arc length `t` from the start.
    pub fn point_at(&self, t: f64) -> SpherePoint {
        SpherePoint {
            v: add(scale(self.start.v, t.cos()), scale(self.tangent, t.sin())),
        }
    }
}

/// The unit sphere.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sphere;

/// Signed solid angle of the geodesic triangle `(p, q, r)` with minor-arc
/// sides, in `(−2π, 2π]`; sign is that of `det[p q r]`. Undefined when two
/// vertices are antipodal.
pub(crate) fn signed_triangle(p: Vec3, q: Vec3, r: Vec3) -> Eval<f64> {
    let near_antipodal = |a: Vec3, b: Vec3| -> bool {
        norm(cross(a, b)).atan2(dot(a, b)) > std::f64::consts::PI - ANTIPODAL_ANGLE_TOL
    };
    if near_antipodal(p, q) || near_antipodal(q, r) || near_antipodal(r, p) {
        return Eval::Undefined;
    }
    let num = triple(p, q, r);
    let den = 1.0 + dot(p, q) + dot(q, r) + dot(r, p);
    Eval::Defined(2.0 * num.atan2(den))
}

impl Sphere {
    /// Path class between two points; `Undefined` when they are antipodal
    /// (no unique shortest geodesic).
    pub fn path_class(&self, start: SpherePoint, end: SpherePoint) -> Eval<SphereClass> {
        if start.is_antipodal_to(&end) {
            Eval::Undefined
        } else {
            Eval::Defined(SphereClass { start, end })
        }
    }

    /// Area integral of `form` over the oriented geodesic triangle
    /// `(p, q, r)`, reduced modulo the form modulus.
    pub fn triangle_integral(
        &self,
        form: &TwoForm,
        p: SpherePoint,
        q: SpherePoint,
        r: SpherePoint,
    ) -> Eval<ModReal> {
        signed_triangle(p.coords(), q.coords(), r.coords()).map(|a| form.apply(a))
    }

    /// An orthonormal tangent frame at `p`.
    pub fn tangent_frame(p: &SpherePoint) -> (Vec3, Vec3) {
        let v = p.v;
        let helper = if v[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = cross(v, helper);
        let e1 = scale(e1, 1.0 / norm(e1));
        let e2 = cross(v, e1);
        (e1, e2)
    }
}

impl PartialMonoid for Sphere {
    type Elem = SphereClass;

    fn product(&self, a: &SphereClass, b: &SphereClass) -> Product<SphereClass> {
        if self.distance(&a.end, &b.start) > POINT_TOL {
            return Product::Zero;
        }
        match self.path_class(a.start, b.end) {
            Eval::Defined(pc) => Product::Elem(pc),
            Eval::Undefined => Product::Undefined,
        }
    }
}

impl Manifold for Sphere {
    type Point = SpherePoint;
    type Geodesic = SphereGeodesic;

    fn modulus_unit(&self) -> f64 {
        4.0 * std::f64::consts::PI
    }

    fn endpoints(&self, pc: &SphereClass) -> (SpherePoint, SpherePoint) {
        (pc.start, pc.end)
    }

    fn distance(&self, p: &SpherePoint, q: &SpherePoint) -> f64 {
        p.angle_to(q)
    }

    fn injectivity_radius(&self, _p: &SpherePoint) -> f64 {
        std::f64::consts::PI
    }

    fn trivializer_radius_bound(&self, _p: &SpherePoint) -> f64 {
        // cone triangles over the ball must stay inside a hemisphere
        std::f64::consts::FRAC_PI_2
    }

    fn shortest_geodesic(&self, pc: &SphereClass) -> Eval<SphereGeodesic> {
        let p = pc.start;
        let q = pc.end;
        if p.is_antipodal_to(&q) {
            return Eval::Undefined;
        }
        let length = p.angle_to(&q);
        let radial = dot(q.v, p.v);
        let t = add(q.v, scale(p.v, -radial));
        let n = norm(t);
        let tangent = if n <= 1e-12 {
            // degenerate arc: any tangent will do, the arc has length ~0
            Sphere::tangent_frame(&p).0
        } else {
            scale(t, 1.0 / n)
        };
        Eval::Defined(SphereGeodesic {
            start: p,
            tangent,
            length,
        })
    }

    fn geodesic_length(&self, pc: &SphereClass) -> Eval<f64> {
        Eval::Defined(pc.start.angle_to(&pc.end))
    }

    fn reversed(&self, pc: &SphereClass) -> SphereClass {
        SphereClass {
            start: pc.end,
            end: pc.start,
        }
    }

    fn triangle_area(&self, a: &SphereClass, b: &SphereClass) -> Product<f64> {
        match self.product(a, b) {
            Product::Zero => Product::Zero,
            Product::Undefined => Product::Undefined,
            Product::Elem(_) => {
                match signed_triangle(a.start.coords(), a.end.coords(), b.end.coords()) {
                    Eval::Defined(v) => Product::Elem(v),
                    Eval::Undefined => Product::Undefined,
                }
            }
        }
    }

    /// Fans the polygon `gamma.start → gamma.end → ⋯arc points⋯ → arc(upto)`
    /// from `gamma.start`, subdividing the traveled arc into minor pieces.
    /// The subdivision count is bumped when an interior point falls too
    /// close to the fan point's antipode (a fan artifact, not a geometric
    /// failure); the closing edge to `arc(upto)` is a genuine shortest
    /// geodesic and makes the result undefined when it degenerates.
    fn swept_area(&self, gamma: &SphereClass, arc: &SphereGeodesic, upto: f64) -> Eval<f64> {
        assert!(
            (0.0..=arc.length + 1e-12).contains(&upto),
            "prefix length {upto} outside [0, {}]",
            arc.length
        );
        debug_assert!(
            self.distance(&gamma.end, &arc.start) <= 1e-6,
            "arc must start at gamma's end"
        );
        let apex = gamma.start;
        let tip = arc.point_at(upto);
        if apex.is_antipodal_to(&tip) {
            return Eval::Undefined;
        }
        // pieces short enough to be minor arcs, interior points clear of
        // the apex antipode
        let mut pieces = (upto / 0.8).ceil().max(1.0) as usize;
        let margin = std::f64::consts::PI - 1e-4;
        for _ in 0..64 {
            let clear = (1..pieces).all(|j| {
                let m = arc.point_at(upto * j as f64 / pieces as f64);
                apex.angle_to(&m) <= margin
            });
            if clear {
                break;
            }
            pieces += 1;
        }
        let mut chain = Vec::with_capacity(pieces + 2);
        chain.push(arc.start);
        for j in 1..pieces {
            chain.push(arc.point_at(upto * j as f64 / pieces as f64));
        }
        chain.push(tip);
        let mut total = 0.0;
        let mut prev = gamma.end;
        for point in chain {
            match signed_triangle(apex.coords(), prev.coords(), point.coords()) {
                Eval::Defined(v) => total += v,
                Eval::Undefined => return Eval::Undefined,
            }
            prev = point;
        }
        Eval::Defined(total)
    }

    fn cone_area(&self, base: &SpherePoint, radius: f64, pc: &SphereClass) -> Eval<f64> {
        if self.distance(base, &pc.start) > radius || self.distance(base, &pc.end) > radius {
            return Eval::Undefined;
        }
        signed_triangle(base.coords(), pc.start.coords(), pc.end.coords())
    }

    fn assemble_class(&self, segs: &[SphereClass]) -> Eval<SphereClass> {
        self.path_class(segs[0].start, segs[segs.len() - 1].end)
    }
}
