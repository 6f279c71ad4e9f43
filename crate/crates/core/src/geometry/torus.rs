//! Flat torus backend: the plane modulo a lattice.
//!
//! Points are stored as canonical representatives in the fundamental
//! parallelogram. A path class carries its endpoints plus a deck vector in
//! `ℤ²`: the lift of the path starting at the canonical lift of its start
//! ends at `canonical(end) + Λ·class`. Every class has a unique straight
//! geodesic, so products are never undefined, and the area form has
//! modulus zero.

use crate::coeffs::ModReal;
use crate::monoid::{Eval, PartialMonoid, Product};
use crate::tol::POINT_TOL;

use super::{GeometryError, Manifold, TwoForm};

pub type Vec2 = [f64; 2];

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(a: Vec2, k: f64) -> Vec2 {
    [a[0] * k, a[1] * k]
}

fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Signed area of the planar triangle `(p, q, r)`, counterclockwise
/// positive.
pub fn signed_area(p: Vec2, q: Vec2, r: Vec2) -> f64 {
    0.5 * cross(sub(q, p), sub(r, p))
}

/// A rank-2 lattice `Λ ⊂ ℝ²` spanned by two independent basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    u: Vec2,
    v: Vec2,
    det: f64,
}

impl Lattice {
    pub fn new(u: Vec2, v: Vec2) -> Result<Self, GeometryError> {
        if !u.iter().chain(v.iter()).all(|x| x.is_finite()) {
            return Err(GeometryError::NonFinitePoint);
        }
        let det = cross(u, v);
        let scale = norm(u).max(norm(v));
        if det.abs() <= 1e-12 * scale * scale {
            return Err(GeometryError::DegenerateLattice(det.abs()));
        }
        Ok(Self { u, v, det })
    }

    pub fn unit_square() -> Self {
        Self::new([1.0, 0.0], [0.0, 1.0]).expect("unit square basis")
    }

    pub fn basis(&self) -> (Vec2, Vec2) {
        (self.u, self.v)
    }

    /// Coordinates of `xy` in the lattice basis.
    pub fn to_fractional(&self, xy: Vec2) -> Vec2 {
        [cross(xy, self.v) / self.det, cross(self.u, xy) / self.det]
    }

    pub fn from_fractional(&self, fr: Vec2) -> Vec2 {
        add(scale(self.u, fr[0]), scale(self.v, fr[1]))
    }

    /// Translates an ambient point by an integer lattice vector.
    pub fn translate(&self, xy: Vec2, class: [i64; 2]) -> Vec2 {
        add(
            xy,
            add(
                scale(self.u, class[0] as f64),
                scale(self.v, class[1] as f64),
            ),
        )
    }

    /// Canonical representative with fractional coordinates in `[0, 1)²`,
    /// together with the deck vector peeled off.
    fn reduce(&self, xy: Vec2) -> (Vec2, [i64; 2]) {
        let fr = self.to_fractional(xy);
        let k = [fr[0].floor(), fr[1].floor()];
        let mut canon_fr = [fr[0] - k[0], fr[1] - k[1]];
        let mut class = [k[0] as i64, k[1] as i64];
        // guard the upper seam after rounding
        for i in 0..2 {
            if canon_fr[i] >= 1.0 {
                canon_fr[i] -= 1.0;
                class[i] += 1;
            }
            if canon_fr[i] < 0.0 {
                canon_fr[i] += 1.0;
                class[i] -= 1;
            }
        }
        (self.from_fractional(canon_fr), class)
    }

    /// A shortest nonzero lattice vector, by Lagrange–Gauss reduction.
    pub fn shortest_vector(&self) -> Vec2 {
        let (mut a, mut b) = if norm(self.u) <= norm(self.v) {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        };
        loop {
            let m = ((b[0] * a[0] + b[1] * a[1]) / (a[0] * a[0] + a[1] * a[1])).round();
            let r = sub(b, scale(a, m));
            if norm(r) >= norm(a) {
                return a;
            }
            b = a;
            a = r;
        }
    }
}

/// A point of the torus, stored as the canonical ambient representative in
/// the fundamental parallelogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    xy: Vec2,
}

impl TorusPoint {
    pub fn ambient(&self) -> Vec2 {
        self.xy
    }
}

/// A homotopy class of torus paths: ordered endpoints plus a deck vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusClass {
    start: TorusPoint,
    end: TorusPoint,
    class: [i64; 2],
}

impl TorusClass {
    pub fn start(&self) -> TorusPoint {
        self.start
    }

    pub fn end(&self) -> TorusPoint {
        self.end
    }

    pub fn class(&self) -> [i64; 2] {
        self.class
    }
}

/// A directed straight segment in the universal cover, evaluated by arc
/// length from its start lift.
#[derive(Debug, Clone, Copy)]
pub struct TorusGeodesic {
    start: Vec2,
    direction: Vec2,
    length: f64,
}

impl TorusGeodesic {
    /// A ray from an explicit start lift; `direction` is normalized.
    pub fn from_direction(
        start: Vec2,
        direction: Vec2,
        length: f64,
    ) -> Result<Self, GeometryError> {
        let n = norm(direction);
        if n <= 1e-12 {
            return Err(GeometryError::ZeroVector(n));
        }
        assert!(length >= 0.0);
        Ok(Self {
            start,
            direction: scale(direction, 1.0 / n),
            length,
        })
    }

    pub fn start_lift(&self) -> Vec2 {
        self.start
    }

    pub fn direction(&self) -> Vec2 {
        self.direction
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Lift of the point at arc length `t`.
    pub fn lift_at(&self, t: f64) -> Vec2 {
        add(self.start, scale(self.direction, t))
    }
}

/// The flat torus `ℝ²/Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Torus {
    lattice: Lattice,
}

impl Torus {
    pub fn new(lattice: Lattice) -> Self {
        Self { lattice }
    }

    pub fn unit_square() -> Self {
        Self::new(Lattice::unit_square())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The torus point under a geodesic at arc length `t`.
    pub fn geodesic_point(&self, geo: &TorusGeodesic, t: f64) -> TorusPoint {
        let lift = geo.lift_at(t);
        self.point(lift[0], lift[1])
    }

    /// The torus point under an arbitrary ambient position.
    pub fn point(&self, x: f64, y: f64) -> TorusPoint {
        let (xy, _) = self.lattice.reduce([x, y]);
        TorusPoint { xy }
    }

    pub fn path_class(&self, start: TorusPoint, end: TorusPoint, class: [i64; 2]) -> TorusClass {
        TorusClass { start, end, class }
    }

    /// The class of the straight segment between two explicit lifts.
    pub fn class_between_lifts(&self, a: Vec2, b: Vec2) -> TorusClass {
        let (pa, ka) = self.lattice.reduce(a);
        let (pb, kb) = self.lattice.reduce(b);
        TorusClass {
            start: TorusPoint { xy: pa },
            end: TorusPoint { xy: pb },
            class: [kb[0] - ka[0], kb[1] - ka[1]],
        }
    }

    /// Canonical lift of a class's start point.
    pub fn lift_start(&self, pc: &TorusClass) -> Vec2 {
        pc.start.xy
    }

    /// Lift of a class's end point reached from the canonical start lift.
    pub fn lift_end(&self, pc: &TorusClass) -> Vec2 {
        self.lattice.translate(pc.end.xy, pc.class)
    }

    /// Displacement of the lifted segment; deck-invariant.
    pub fn chord(&self, pc: &TorusClass) -> Vec2 {
        sub(self.lift_end(pc), self.lift_start(pc))
    }

    /// Lift of `p` nearest to the reference lift `near`.
    pub fn lift_near(&self, p: &TorusPoint, near: Vec2) -> Vec2 {
        let mut best = p.xy;
        let mut best_d = f64::INFINITY;
        for i in -1..=1 {
            for j in -1..=1 {
                let cand = self.lattice.translate(p.xy, [i, j]);
                let d = norm(sub(cand, near));
                if d < best_d {
                    best_d = d;
                    best = cand;
                }
            }
        }
        // widen the search if the reference is far from the fundamental cell
        if best_d > 2.0 * (norm(self.lattice.u) + norm(self.lattice.v)) {
            let fr = self.lattice.to_fractional(sub(near, p.xy));
            let base = [fr[0].round() as i64, fr[1].round() as i64];
            for i in -1..=1 {
                for j in -1..=1 {
                    let cand = self.lattice.translate(p.xy, [base[0] + i, base[1] + j]);
                    let d = norm(sub(cand, near));
                    if d < best_d {
                        best_d = d;
                        best = cand;
                    }
                }
            }
        }
        best
    }

    /// Area integral of `form` over the lifted triangle `(p, q, r)`.
    pub fn triangle_integral_lifts(&self, form: &TwoForm, p: Vec2, q: Vec2, r: Vec2) -> ModReal {
        form.apply(signed_area(p, q, r))
    }

    /// Area integral over the triangle of points `p, q, r` lifted
    /// consistently: `q` by the class of the leg `p→q`, `r` by the
    /// composite class.
    pub fn triangle_integral(
        &self,
        form: &TwoForm,
        p: TorusPoint,
        q: TorusPoint,
        r: TorusPoint,
        class_pq: [i64; 2],
        class_qr: [i64; 2],
    ) -> ModReal {
        let p_lift = p.xy;
        let q_lift = self.lattice.translate(q.xy, class_pq);
        let r_lift = self
            .lattice
            .translate(r.xy, [class_pq[0] + class_qr[0], class_pq[1] + class_qr[1]]);
        self.triangle_integral_lifts(form, p_lift, q_lift, r_lift)
    }
}

impl PartialMonoid for Torus {
    type Elem = TorusClass;

    fn product(&self, a: &TorusClass, b: &TorusClass) -> Product<TorusClass> {
        if self.distance(&a.end, &b.start) > POINT_TOL {
            return Product::Zero;
        }
        Product::Elem(TorusClass {
            start: a.start,
            end: b.end,
            class: [a.class[0] + b.class[0], a.class[1] + b.class[1]],
        })
    }
}

impl Manifold for Torus {
    type Point = TorusPoint;
    type Geodesic = TorusGeodesic;

    fn modulus_unit(&self) -> f64 {
        0.0
    }

    fn endpoints(&self, pc: &TorusClass) -> (TorusPoint, TorusPoint) {
        (pc.start, pc.end)
    }

    fn distance(&self, p: &TorusPoint, q: &TorusPoint) -> f64 {
        let mut best = f64::INFINITY;
        for i in -1..=1 {
            for j in -1..=1 {
                let cand = self.lattice.translate(q.xy, [i, j]);
                best = best.min(norm(sub(cand, p.xy)));
            }
        }
        best
    }

    fn injectivity_radius(&self, _p: &TorusPoint) -> f64 {
        norm(self.lattice.shortest_vector()) / 2.0
    }

    fn trivializer_radius_bound(&self, p: &TorusPoint) -> f64 {
        self.injectivity_radius(p)
    }

    fn shortest_geodesic(&self, pc: &TorusClass) -> Eval<TorusGeodesic> {
        let start = self.lift_start(pc);
        let chord = self.chord(pc);
        let length = norm(chord);
        let direction = if length <= 1e-300 {
            [0.0, 0.0]
        } else {
            scale(chord, 1.0 / length)
        };
        Eval::Defined(TorusGeodesic {
            start,
            direction,
            length,
        })
    }

    fn geodesic_length(&self, pc: &TorusClass) -> Eval<f64> {
        Eval::Defined(norm(self.chord(pc)))
    }

    fn reversed(&self, pc: &TorusClass) -> TorusClass {
        TorusClass {
            start: pc.end,
            end: pc.start,
            class: [-pc.class[0], -pc.class[1]],
        }
    }

    fn triangle_area(&self, a: &TorusClass, b: &TorusClass) -> Product<f64> {
        self.product(a, b).map(|_| {
            // b's lift is carried to start at a's lifted end
            let p = self.lift_start(a);
            let q = self.lift_end(a);
            let r = self
                .lattice
                .translate(b.end.xy, [a.class[0] + b.class[0], a.class[1] + b.class[1]]);
            signed_area(p, q, r)
        })
    }

    fn swept_area(&self, gamma: &TorusClass, arc: &TorusGeodesic, upto: f64) -> Eval<f64> {
        assert!(
            (0.0..=arc.length + 1e-12).contains(&upto),
            "prefix length {upto} outside [0, {}]",
            arc.length
        );
        let p = self.lift_start(gamma);
        let q = self.lift_end(gamma);
        // rebase the arc at gamma's lifted end: only the direction matters
        let r = add(q, scale(arc.direction, upto));
        Eval::Defined(signed_area(p, q, r))
    }

    fn cone_area(&self, base: &TorusPoint, radius: f64, pc: &TorusClass) -> Eval<f64> {
        let b = base.xy;
        let p = self.lift_near(&pc.start, b);
        if norm(sub(p, b)) > radius {
            return Eval::Undefined;
        }
        let q = add(p, self.chord(pc));
        if norm(sub(q, b)) > radius {
            return Eval::Undefined;
        }
        Eval::Defined(signed_area(b, p, q))
    }

    fn assemble_class(&self, segs: &[TorusClass]) -> Eval<TorusClass> {
        let mut class = [0i64; 2];
        for seg in segs {
            class[0] += seg.class[0];
            class[1] += seg.class[1];
        }
        Eval::Defined(TorusClass {
            start: segs[0].start,
            end: segs[segs.len() - 1].end,
            class,
        })
    }
}
