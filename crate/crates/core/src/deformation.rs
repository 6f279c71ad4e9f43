//! The geometric deformation layer: the additive area cocycle on path
//! classes, its exponentiated weight family, the star product on formal
//! sums, and trivializing 1-cochains.
//!
//! A [`Deformation`] bundles a backend, an area form, and a mode from the
//! matching family — a continuous coupling λ when the form modulus is
//! zero (torus), a quantum number n when it is positive (sphere). The
//! additive cocycle of a composable pair is the integral of the form over
//! the triangle spanned by the two class geodesics and the product
//! geodesic; the weight of the pair is its exponential.

use thiserror::Error;

use crate::coeffs::{exp_weight, CoeffsError, DeformationMode, ModReal, Weight};
use crate::geometry::{signed_area, Manifold, Torus, TorusClass, TwoForm};
use crate::monoid::{deformed_product, Eval, FormalSum, PartialMonoid, Product, UndefinedPairs};

#[derive(Debug, Error)]
pub enum DeformationError {
    #[error(transparent)]
    Mode(#[from] CoeffsError),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("ball radius {radius} is not below the admissible bound {bound}")]
    RadiusTooLarge { radius: f64, bound: f64 },
    #[error("ball radius must be positive, got {0}")]
    NonPositiveRadius(f64),
}

/// A coherent deformation of the path algebra of one backend.
pub struct Deformation<'m, M: Manifold> {
    manifold: &'m M,
    form: TwoForm,
    mode: DeformationMode,
}

impl<'m, M: Manifold> Deformation<'m, M> {
    /// Validates that the mode matches the modulus of the form.
    pub fn new(
        manifold: &'m M,
        form: TwoForm,
        mode: DeformationMode,
    ) -> Result<Self, DeformationError> {
        mode.check_modulus(form.modulus())?;
        Ok(Self {
            manifold,
            form,
            mode,
        })
    }

    /// Continuous family at form scale `scale` with real coupling λ.
    pub fn continuous(manifold: &'m M, scale: f64, lambda: f64) -> Result<Self, DeformationError> {
        let form = manifold.area_form(scale)?;
        Self::new(manifold, form, DeformationMode::coupling(lambda))
    }

    /// Quantized family at form scale `scale` with quantum number `n`.
    pub fn quantized(manifold: &'m M, scale: f64, n: i64) -> Result<Self, DeformationError> {
        let form = manifold.area_form(scale)?;
        Self::new(manifold, form, DeformationMode::quantum(n))
    }

    pub fn manifold(&self) -> &'m M {
        self.manifold
    }

    pub fn form(&self) -> &TwoForm {
        &self.form
    }

    pub fn mode(&self) -> &DeformationMode {
        &self.mode
    }

    /// The additive 2-cocycle: the form integrated over the triangle of
    /// `a`, `b` and their product geodesic, reduced modulo the form
    /// modulus. `Zero` on mismatched endpoints, `Undefined` when a
    /// geodesic fails uniqueness.
    pub fn area_cocycle(&self, a: &M::Elem, b: &M::Elem) -> Product<ModReal> {
        self.manifold
            .triangle_area(a, b)
            .map(|raw| self.form.apply(raw))
    }

    /// The multiplicative weight of a composable pair, `exp` of the area
    /// cocycle through the deformation mode. Unit modulus in the quantized
    /// case.
    pub fn pair_weight(&self, a: &M::Elem, b: &M::Elem) -> Product<Weight> {
        self.area_cocycle(a, b)
            .map(|x| exp_weight(&self.mode, &x).expect("mode validated against form modulus"))
    }

    /// The deformed product `x ⋆ y` on formal sums, weighting each basis
    /// concatenation by [`Deformation::pair_weight`].
    pub fn star(
        &self,
        x: &FormalSum<M::Elem>,
        y: &FormalSum<M::Elem>,
    ) -> Result<FormalSum<M::Elem>, UndefinedPairs> {
        deformed_product(
            self.manifold,
            |a: &M::Elem, b: &M::Elem| match self.pair_weight(a, b) {
                Product::Elem(w) => Eval::Defined(w),
                Product::Zero => Eval::Defined(Weight::one()),
                Product::Undefined => Eval::Undefined,
            },
            x,
            y,
        )
    }

    /// Weight carried by a particle that traversed `gamma` and has covered
    /// arc length `upto` of the geodesic `arc`: the weight of the pair
    /// (`gamma`, prefix of `arc`), with the prefix entering through its
    /// actual traveled trace.
    pub fn memory_weight(&self, gamma: &M::Elem, arc: &M::Geodesic, upto: f64) -> Eval<Weight> {
        self.manifold.swept_area(gamma, arc, upto).map(|raw| {
            exp_weight(&self.mode, &self.form.apply(raw))
                .expect("mode validated against form modulus")
        })
    }

    /// As [`Deformation::memory_weight`], but also returning the reduced
    /// additive cocycle value.
    pub fn memory_weight_with_area(
        &self,
        gamma: &M::Elem,
        arc: &M::Geodesic,
        upto: f64,
    ) -> Eval<(ModReal, Weight)> {
        self.manifold.swept_area(gamma, arc, upto).map(|raw| {
            let x = self.form.apply(raw);
            let w = exp_weight(&self.mode, &x).expect("mode validated against form modulus");
            (x, w)
        })
    }

    /// Trivializing 1-cochain on a geodesic ball: valid for classes whose
    /// endpoints stay within `radius` of `base`, which must be below the
    /// backend's admissible bound.
    pub fn ball_trivializer(
        &self,
        base: M::Point,
        radius: f64,
    ) -> Result<BallTrivializer<'m, '_, M>, DeformationError> {
        if radius <= 0.0 {
            return Err(DeformationError::NonPositiveRadius(radius));
        }
        let bound = self.manifold.trivializer_radius_bound(&base);
        if radius >= bound {
            return Err(DeformationError::RadiusTooLarge { radius, bound });
        }
        Ok(BallTrivializer {
            deformation: self,
            base,
            radius,
        })
    }
}

impl<'m> Deformation<'m, Torus> {
    /// The cover trivializer exhibiting the torus deformation as globally
    /// trivial on the universal cover.
    pub fn cover_trivializer(&self) -> CoverTrivializer<'m, '_> {
        CoverTrivializer { deformation: self }
    }
}

/// Local triviality data: `g(pc) = exp` of the form integrated over the
/// cone triangle (base, start, end). Within the ball every composable pair
/// satisfies `δg = f` because the four cone/pair triangles close up into a
/// boundary.
pub struct BallTrivializer<'m, 'd, M: Manifold> {
    deformation: &'d Deformation<'m, M>,
    base: M::Point,
    radius: f64,
}

impl<'m, 'd, M: Manifold> BallTrivializer<'m, 'd, M> {
    pub fn base(&self) -> &M::Point {
        &self.base
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `g` on one class; `Undefined` outside the validity ball.
    pub fn weight(&self, pc: &M::Elem) -> Eval<Weight> {
        let d = self.deformation;
        d.manifold
            .cone_area(&self.base, self.radius, pc)
            .map(|raw| {
                exp_weight(&d.mode, &d.form.apply(raw))
                    .expect("mode validated against form modulus")
            })
    }

    /// `(δg)(a, b) = g(a)·g(b)/g(ab)`, defined when all three evaluations
    /// stay inside the ball.
    pub fn coboundary_on(&self, a: &M::Elem, b: &M::Elem) -> Product<Weight> {
        let ab = match self.deformation.manifold.product(a, b) {
            Product::Elem(p) => p,
            Product::Zero => return Product::Zero,
            Product::Undefined => return Product::Undefined,
        };
        let (ga, gb, gab) = match (self.weight(a), self.weight(b), self.weight(&ab)) {
            (Eval::Defined(x), Eval::Defined(y), Eval::Defined(z)) => (x, y, z),
            _ => return Product::Undefined,
        };
        Product::Elem(ga * gb / gab)
    }
}

/// Global triviality of the torus deformation, realized where it actually
/// lives: on the universal cover. `g` is a 1-cochain on lifted segments,
/// `g(p̃, q̃) = exp(λ·c·area(O, p̃, q̃))` with a fixed origin `O`; for any
/// composable pair of torus classes, evaluating `g` on the consistently
/// lifted configuration satisfies `δg = f` exactly by shoelace
/// additivity. Evaluation on a bare class uses its canonical lift.
pub struct CoverTrivializer<'m, 'd> {
    deformation: &'d Deformation<'m, Torus>,
}

impl<'m, 'd> CoverTrivializer<'m, 'd> {
    /// `g` on an explicit lifted segment.
    pub fn weight_for_lifts(&self, a: [f64; 2], b: [f64; 2]) -> Weight {
        let d = self.deformation;
        let area = signed_area([0.0, 0.0], a, b);
        exp_weight(&d.mode, &d.form.apply(area)).expect("torus form has modulus zero")
    }

    /// `g` on a class through its canonical lift.
    pub fn weight_for_class(&self, pc: &TorusClass) -> Weight {
        let t = self.deformation.manifold();
        self.weight_for_lifts(t.lift_start(pc), t.lift_end(pc))
    }

    /// `(δg)(a, b)` with `b` lifted in the context of `a` (starting at
    /// `a`'s lifted end), the configuration on which the product triangle
    /// is computed.
    pub fn coboundary_on(&self, a: &TorusClass, b: &TorusClass) -> Product<Weight> {
        let t = self.deformation.manifold();
        match t.product(a, b) {
            Product::Elem(_) => {}
            Product::Zero => return Product::Zero,
            Product::Undefined => return Product::Undefined,
        }
        let p = t.lift_start(a);
        let q = t.lift_end(a);
        let r = t.lattice().translate(
            b.end().ambient(),
            [a.class()[0] + b.class()[0], a.class()[1] + b.class()[1]],
        );
        let ga = self.weight_for_lifts(p, q);
        let gb = self.weight_for_lifts(q, r);
        let gab = self.weight_for_lifts(p, r);
        Product::Elem(ga * gb / gab)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Sphere, SphereGeodesic, SpherePoint};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn sph(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(x, y, z).unwrap()
    }

    #[test]
    fn mode_and_modulus_must_match() {
        let s = Sphere;
        let form = s.area_form(1.0).unwrap();
        assert!(Deformation::new(&s, form, DeformationMode::coupling(0.5)).is_err());
        assert!(Deformation::new(&s, form, DeformationMode::quantum(1)).is_ok());

        let t = Torus::unit_square();
        let form = t.area_form(1.0).unwrap();
        assert!(Deformation::new(&t, form, DeformationMode::quantum(1)).is_err());
        assert!(Deformation::new(&t, form, DeformationMode::coupling(0.5)).is_ok());
    }

    #[test]
    fn octant_pair_weight() {
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 1).unwrap();
        let a = s
            .path_class(sph(0.0, 0.0, 1.0), sph(1.0, 0.0, 0.0))
            .defined()
            .unwrap();
        let b = s
            .path_class(sph(1.0, 0.0, 0.0), sph(0.0, 1.0, 0.0))
            .defined()
            .unwrap();
        match d.area_cocycle(&a, &b) {
            Product::Elem(x) => assert_abs_diff_eq!(x.value(), FRAC_PI_2, epsilon = 1e-12),
            other => panic!("expected value, got {other:?}"),
        }
        match d.pair_weight(&a, &b) {
            Product::Elem(w) => {
                assert_abs_diff_eq!(w.re(), FRAC_PI_4.cos(), epsilon = 1e-12);
                assert_abs_diff_eq!(w.im(), FRAC_PI_4.sin(), epsilon = 1e-12);
            }
            other => panic!("expected weight, got {other:?}"),
        }
    }

    #[test]
    fn zero_coupling_is_the_undeformed_algebra() {
        let t = Torus::unit_square();
        let d = Deformation::continuous(&t, 1.0, 0.0).unwrap();
        let a = t.path_class(t.point(0.1, 0.2), t.point(0.8, 0.7), [1, -1]);
        let b = t.path_class(t.point(0.8, 0.7), t.point(0.4, 0.9), [0, 2]);
        match d.pair_weight(&a, &b) {
            Product::Elem(w) => assert_eq!(w, Weight::one()),
            other => panic!("expected weight, got {other:?}"),
        }
    }

    #[test]
    fn star_on_basis_elements() {
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 1).unwrap();
        let a = s
            .path_class(sph(0.0, 0.0, 1.0), sph(1.0, 0.0, 0.0))
            .defined()
            .unwrap();
        let b = s
            .path_class(sph(1.0, 0.0, 0.0), sph(0.0, 1.0, 0.0))
            .defined()
            .unwrap();
        let x = FormalSum::singleton(a, Complex64::new(2.0, 0.0));
        let y = FormalSum::singleton(b, Complex64::new(0.0, 3.0));
        let xy = d.star(&x, &y).unwrap();
        assert_eq!(xy.len(), 1);
        let ab = s.product(&a, &b).into_elem().unwrap();
        let expect = Complex64::new(2.0, 0.0)
            * Complex64::new(0.0, 3.0)
            * Complex64::from_polar(1.0, FRAC_PI_4);
        assert!((xy.coeff(&ab) - expect).norm() < 1e-12);
    }

    #[test]
    fn straight_continuation_carries_no_weight() {
        let t = Torus::unit_square();
        let d = Deformation::continuous(&t, 1.0, 0.7).unwrap();
        // b continues a exactly: its chord is a positive multiple of a's
        let p = [0.05, 0.1];
        let q = [0.45, 0.4];
        let r = [0.85, 0.7];
        let a = t.class_between_lifts(p, q);
        let b = t.class_between_lifts(q, r);
        match d.area_cocycle(&a, &b) {
            Product::Elem(x) => assert!(x.value().abs() < 1e-12),
            other => panic!("expected value, got {other:?}"),
        }
    }

    #[test]
    fn mirrored_deflection_inverts_the_cocycle() {
        let t = Torus::unit_square();
        let d = Deformation::continuous(&t, 1.0, 1.0).unwrap();
        let a = t.class_between_lifts([0.1, 0.1], [0.5, 0.3]);
        let b = t.class_between_lifts([0.5, 0.3], [0.6, 0.8]);
        // reflect b's endpoint across the line of a
        let dir = [0.4f64, 0.2];
        let n = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
        let u = [dir[0] / n, dir[1] / n];
        let rel = [0.1, 0.5];
        let along = rel[0] * u[0] + rel[1] * u[1];
        let mirrored = [
            2.0 * along * u[0] - rel[0] + 0.5,
            2.0 * along * u[1] - rel[1] + 0.3,
        ];
        let b_mirror = t.class_between_lifts([0.5, 0.3], mirrored);
        let x = d.area_cocycle(&a, &b).into_elem().unwrap().value();
        let y = d.area_cocycle(&a, &b_mirror).into_elem().unwrap().value();
        assert_abs_diff_eq!(x, -y, epsilon = 1e-12);
    }

    #[test]
    fn memory_weight_is_one_at_the_start() {
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 2).unwrap();
        let pole = sph(0.0, 0.0, 1.0);
        let q = sph(1.0, 0.0, 0.0);
        let gamma = s.path_class(pole, q).defined().unwrap();
        let arc = SphereGeodesic::from_direction(q, [0.0, 1.0, 0.0], PI).unwrap();
        match d.memory_weight(&gamma, &arc, 0.0) {
            Eval::Defined(w) => assert!(w.rel_distance(&Weight::one()) < 1e-12),
            Eval::Undefined => panic!("zero prefix must be defined"),
        }
    }

    #[test]
    fn torus_memory_weight_on_straight_rays_is_one() {
        let t = Torus::unit_square();
        let d = Deformation::continuous(&t, 1.0, 0.9).unwrap();
        let gamma = t.class_between_lifts([0.1, 0.1], [0.5, 0.3]);
        let arc =
            crate::geometry::TorusGeodesic::from_direction([0.5, 0.3], [0.4, 0.2], 3.0).unwrap();
        for x in [0.0, 0.7, 1.9, 3.0] {
            let w = d
                .memory_weight(&gamma, &arc, x)
                .expect_defined("torus memory weights are total");
            assert!(w.rel_distance(&Weight::one()) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn cover_trivializer_splits_the_cocycle() {
        let t = Torus::unit_square();
        let d = Deformation::continuous(&t, 1.0, 0.6).unwrap();
        let g = d.cover_trivializer();
        let a = t.path_class(t.point(0.1, 0.7), t.point(0.9, 0.2), [2, -1]);
        let b = t.path_class(t.point(0.9, 0.2), t.point(0.3, 0.3), [0, 1]);
        let f = d.pair_weight(&a, &b).into_elem().unwrap();
        let dg = g.coboundary_on(&a, &b).into_elem().unwrap();
        assert!(dg.rel_distance(&f) < 1e-12);
    }

    #[test]
    fn origin_area_cochain_has_the_triangle_as_coboundary() {
        // the 1-cochain G(pc) = area(O, start lift, end lift) has
        // δG(a, b) equal to the lifted triangle area whenever b's
        // canonical lift agrees with its in-context lift (a.class = 0)
        use crate::monoid::{coboundary_additive, AdditiveCochain};
        let t = Torus::unit_square();
        let d = Deformation::continuous(&t, 1.0, 1.0).unwrap();
        let g = AdditiveCochain::new(1, 0.0, |args: &[TorusClass]| {
            let t = Torus::unit_square();
            Eval::Defined(signed_area(
                [0.0, 0.0],
                t.lift_start(&args[0]),
                t.lift_end(&args[0]),
            ))
        });
        let dg = coboundary_additive(&t, &g);
        let a = t.path_class(t.point(0.2, 0.6), t.point(0.9, 0.1), [0, 0]);
        let b = t.path_class(t.point(0.9, 0.1), t.point(0.4, 0.8), [1, -2]);
        let lhs = dg.eval(&[a, b]).defined().unwrap().value();
        let rhs = d.area_cocycle(&a, &b).into_elem().unwrap().value();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn cover_trivializer_degenerate_cases() {
        let t = Torus::unit_square();
        // a null path carries weight one
        let d = Deformation::continuous(&t, 1.0, 0.9).unwrap();
        let g = d.cover_trivializer();
        let p = t.point(0.3, 0.8);
        let null = t.path_class(p, p, [0, 0]);
        assert!(g.weight_for_class(&null).rel_distance(&Weight::one()) < 1e-12);
        // at zero coupling the trivializer is identically one
        let d0 = Deformation::continuous(&t, 1.0, 0.0).unwrap();
        let g0 = d0.cover_trivializer();
        let pc = t.path_class(t.point(0.1, 0.4), t.point(0.7, 0.2), [2, 1]);
        assert_eq!(g0.weight_for_class(&pc), Weight::one());
    }

    #[test]
    fn collinear_pairs_through_the_base_are_flat() {
        // three points on one meridian through the base: every triangle in
        // δg and in f is degenerate, so both sides are one
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 3).unwrap();
        let base = SpherePoint::north_pole();
        let g = d.ball_trivializer(base, 1.2).unwrap();
        let p = SpherePoint::from_colat_lon(0.3, 0.7);
        let q = SpherePoint::from_colat_lon(0.6, 0.7);
        let r = SpherePoint::from_colat_lon(1.0, 0.7);
        let a = s.path_class(p, q).defined().unwrap();
        let b = s.path_class(q, r).defined().unwrap();
        let f = d.pair_weight(&a, &b).into_elem().unwrap();
        let dg = g.coboundary_on(&a, &b).into_elem().unwrap();
        assert!(f.rel_distance(&Weight::one()) < 1e-12);
        assert!(dg.rel_distance(&Weight::one()) < 1e-12);
    }

    #[test]
    fn ball_trivializer_factors_when_based_at_the_junction() {
        // with the base at the shared endpoint, g(a) = g(b) = 1 and the
        // whole weight sits in 1/g(ab)
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 2).unwrap();
        let p = SpherePoint::from_colat_lon(0.7, 0.1);
        let q = SpherePoint::from_colat_lon(0.4, 1.0);
        let r = SpherePoint::from_colat_lon(0.8, 2.1);
        let g = d.ball_trivializer(q, 1.4).unwrap();
        let a = s.path_class(p, q).defined().unwrap();
        let b = s.path_class(q, r).defined().unwrap();
        assert!(g.weight(&a).defined().unwrap().rel_distance(&Weight::one()) < 1e-12);
        assert!(g.weight(&b).defined().unwrap().rel_distance(&Weight::one()) < 1e-12);
        let f = d.pair_weight(&a, &b).into_elem().unwrap();
        let dg = g.coboundary_on(&a, &b).into_elem().unwrap();
        assert!(f.rel_distance(&dg) < 1e-10);
    }

    #[test]
    fn ball_trivializer_rejects_oversized_radii() {
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 1).unwrap();
        assert!(d.ball_trivializer(sph(0.0, 0.0, 1.0), FRAC_PI_2).is_err());
        assert!(d.ball_trivializer(sph(0.0, 0.0, 1.0), 1.0).is_ok());

        let t = Torus::unit_square();
        let dt = Deformation::continuous(&t, 1.0, 1.0).unwrap();
        assert!(dt.ball_trivializer(t.point(0.0, 0.0), 0.5).is_err());
        assert!(dt.ball_trivializer(t.point(0.0, 0.0), 0.4).is_ok());
    }

    #[test]
    fn ball_trivializer_is_undefined_outside_the_ball() {
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 1).unwrap();
        let g = d.ball_trivializer(sph(0.0, 0.0, 1.0), 0.5).unwrap();
        let inside = s
            .path_class(
                SpherePoint::from_colat_lon(0.2, 0.0),
                SpherePoint::from_colat_lon(0.3, 1.0),
            )
            .defined()
            .unwrap();
        assert!(g.weight(&inside).is_defined());
        let outside = s
            .path_class(
                SpherePoint::from_colat_lon(0.2, 0.0),
                SpherePoint::from_colat_lon(1.2, 1.0),
            )
            .defined()
            .unwrap();
        assert_eq!(g.weight(&outside), Eval::Undefined);
    }

    #[test]
    fn ball_trivializer_splits_in_ball_pairs() {
        let s = Sphere;
        let d = Deformation::quantized(&s, 1.0, 1).unwrap();
        let g = d.ball_trivializer(sph(0.0, 0.0, 1.0), 1.0).unwrap();
        let p = SpherePoint::from_colat_lon(0.4, 0.3);
        let q = SpherePoint::from_colat_lon(0.8, 1.4);
        let r = SpherePoint::from_colat_lon(0.6, 2.8);
        let a = s.path_class(p, q).defined().unwrap();
        let b = s.path_class(q, r).defined().unwrap();
        let f = d.pair_weight(&a, &b).into_elem().unwrap();
        let dg = g.coboundary_on(&a, &b).into_elem().unwrap();
        assert!(dg.rel_distance(&f) < 1e-10);
    }
}
