//! Named verification suites behind the `verify` CLI command.
//!
//! Each suite draws its samples from one seeded generator, measures the
//! worst residual of the identity it checks, and returns one
//! [`CheckReport`] per check. Undefined evaluations and sampler
//! rejections are counted, never silently dropped: the rejected fraction
//! doubles as an empirical measure of the antipodal set on the sphere.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::coeffs::{circular_distance, Weight};
use crate::deformation::Deformation;
use crate::geometry::{Lattice, Manifold, Sphere, SphereClass, Torus, TorusClass};
use crate::monoid::{
    coboundary_additive, is_cocycle_multiplicative, AdditiveCochain, Eval, FiniteMonoid, FormalSum,
    MultiplicativeCochain, PartialMonoid, Product,
};
use crate::sample;
use crate::tol;

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub samples: usize,
    pub undefined: usize,
}

impl CheckReport {
    fn from_residual(
        name: &str,
        residual: f64,
        tol: f64,
        samples: usize,
        undefined: usize,
    ) -> Self {
        Self {
            name: name.to_string(),
            passed: residual <= tol,
            residual,
            samples,
            undefined,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} residual={:.3e} samples={} undefined={}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.residual,
            self.samples,
            self.undefined
        )
    }
}

/// Sample count and RNG seed shared by every suite run.
#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
}

fn pair_weight_cochain<'d, M: Manifold + Sync>(
    d: &'d Deformation<'_, M>,
) -> MultiplicativeCochain<'d, M::Elem> {
    MultiplicativeCochain::new(2, move |args: &[M::Elem]| {
        match d.pair_weight(&args[0], &args[1]) {
            Product::Elem(w) => Eval::Defined(w),
            Product::Zero => Eval::Defined(Weight::one()),
            Product::Undefined => Eval::Undefined,
        }
    })
}

/// Worst circular residual of the additive cocycle identity
/// `δF(a,b,c) = F(b,c) − F(ab,c) + F(a,bc) − F(a,b) ≡ 0 (mod μ)` over the
/// given composable triples.
fn additive_cocycle_residual<M: Manifold>(
    d: &Deformation<'_, M>,
    triples: &[[M::Elem; 3]],
) -> (f64, usize, usize) {
    let m = d.manifold();
    let modulus = d.form().modulus();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut undefined = 0;
    for [a, b, c] in triples {
        let (ab, bc) = match (m.product(a, b), m.product(b, c)) {
            (Product::Elem(x), Product::Elem(y)) => (x, y),
            _ => {
                undefined += 1;
                continue;
            }
        };
        let terms = [
            d.area_cocycle(b, c),
            d.area_cocycle(&ab, c),
            d.area_cocycle(a, &bc),
            d.area_cocycle(a, b),
        ];
        let mut vals = Vec::with_capacity(4);
        for t in terms {
            match t {
                Product::Elem(x) => vals.push(x.value()),
                _ => break,
            }
        }
        if vals.len() < 4 {
            undefined += 1;
            continue;
        }
        let delta = vals[0] - vals[1] + vals[2] - vals[3];
        worst = worst.max(circular_distance(delta, modulus));
        checked += 1;
    }
    (worst, checked, undefined)
}

/// Cocycle suite on the sphere: the additive identity modulo `4π·|c|` and
/// the multiplicative identity for the exponentiated weights.
pub fn cocycle_sphere(quantum: i64, scale: f64, s: Sampling, tol: Option<f64>) -> Vec<CheckReport> {
    let sphere = Sphere;
    let d = Deformation::quantized(&sphere, scale, quantum).expect("sphere modulus is positive");
    let mut rng = sample::rng(s.seed);
    let mut triples = Vec::with_capacity(s.samples);
    let mut rejected = 0;
    for _ in 0..s.samples {
        let (chain, rej) = sample::sphere_class_chain(&mut rng, &sphere, 3);
        rejected += rej;
        triples.push([chain[0], chain[1], chain[2]]);
    }
    let (worst, checked, undef) = additive_cocycle_residual(&d, &triples);
    let additive = CheckReport::from_residual(
        "cocycle_additive_sphere",
        worst,
        tol.unwrap_or(tol::ADDITIVE_COCYCLE_TOL),
        checked,
        undef + rejected,
    );
    let f = pair_weight_cochain(&d);
    let check =
        is_cocycle_multiplicative(&sphere, &f, &triples, tol.unwrap_or(tol::COCYCLE_REL_TOL));
    let multiplicative = CheckReport {
        name: "cocycle_multiplicative_sphere".to_string(),
        passed: check.holds,
        residual: check.worst_rel,
        samples: check.checked,
        undefined: check.skipped + rejected,
    };
    vec![additive, multiplicative]
}

/// Cocycle suite on the torus; the additive identity holds exactly in `ℝ`.
pub fn cocycle_torus(
    lattice: Lattice,
    lambda: f64,
    scale: f64,
    s: Sampling,
    tol: Option<f64>,
) -> Vec<CheckReport> {
    let torus = Torus::new(lattice);
    let d = Deformation::continuous(&torus, scale, lambda).expect("torus modulus is zero");
    let mut rng = sample::rng(s.seed);
    let triples: Vec<[TorusClass; 3]> = (0..s.samples)
        .map(|_| {
            let chain = sample::torus_class_chain(&mut rng, &torus, 3, 2);
            [chain[0], chain[1], chain[2]]
        })
        .collect();
    let (worst, checked, undef) = additive_cocycle_residual(&d, &triples);
    let additive = CheckReport::from_residual(
        "cocycle_additive_torus",
        worst,
        tol.unwrap_or(tol::ADDITIVE_COCYCLE_TOL),
        checked,
        undef,
    );
    let f = pair_weight_cochain(&d);
    let check =
        is_cocycle_multiplicative(&torus, &f, &triples, tol.unwrap_or(tol::COCYCLE_REL_TOL));
    let multiplicative = CheckReport {
        name: "cocycle_multiplicative_torus".to_string(),
        passed: check.holds,
        residual: check.worst_rel,
        samples: check.checked,
        undefined: check.skipped,
    };
    vec![additive, multiplicative]
}

fn delta_squared_exhaustive(
    m: &FiniteMonoid,
    f: &AdditiveCochain<'_, usize>,
) -> (f64, usize, usize) {
    let df = coboundary_additive(m, f);
    let ddf = coboundary_additive(m, &df);
    let arity = ddf.arity();
    let n = m.len();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut undefined = 0;
    let mut tuple = vec![0usize; arity];
    let total = n.pow(arity as u32);
    for code in 0..total {
        let mut c = code;
        for slot in tuple.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        match ddf.eval(&tuple) {
            Eval::Defined(v) => {
                worst = worst.max(circular_distance(v.value(), v.modulus()));
                checked += 1;
            }
            Eval::Undefined => undefined += 1,
        }
    }
    (worst, checked, undefined)
}

/// `δδ = 0` on random table cochains over the built-in finite fixtures and
/// a handful of random quiver monoids, exhaustively over all tuples.
pub fn delta_squared_finite(s: Sampling, tol: Option<f64>) -> Vec<CheckReport> {
    let tol = tol.unwrap_or(tol::DELTA_SQUARED_TOL);
    let mut rng = sample::rng(s.seed);
    let mut fixtures: Vec<(String, FiniteMonoid)> = vec![
        ("quiver_a2".to_string(), FiniteMonoid::quiver_a2()),
        ("cyclic3".to_string(), FiniteMonoid::cyclic(3)),
        (
            "truncated_loop".to_string(),
            FiniteMonoid::truncated_loop(2),
        ),
    ];
    for i in 0..3 {
        fixtures.push((
            format!("random_quiver_{i}"),
            sample::random_quiver_monoid(&mut rng, 6),
        ));
    }
    let mut reports = Vec::new();
    for (name, m) in &fixtures {
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        let mut undefined = 0;
        for _ in 0..s.samples {
            for arity in [1usize, 2] {
                for modulus in [0.0, 4.0 * std::f64::consts::PI] {
                    let f = sample::table_cochain(&mut rng, m, arity, modulus);
                    let (w, c, u) = delta_squared_exhaustive(m, &f);
                    worst = worst.max(w);
                    checked += c;
                    undefined += u;
                }
            }
        }
        reports.push(CheckReport::from_residual(
            &format!("delta_squared_{name}"),
            worst,
            tol,
            checked,
            undefined,
        ));
    }
    reports
}

fn delta_squared_on_chains<M, FMk>(
    m: &M,
    make: FMk,
    chains3: &[Vec<M::Elem>],
    chains4: &[Vec<M::Elem>],
) -> (f64, usize, usize)
where
    M: PartialMonoid + Sync,
    FMk: Fn(usize) -> AdditiveCochain<'static, M::Elem>,
{
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut undefined = 0;
    let f1 = make(1);
    let ddf1 = coboundary_additive(m, &coboundary_additive(m, &f1));
    for chain in chains3 {
        match ddf1.eval(chain) {
            Eval::Defined(v) => {
                worst = worst.max(circular_distance(v.value(), v.modulus()));
                checked += 1;
            }
            Eval::Undefined => undefined += 1,
        }
    }
    let f2 = make(2);
    let ddf2 = coboundary_additive(m, &coboundary_additive(m, &f2));
    for chain in chains4 {
        match ddf2.eval(chain) {
            Eval::Defined(v) => {
                worst = worst.max(circular_distance(v.value(), v.modulus()));
                checked += 1;
            }
            Eval::Undefined => undefined += 1,
        }
    }
    (worst, checked, undefined)
}

/// `δδ = 0` for procedural cochains on sampled composable sphere chains.
pub fn delta_squared_paths_sphere(s: Sampling, tol: Option<f64>) -> Vec<CheckReport> {
    let sphere = Sphere;
    let mut rng = sample::rng(s.seed);
    let mut rejected = 0;
    let mut chains3 = Vec::with_capacity(s.samples);
    let mut chains4 = Vec::with_capacity(s.samples);
    for _ in 0..s.samples {
        let (c3, r3) = sample::sphere_class_chain(&mut rng, &sphere, 3);
        let (c4, r4) = sample::sphere_class_chain(&mut rng, &sphere, 4);
        rejected += r3 + r4;
        chains3.push(c3);
        chains4.push(c4);
    }
    let modulus = 4.0 * std::f64::consts::PI;
    let (worst, checked, undefined) = delta_squared_on_chains(
        &sphere,
        |arity| sample::hash_cochain_sphere(s.seed ^ 0x5EED, arity, modulus),
        &chains3,
        &chains4,
    );
    vec![CheckReport::from_residual(
        "delta_squared_paths_sphere",
        worst,
        tol.unwrap_or(tol::DELTA_SQUARED_TOL),
        checked,
        undefined + rejected,
    )]
}

/// `δδ = 0` for procedural cochains on sampled composable torus chains.
pub fn delta_squared_paths_torus(
    lattice: Lattice,
    s: Sampling,
    tol: Option<f64>,
) -> Vec<CheckReport> {
    let torus = Torus::new(lattice);
    let mut rng = sample::rng(s.seed);
    let chains3: Vec<Vec<TorusClass>> = (0..s.samples)
        .map(|_| sample::torus_class_chain(&mut rng, &torus, 3, 2))
        .collect();
    let chains4: Vec<Vec<TorusClass>> = (0..s.samples)
        .map(|_| sample::torus_class_chain(&mut rng, &torus, 4, 2))
        .collect();
    let (worst, checked, undefined) = delta_squared_on_chains(
        &torus,
        |arity| sample::hash_cochain_torus(s.seed ^ 0x5EED, arity, 0.0),
        &chains3,
        &chains4,
    );
    vec![CheckReport::from_residual(
        "delta_squared_paths_torus",
        worst,
        tol.unwrap_or(tol::DELTA_SQUARED_TOL),
        checked,
        undefined,
    )]
}

fn coefficient_residual<E: Clone + PartialEq + std::fmt::Debug>(
    a: &FormalSum<E>,
    b: &FormalSum<E>,
) -> f64 {
    let mut worst: f64 = 0.0;
    for (e, c) in a.terms() {
        worst = worst.max((c - b.coeff(e)).norm());
    }
    for (e, c) in b.terms() {
        worst = worst.max((c - a.coeff(e)).norm());
    }
    worst
}

fn associativity_residual<M: Manifold>(
    d: &Deformation<'_, M>,
    triples: &[[M::Elem; 3]],
    rng: &mut rand_chacha::ChaCha20Rng,
) -> (f64, usize, usize) {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut undefined = 0;
    for [a, b, c] in triples {
        let coeff = |rng: &mut rand_chacha::ChaCha20Rng| {
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        };
        let x = FormalSum::singleton(a.clone(), coeff(rng));
        let y = FormalSum::singleton(b.clone(), coeff(rng));
        let z = FormalSum::singleton(c.clone(), coeff(rng));
        let left = d.star(&x, &y).and_then(|xy| d.star(&xy, &z));
        let right = d.star(&y, &z).and_then(|yz| d.star(&x, &yz));
        match (left, right) {
            (Ok(l), Ok(r)) => {
                worst = worst.max(coefficient_residual(&l, &r));
                checked += 1;
            }
            _ => undefined += 1,
        }
    }
    (worst, checked, undefined)
}

/// Star-product associativity on sampled composable sphere triples.
pub fn associativity_sphere(
    quantum: i64,
    scale: f64,
    s: Sampling,
    tol: Option<f64>,
) -> Vec<CheckReport> {
    let sphere = Sphere;
    let d = Deformation::quantized(&sphere, scale, quantum).expect("sphere modulus is positive");
    let mut rng = sample::rng(s.seed);
    let mut rejected = 0;
    let triples: Vec<[SphereClass; 3]> = (0..s.samples)
        .map(|_| {
            let (chain, rej) = sample::sphere_class_chain(&mut rng, &sphere, 3);
            rejected += rej;
            [chain[0], chain[1], chain[2]]
        })
        .collect();
    let (worst, checked, undefined) = associativity_residual(&d, &triples, &mut rng);
    vec![CheckReport::from_residual(
        "star_associativity_sphere",
        worst,
        tol.unwrap_or(tol::ASSOCIATIVITY_TOL),
        checked,
        undefined + rejected,
    )]
}

/// Star-product associativity on sampled composable torus triples.
pub fn associativity_torus(
    lattice: Lattice,
    lambda: f64,
    scale: f64,
    s: Sampling,
    tol: Option<f64>,
) -> Vec<CheckReport> {
    let torus = Torus::new(lattice);
    let d = Deformation::continuous(&torus, scale, lambda).expect("torus modulus is zero");
    let mut rng = sample::rng(s.seed);
    let triples: Vec<[TorusClass; 3]> = (0..s.samples)
        .map(|_| {
            let chain = sample::torus_class_chain(&mut rng, &torus, 3, 2);
            [chain[0], chain[1], chain[2]]
        })
        .collect();
    let (worst, checked, undefined) = associativity_residual(&d, &triples, &mut rng);
    vec![CheckReport::from_residual(
        "star_associativity_torus",
        worst,
        tol.unwrap_or(tol::ASSOCIATIVITY_TOL),
        checked,
        undefined,
    )]
}

/// Global torus triviality on the universal cover: the cover trivializer
/// must split the pair weight of every sampled composable pair through
/// consistently lifted evaluations.
pub fn triviality_torus(
    lattice: Lattice,
    lambda: f64,
    scale: f64,
    s: Sampling,
    tol: Option<f64>,
) -> Vec<CheckReport> {
    let torus = Torus::new(lattice);
    let d = Deformation::continuous(&torus, scale, lambda).expect("torus modulus is zero");
    let g = d.cover_trivializer();
    let mut rng = sample::rng(s.seed);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut undefined = 0;
    for _ in 0..s.samples {
        let chain = sample::torus_class_chain(&mut rng, &torus, 2, 2);
        let (a, b) = (chain[0], chain[1]);
        let f = d.pair_weight(&a, &b);
        let dg = g.coboundary_on(&a, &b);
        match (f, dg) {
            (Product::Elem(f), Product::Elem(dg)) => {
                worst = worst.max(f.rel_distance(&dg));
                checked += 1;
            }
            _ => undefined += 1,
        }
    }
    vec![CheckReport::from_residual(
        "triviality_torus_cover",
        worst,
        tol.unwrap_or(tol::TRIVIALIZER_REL_TOL),
        checked,
        undefined,
    )]
}

/// Local triviality on the sphere: `δg = f` for the ball trivializer at
/// the north pole, over pairs sampled inside the ball.
pub fn local_triviality_sphere(
    quantum: i64,
    scale: f64,
    radius: f64,
    s: Sampling,
    tol: Option<f64>,
) -> Vec<CheckReport> {
    let sphere = Sphere;
    let d = Deformation::quantized(&sphere, scale, quantum).expect("sphere modulus is positive");
    let base = crate::geometry::SpherePoint::north_pole();
    let g = d
        .ball_trivializer(base, radius)
        .expect("radius below the hemisphere bound");
    let mut rng = sample::rng(s.seed);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut undefined = 0;
    for _ in 0..s.samples {
        let p = sample::sphere_point_in_ball(&mut rng, &base, radius);
        let q = sample::sphere_point_in_ball(&mut rng, &base, radius);
        let r = sample::sphere_point_in_ball(&mut rng, &base, radius);
        let (a, b) = match (sphere.path_class(p, q), sphere.path_class(q, r)) {
            (Eval::Defined(a), Eval::Defined(b)) => (a, b),
            _ => {
                undefined += 1;
                continue;
            }
        };
        match (d.pair_weight(&a, &b), g.coboundary_on(&a, &b)) {
            (Product::Elem(f), Product::Elem(dg)) => {
                worst = worst.max(f.rel_distance(&dg));
                checked += 1;
            }
            _ => {
                undefined += 1;
            }
        }
    }
    vec![CheckReport::from_residual(
        "local_triviality_sphere",
        worst,
        tol.unwrap_or(tol::BALL_TRIVIALIZER_REL_TOL),
        checked,
        undefined,
    )]
}

/// Local triviality on the torus: `δg = f` for the ball trivializer at the
/// origin, over in-ball pairs. `radius` defaults to 90% of the
/// injectivity radius.
pub fn local_triviality_torus(
    lattice: Lattice,
    lambda: f64,
    scale: f64,
    radius: Option<f64>,
    s: Sampling,
    tol: Option<f64>,
) -> Vec<CheckReport> {
    let torus = Torus::new(lattice);
    let d = Deformation::continuous(&torus, scale, lambda).expect("torus modulus is zero");
    let base = torus.point(0.0, 0.0);
    let bound = torus.trivializer_radius_bound(&base);
    let radius = radius.unwrap_or(0.9 * bound);
    let g = d
        .ball_trivializer(base, radius)
        .expect("radius below the injectivity bound");
    let base_lift = torus.lift_near(&base, [0.0, 0.0]);
    let mut rng = sample::rng(s.seed);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut undefined = 0;
    for _ in 0..s.samples {
        let pts: Vec<[f64; 2]> = (0..3)
            .map(|_| {
                let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                [base_lift[0] + r * phi.cos(), base_lift[1] + r * phi.sin()]
            })
            .collect();
        let a = torus.class_between_lifts(pts[0], pts[1]);
        let b = torus.class_between_lifts(pts[1], pts[2]);
        match (d.pair_weight(&a, &b), g.coboundary_on(&a, &b)) {
            (Product::Elem(f), Product::Elem(dg)) => {
                worst = worst.max(f.rel_distance(&dg));
                checked += 1;
            }
            _ => {
                undefined += 1;
            }
        }
    }
    vec![CheckReport::from_residual(
        "local_triviality_torus",
        worst,
        tol.unwrap_or(tol::TRIVIALIZER_REL_TOL),
        checked,
        undefined,
    )]
}
