//! Seeded random samplers and procedural test cochains.
//!
//! All randomness in the verification suites flows through one
//! [`ChaCha20Rng`] seeded from the run configuration, so every report is
//! reproducible. Sphere samplers reject configurations that come close to
//! an antipodal pair and count the rejections: the rejected fraction is an
//! empirical measure of the set on which the geodesic algebra is
//! undefined.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::geometry::{Sphere, SphereClass, SpherePoint, Torus, TorusClass, TorusPoint};
use crate::monoid::{AdditiveCochain, Eval, FiniteMonoid, Product};
use crate::tol::SAMPLER_ANTIPODAL_MARGIN;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Uniform point on the unit sphere.
pub fn sphere_point(rng: &mut ChaCha20Rng) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    SpherePoint::new(r * phi.cos(), r * phi.sin(), z).expect("unit vector")
}

/// A chain of points on the sphere with every pair clear of the antipodal
/// margin, plus the number of rejected draws.
pub struct SphereChain {
    pub points: Vec<SpherePoint>,
    pub rejected: usize,
}

pub fn sphere_point_chain(rng: &mut ChaCha20Rng, count: usize) -> SphereChain {
    let margin = std::f64::consts::PI - SAMPLER_ANTIPODAL_MARGIN;
    let mut rejected = 0;
    loop {
        let points: Vec<SpherePoint> = (0..count).map(|_| sphere_point(rng)).collect();
        let clear = points
            .iter()
            .enumerate()
            .all(|(i, p)| points[i + 1..].iter().all(|q| p.angle_to(q) < margin));
        if clear {
            return SphereChain { points, rejected };
        }
        rejected += 1;
    }
}

/// A composable chain of `count` sphere classes sharing consecutive
/// endpoints.
pub fn sphere_class_chain(
    rng: &mut ChaCha20Rng,
    sphere: &Sphere,
    count: usize,
) -> (Vec<SphereClass>, usize) {
    let chain = sphere_point_chain(rng, count + 1);
    let classes = chain
        .points
        .windows(2)
        .map(|w| {
            sphere
                .path_class(w[0], w[1])
                .expect_defined("chain points are pairwise non-antipodal")
        })
        .collect();
    (classes, chain.rejected)
}

pub fn torus_point(rng: &mut ChaCha20Rng, torus: &Torus) -> TorusPoint {
    let fr = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
    let xy = torus.lattice().from_fractional(fr);
    torus.point(xy[0], xy[1])
}

/// A composable chain of `count` torus classes with deck classes bounded
/// by `max_wind`.
pub fn torus_class_chain(
    rng: &mut ChaCha20Rng,
    torus: &Torus,
    count: usize,
    max_wind: i64,
) -> Vec<TorusClass> {
    let points: Vec<TorusPoint> = (0..=count).map(|_| torus_point(rng, torus)).collect();
    points
        .windows(2)
        .map(|w| {
            let class = [
                rng.gen_range(-max_wind..=max_wind),
                rng.gen_range(-max_wind..=max_wind),
            ];
            torus.path_class(w[0], w[1], class)
        })
        .collect()
}

/// Point within geodesic distance `radius` of `base`, area-uniform on the
/// spherical cap.
pub fn sphere_point_in_ball(rng: &mut ChaCha20Rng, base: &SpherePoint, radius: f64) -> SpherePoint {
    let (e1, e2) = Sphere::tangent_frame(base);
    let u: f64 = rng.gen_range(0.0..1.0);
    let colat = (1.0 - u * (1.0 - radius.cos())).acos();
    let lon: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let b = base.coords();
    let v = [
        b[0] * colat.cos() + (e1[0] * lon.cos() + e2[0] * lon.sin()) * colat.sin(),
        b[1] * colat.cos() + (e1[1] * lon.cos() + e2[1] * lon.sin()) * colat.sin(),
        b[2] * colat.cos() + (e1[2] * lon.cos() + e2[2] * lon.sin()) * colat.sin(),
    ];
    SpherePoint::new(v[0], v[1], v[2]).expect("unit vector")
}

/// Point whose nearest lift to `base_lift` is within `radius`.
pub fn torus_point_in_ball(
    rng: &mut ChaCha20Rng,
    torus: &Torus,
    base_lift: [f64; 2],
    radius: f64,
) -> TorusPoint {
    let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    torus.point(base_lift[0] + r * phi.cos(), base_lift[1] + r * phi.sin())
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Deterministic pseudo-random value in `[0, 1)` from a seed and a datum.
pub fn pseudo_value(seed: u64, data: &[u64]) -> f64 {
    let mut h = splitmix(seed ^ 0xD1B54A32D192ED03);
    for &word in data {
        h = splitmix(h ^ word);
    }
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn torus_class_words(pc: &TorusClass) -> [u64; 6] {
    let s = pc.start().ambient();
    let e = pc.end().ambient();
    let k = pc.class();
    [
        s[0].to_bits(),
        s[1].to_bits(),
        e[0].to_bits(),
        e[1].to_bits(),
        k[0] as u64,
        k[1] as u64,
    ]
}

fn sphere_class_words(pc: &SphereClass) -> [u64; 6] {
    let s = pc.start().coords();
    let e = pc.end().coords();
    [
        s[0].to_bits(),
        s[1].to_bits(),
        s[2].to_bits(),
        e[0].to_bits(),
        e[1].to_bits(),
        e[2].to_bits(),
    ]
}

/// A procedurally random additive cochain on torus classes: the value of a
/// tuple is a hash of the exact class data, so equal tuples evaluate
/// equal and the coboundary identities cancel exactly.
pub fn hash_cochain_torus(
    seed: u64,
    arity: usize,
    modulus: f64,
) -> AdditiveCochain<'static, TorusClass> {
    AdditiveCochain::new(arity, modulus, move |args: &[TorusClass]| {
        let mut words = Vec::with_capacity(args.len() * 6);
        for a in args {
            words.extend_from_slice(&torus_class_words(a));
        }
        Eval::Defined(pseudo_value(seed, &words) * 10.0 - 5.0)
    })
}

/// As [`hash_cochain_torus`], on sphere classes.
pub fn hash_cochain_sphere(
    seed: u64,
    arity: usize,
    modulus: f64,
) -> AdditiveCochain<'static, SphereClass> {
    AdditiveCochain::new(arity, modulus, move |args: &[SphereClass]| {
        let mut words = Vec::with_capacity(args.len() * 6);
        for a in args {
            words.extend_from_slice(&sphere_class_words(a));
        }
        Eval::Defined(pseudo_value(seed, &words) * 10.0 - 5.0)
    })
}

/// A random table-backed additive cochain on a finite monoid.
pub fn table_cochain(
    rng: &mut ChaCha20Rng,
    m: &FiniteMonoid,
    arity: usize,
    modulus: f64,
) -> AdditiveCochain<'static, usize> {
    let n = m.len();
    let size = n.pow(arity as u32);
    let values: Vec<f64> = (0..size).map(|_| rng.gen_range(-5.0..5.0)).collect();
    AdditiveCochain::new(arity, modulus, move |args: &[usize]| {
        let mut idx = 0;
        for &a in args {
            idx = idx * n + a;
        }
        Eval::Defined(values[idx])
    })
}

/// A random path monoid of a small quiver, truncated at a path length that
/// keeps the element count at or below `max_elems`. Exercises all three
/// product outcomes: concatenation, zero (tail/head mismatch), and
/// undefined (length overflow).
pub fn random_quiver_monoid(rng: &mut ChaCha20Rng, max_elems: usize) -> FiniteMonoid {
    assert!(max_elems >= 2);
    let vertices = rng.gen_range(1..=2usize);
    let arrow_count = rng.gen_range(1..=2usize);
    let arrows: Vec<(usize, usize)> = (0..arrow_count)
        .map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices)))
        .collect();

    // elements are vertices (trivial paths) and arrow words; grow by
    // length until the cap
    #[derive(Clone, PartialEq)]
    struct Path {
        tail: usize,
        head: usize,
        word: Vec<usize>,
    }
    let mut elems: Vec<Path> = (0..vertices)
        .map(|v| Path {
            tail: v,
            head: v,
            word: vec![],
        })
        .collect();
    let mut frontier: Vec<Path> = elems.clone();
    loop {
        let mut next = Vec::new();
        for p in &frontier {
            for (i, &(t, h)) in arrows.iter().enumerate() {
                if p.head == t {
                    let mut word = p.word.clone();
                    word.push(i);
                    next.push(Path {
                        tail: p.tail,
                        head: h,
                        word,
                    });
                }
            }
        }
        if next.is_empty() || elems.len() + next.len() > max_elems {
            break;
        }
        elems.extend(next.clone());
        frontier = next;
    }

    let names: Vec<String> = elems
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.word.is_empty() {
                format!("v{}", p.tail)
            } else {
                format!("p{i}")
            }
        })
        .collect();
    let mut entries = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            let outcome = if a.head != b.tail {
                Product::Zero
            } else {
                let mut word = a.word.clone();
                word.extend_from_slice(&b.word);
                match elems
                    .iter()
                    .position(|e| e.tail == a.tail && e.head == b.head && e.word == word)
                {
                    Some(k) => Product::Elem(k),
                    None => Product::Undefined, // concatenation beyond the cap
                }
            };
            entries.push((i, j, outcome));
        }
    }
    FiniteMonoid::from_entries(names, &entries, Product::Zero)
}
