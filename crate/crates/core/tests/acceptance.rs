//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its measured residual (`cargo test --test acceptance --
//! --nocapture` shows all lines).
//!
//! Criterion 12 checks the closed-form signed triangle areas against an
//! independent oracle: adaptive Simpson integration of the pulled-back
//! area form over the cone filling of the triangle, with derivatives by
//! central differences. The oracle shares no code with the library's area
//! path.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use pathdeform::coeffs::{circular_distance, exp_weight, DeformationMode, ModReal};
use pathdeform::deformation::Deformation;
use pathdeform::geometry::{Lattice, Manifold, Sphere, Torus};
use pathdeform::monoid::Product;
use pathdeform::sample;
use pathdeform::scenarios::{deflection_table, equator_trace, EquatorTraceConfig};
use pathdeform::verify::{self, Sampling};
use pathdeform::Weight;

fn report(name: &str, passed: bool, detail: &str) {
    println!("{name}: {} {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "{name}: {detail}");
}

fn trace_cfg(colatitude: f64, quantum: i64, steps: usize) -> EquatorTraceConfig {
    EquatorTraceConfig {
        colatitude,
        quantum,
        steps,
        scale: 1.0,
    }
}

#[test]
fn acceptance_01_sphere_modulus_and_quantization() {
    let sphere = Sphere;
    let form = sphere.area_form(1.0).unwrap();
    assert_eq!(form.modulus(), 4.0 * PI);
    let mut rng = sample::rng(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n: i64 = rng.gen_range(-4..=4);
        let x: f64 = rng.gen_range(0.0..4.0 * PI);
        let w = exp_weight(&DeformationMode::quantum(n), &ModReal::new(x, 4.0 * PI)).unwrap();
        let direct = Complex64::from_polar(1.0, 0.5 * n as f64 * x);
        let rel = (w.as_complex() - direct).norm() / direct.norm();
        worst = worst.max(rel);
    }
    report(
        "criterion 01 (sphere modulus 4pi, weights exp((n/2)i*area))",
        worst < 1e-12,
        &format!("residual={worst:.3e} samples=1000"),
    );
}

#[test]
fn acceptance_02_equator_loop_total_phase() {
    let mut worst: f64 = 0.0;
    for n in -3..=3i64 {
        for colat in [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let trace = equator_trace(&trace_cfg(colat, n, 720)).unwrap();
            let err = (trace.total_phase - n as f64 * PI).abs();
            worst = worst.max(err);
        }
    }
    report(
        "criterion 02 (equator loop total phase n*pi)",
        worst < 1e-6,
        &format!("residual={worst:.3e} samples=28"),
    );
}

#[test]
fn acceptance_03_pole_linearity_and_interior_curvature() {
    let mut worst_pole: f64 = 0.0;
    for n in [1i64, -2, 3] {
        let trace = equator_trace(&trace_cfg(0.0, n, 720)).unwrap();
        for row in &trace.rows {
            let v = row.values.expect("pole trace is total");
            worst_pole = worst_pole.max((v.phase - 0.5 * n as f64 * row.longitude).abs());
        }
    }

    // best affine fit for the quarter-colatitude start must miss badly
    let trace = equator_trace(&trace_cfg(FRAC_PI_4, 1, 720)).unwrap();
    let pts: Vec<(f64, f64)> = trace
        .rows
        .iter()
        .filter_map(|r| r.values.map(|v| (r.longitude, v.phase)))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (sxx, sxy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x * x, b + x * y));
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let deviation = pts
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0f64, f64::max);

    report(
        "criterion 03 (pole-start phase affine, interior start not)",
        worst_pole < 1e-9 && deviation > 1e-3,
        &format!("pole_residual={worst_pole:.3e} interior_affine_miss={deviation:.3e}"),
    );
}

#[test]
fn acceptance_04_equator_start_sign_flip() {
    let mut ok = true;
    let mut detail = String::new();
    for n in [-3i64, -1, 1, 3, -2, 0, 2] {
        let trace = equator_trace(&trace_cfg(FRAC_PI_2, n, 720)).unwrap();
        let undefined_at: Vec<f64> = trace
            .rows
            .iter()
            .filter(|r| r.values.is_none())
            .map(|r| r.longitude)
            .collect();
        let single_gap = undefined_at.len() == 1 && (undefined_at[0] - PI).abs() < 1e-12;
        ok &= single_gap;
        for row in &trace.rows {
            if let Some(v) = row.values {
                let expected = if n.rem_euclid(2) == 1 && row.longitude > PI {
                    -1.0
                } else {
                    1.0
                };
                let err = (v.weight.re() - expected).abs().max(v.weight.im().abs());
                if err > 1e-9 {
                    ok = false;
                    detail = format!("n={n} x={} err={err:.3e}", row.longitude);
                }
            }
        }
    }
    report(
        "criterion 04 (equator start: sign flip for odd n, undefined only at x=pi)",
        ok,
        if detail.is_empty() {
            "samples=7x721"
        } else {
            &detail
        },
    );
}

#[test]
fn acceptance_05_additive_cocycle_identity() {
    let s = Sampling {
        samples: 1000,
        seed: 505,
    };
    let mut worst: f64 = 0.0;
    let mut all = true;
    for r in verify::cocycle_sphere(1, 1.0, s, Some(1e-8)) {
        if r.name.starts_with("cocycle_additive") {
            worst = worst.max(r.residual);
            all &= r.passed;
        }
    }
    for r in verify::cocycle_torus(Lattice::unit_square(), 0.7, 1.0, s, Some(1e-8)) {
        if r.name.starts_with("cocycle_additive") {
            worst = worst.max(r.residual);
            all &= r.passed;
        }
    }
    report(
        "criterion 05 (delta of the area cocycle vanishes mod modulus)",
        all && worst < 1e-8,
        &format!("residual={worst:.3e} samples=2x1000"),
    );
}

#[test]
fn acceptance_06_delta_squared_vanishes() {
    // 4 cochains per round: 25 rounds = 100 random cochains per fixture
    let finite = verify::delta_squared_finite(
        Sampling {
            samples: 25,
            seed: 606,
        },
        Some(1e-9),
    );
    let paths = [
        verify::delta_squared_paths_sphere(
            Sampling {
                samples: 1000,
                seed: 607,
            },
            Some(1e-9),
        ),
        verify::delta_squared_paths_torus(
            Lattice::unit_square(),
            Sampling {
                samples: 1000,
                seed: 608,
            },
            Some(1e-9),
        ),
    ];
    let mut worst: f64 = 0.0;
    let mut all = true;
    for r in finite.iter().chain(paths.iter().flatten()) {
        worst = worst.max(r.residual);
        all &= r.passed;
    }
    report(
        "criterion 06 (delta-squared vanishes on fixtures and path tuples)",
        all && worst < 1e-9,
        &format!("residual={worst:.3e} checks={}", finite.len() + 2),
    );
}

#[test]
fn acceptance_07_star_associativity() {
    let s = Sampling {
        samples: 1000,
        seed: 707,
    };
    let mut worst: f64 = 0.0;
    let mut all = true;
    for r in verify::associativity_sphere(2, 1.0, s, Some(1e-9))
        .into_iter()
        .chain(verify::associativity_torus(
            Lattice::unit_square(),
            0.9,
            1.0,
            s,
            Some(1e-9),
        ))
    {
        worst = worst.max(r.residual);
        all &= r.passed;
    }
    report(
        "criterion 07 (star product associative on sampled triples)",
        all && worst < 1e-9,
        &format!("residual={worst:.3e} samples=2x1000"),
    );
}

#[test]
fn acceptance_08_torus_straight_continuation_and_reflection() {
    let torus = Torus::unit_square();
    let d = Deformation::continuous(&torus, 1.0, 0.8).unwrap();
    let mut rng = sample::rng(808);
    let mut worst_area: f64 = 0.0;
    for _ in 0..100 {
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let q = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let t: f64 = rng.gen_range(0.1..2.0);
        let cont = [q[0] + t * (q[0] - p[0]), q[1] + t * (q[1] - p[1])];
        let a = torus.class_between_lifts(p, q);
        let b = torus.class_between_lifts(q, cont);
        match d.area_cocycle(&a, &b) {
            Product::Elem(x) => worst_area = worst_area.max(x.value().abs()),
            other => panic!("torus cocycle is total, got {other:?}"),
        }
    }

    let gamma = torus.class_between_lifts([0.15, 0.2], [0.55, 0.5]);
    let angles: Vec<f64> = (0..100).map(|i| -PI + TAU * i as f64 / 100.0).collect();
    let rows = deflection_table(&d, &gamma, &angles, 1.3).unwrap();
    let worst_product = rows
        .iter()
        .map(|r| r.product.rel_distance(&Weight::one()))
        .fold(0.0f64, f64::max);

    report(
        "criterion 08 (straight continuation flat, mirrored weights inverse)",
        worst_area < 1e-12 && worst_product < 1e-12,
        &format!("area_residual={worst_area:.3e} product_residual={worst_product:.3e}"),
    );
}

#[test]
fn acceptance_09_torus_global_triviality() {
    let reports = verify::triviality_torus(
        Lattice::unit_square(),
        0.6,
        1.0,
        Sampling {
            samples: 1000,
            seed: 909,
        },
        Some(1e-9),
    );
    let r = &reports[0];
    report(
        "criterion 09 (torus deformation split by the cover trivializer)",
        r.passed,
        &format!("residual={:.3e} samples={}", r.residual, r.samples),
    );
}

#[test]
fn acceptance_10_sphere_local_triviality() {
    let reports = verify::local_triviality_sphere(
        1,
        1.0,
        1.0,
        Sampling {
            samples: 1000,
            seed: 1010,
        },
        Some(1e-8),
    );
    let r = &reports[0];
    report(
        "criterion 10 (ball trivializer splits in-ball pairs)",
        r.passed,
        &format!("residual={:.3e} samples={}", r.residual, r.samples),
    );
}

#[test]
fn acceptance_11_quantized_weights_have_unit_modulus() {
    let sphere = Sphere;
    let mut rng = sample::rng(1111);
    let mut worst: f64 = 0.0;
    let mut produced = 0;
    for n in [-3i64, -1, 1, 2, 5] {
        let d = Deformation::quantized(&sphere, 1.0, n).unwrap();
        let mut count = 0;
        while count < 2000 {
            let (chain, _) = sample::sphere_class_chain(&mut rng, &sphere, 2);
            if let Product::Elem(w) = d.pair_weight(&chain[0], &chain[1]) {
                worst = worst.max((w.abs() - 1.0).abs());
                produced += 1;
                count += 1;
            }
        }
    }
    report(
        "criterion 11 (quantized weights are phases)",
        produced == 10_000 && worst < 1e-9,
        &format!("residual={worst:.3e} samples={produced}"),
    );
}

// --- criterion 12: independent quadrature oracle ------------------------

mod quadrature {
    /// Great-circle interpolation; valid slightly outside [0,1] as well,
    /// which the finite differences rely on.
    pub fn slerp(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let theta = dot.clamp(-1.0, 1.0).acos();
        if theta < 1e-9 {
            let v = [
                a[0] + t * (b[0] - a[0]),
                a[1] + t * (b[1] - a[1]),
                a[2] + t * (b[2] - a[2]),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            return [v[0] / n, v[1] / n, v[2] / n];
        }
        let (sa, sb) = (((1.0 - t) * theta).sin(), (t * theta).sin());
        let s = theta.sin();
        [
            (sa * a[0] + sb * b[0]) / s,
            (sa * a[1] + sb * b[1]) / s,
            (sa * a[2] + sb * b[2]) / s,
        ]
    }

    fn simpson_step(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }

    #[allow(clippy::too_many_arguments)]
    fn adaptive(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson_step(f, a, fa, m, fm);
        let (right, rm, frm) = simpson_step(f, m, fm, b, fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            adaptive(f, a, fa, m, fm, left, lm, flm, eps / 2.0, depth - 1)
                + adaptive(f, m, fm, b, fb, right, rm, frm, eps / 2.0, depth - 1)
        }
    }

    pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
        let (fa, fb) = (f(a), f(b));
        let (whole, m, fm) = simpson_step(f, a, fa, b, fb);
        adaptive(f, a, fa, b, fb, whole, m, fm, eps, 20)
    }

    /// Area of the pullback of the area form over the cone filling of the
    /// geodesic triangle (p, q, r): the map `(s,t) ↦ slerp(p, arc(t), s)`
    /// with `arc` the minor arc from q to r. Derivatives by central
    /// differences.
    pub fn triangle_area(p: [f64; 3], q: [f64; 3], r: [f64; 3], eps: f64) -> f64 {
        let surface = move |s: f64, t: f64| slerp(p, slerp(q, r, t), s);
        let h = 1e-5;
        let integrand = move |s: f64, t: f64| {
            let ps1 = surface(s + h, t);
            let ps0 = surface(s - h, t);
            let pt1 = surface(s, t + h);
            let pt0 = surface(s, t - h);
            let ds = [
                (ps1[0] - ps0[0]) / (2.0 * h),
                (ps1[1] - ps0[1]) / (2.0 * h),
                (ps1[2] - ps0[2]) / (2.0 * h),
            ];
            let dt = [
                (pt1[0] - pt0[0]) / (2.0 * h),
                (pt1[1] - pt0[1]) / (2.0 * h),
                (pt1[2] - pt0[2]) / (2.0 * h),
            ];
            let n = [
                ds[1] * dt[2] - ds[2] * dt[1],
                ds[2] * dt[0] - ds[0] * dt[2],
                ds[0] * dt[1] - ds[1] * dt[0],
            ];
            let at = surface(s, t);
            n[0] * at[0] + n[1] * at[1] + n[2] * at[2]
        };
        integrate(
            &move |t: f64| integrate(&move |s: f64| integrand(s, t), 0.0, 1.0, eps),
            0.0,
            1.0,
            eps,
        )
    }
}

#[test]
fn acceptance_12_area_against_quadrature_oracle() {
    let sphere = Sphere;
    let form = sphere.area_form(1.0).unwrap();
    // orientation cross-check on the octant before the random sweep
    let octant = quadrature::triangle_area([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1e-7);
    assert!(
        (octant - FRAC_PI_2).abs() < 1e-4,
        "oracle octant area {octant}"
    );

    let mut rng = sample::rng(1212);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 20 {
        let chain = sample::sphere_point_chain(&mut rng, 3);
        let [p, q, r] = [chain.points[0], chain.points[1], chain.points[2]];
        // keep the oracle's finite differences comfortable: skip thin or
        // over-wide triangles
        let (pc, qc, rc) = (p.coords(), q.coords(), r.coords());
        let det = pc[0] * (qc[1] * rc[2] - qc[2] * rc[1]) - pc[1] * (qc[0] * rc[2] - qc[2] * rc[0])
            + pc[2] * (qc[0] * rc[1] - qc[1] * rc[0]);
        let widest = p.angle_to(&q).max(q.angle_to(&r)).max(r.angle_to(&p));
        if det.abs() < 0.05 || widest > PI - 0.2 {
            continue;
        }
        let vos = sphere
            .triangle_integral(&form, p, q, r)
            .defined()
            .expect("rejection kept the triangle clear of the cut locus");
        let oracle = quadrature::triangle_area(pc, qc, rc, 1e-7);
        worst = worst.max(circular_distance(vos.value() - oracle, 4.0 * PI));
        done += 1;
    }
    report(
        "criterion 12 (signed areas match adaptive quadrature)",
        worst < 1e-3,
        &format!("residual={worst:.3e} samples=20"),
    );
}
