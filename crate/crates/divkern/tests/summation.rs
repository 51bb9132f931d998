use divkern::kernels::KernelParams;
use divkern::report::{majority_non_increasing, ToleranceKind};
use divkern::specialfn::EULER_GAMMA;
use divkern::summation::*;
use divkern::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn exp1() -> TestFunctionSpec {
    TestFunctionSpec::exp_decay(c(1.0)).unwrap()
}

#[test]
fn lhs_by_enumeration() {
    let e = |t: f64| (-t).exp();
    let cfg = VoronoiConfig::new(1, c(0.0), 0.5, 3.5, 10).unwrap();
    let want = e(1.0) + 2.0 * e(2.0) + 2.0 * e(3.0);
    assert!((voronoi_lhs(&cfg, &exp1()).unwrap() - want).norm() < 1e-16);

    let cfg = VoronoiConfig::new(1, c(0.0), 1.1, 1.9, 10).unwrap();
    assert_eq!(voronoi_lhs(&cfg, &exp1()).unwrap(), c(0.0));

    // sigma_{1/2}^(2)(n) = sum_{d^2 | n} sqrt(d): 1 + sqrt(2) at n = 4, 8; 1 + sqrt(3) at n = 9
    let cfg = VoronoiConfig::new(2, c(0.5), 0.5, 10.5, 10).unwrap();
    let s2 = 2f64.sqrt();
    let mut want = 0.0;
    for n in 1..=10 {
        let sig = match n {
            4 | 8 => 1.0 + s2,
            9 => 1.0 + 3f64.sqrt(),
            _ => 1.0,
        };
        want += sig * e(n as f64);
    }
    assert!((voronoi_lhs(&cfg, &exp1()).unwrap() - want).norm() < 1e-15);
}

#[test]
fn config_validation() {
    assert!(VoronoiConfig::new(2, c(0.5), 1.0, 3.5, 10).is_err());
    assert!(VoronoiConfig::new(2, c(0.5), 3.5, 1.5, 10).is_err());
    assert!(VoronoiConfig::new(2, c(2.5), 0.5, 3.5, 10).is_err());
    assert!(VoronoiConfig::new(2, c(0.5), 0.5, 3.5, 0).is_err());
    assert!(TestFunctionSpec::exp_decay(c(-1.0)).is_err());
    assert!(classical_voronoi_check(3.0, 10, 1e-3).is_err());
}

#[test]
fn bessel_and_kernel_routes_agree_termwise() {
    for z in [c(0.0), c(0.5), Complex64::new(-0.3, 0.4)] {
        let cfg = VoronoiConfig::new(1, z, 0.5, 6.5, 48).unwrap();
        let a = voronoi_dual_terms(&cfg, &exp1(), VoronoiRoute::Kernel).unwrap();
        let b = voronoi_dual_terms(&cfg, &exp1(), VoronoiRoute::Bessel).unwrap();
        let scale = a.iter().map(|t| t.norm()).fold(0.0, f64::max);
        for (n, (x, y)) in a.iter().zip(&b).enumerate() {
            assert!((x - y).norm() < 1e-9 * scale, "z={z} n={}: {x} {y}", n + 1);
        }
    }
}

#[test]
fn right_side_is_additive_over_splits() {
    let f = exp1();
    let whole = VoronoiConfig::new(2, c(0.5), 0.5, 10.5, 64).unwrap();
    let left = VoronoiConfig { beta: 4.5, ..whole };
    let right = VoronoiConfig {
        alpha: 4.5,
        ..whole
    };
    let r = voronoi_rhs(&whole, &f, VoronoiRoute::Kernel, 1e-3).unwrap();
    let rl = voronoi_rhs(&left, &f, VoronoiRoute::Kernel, 1e-3).unwrap();
    let rr = voronoi_rhs(&right, &f, VoronoiRoute::Kernel, 1e-3).unwrap();
    assert!(
        (r.rhs - rl.rhs - rr.rhs).norm() < 1e-10,
        "{}",
        (r.rhs - rl.rhs - rr.rhs).norm()
    );
    assert!((r.lhs - rl.lhs - rr.lhs).norm() < 1e-15);
}

#[test]
fn finite_report_shape() {
    let cfg = VoronoiConfig::new(2, c(0.5), 0.5, 10.5, 256).unwrap();
    let r = voronoi_rhs(&cfg, &exp1(), VoronoiRoute::Kernel, 1e-3).unwrap();
    assert_eq!(r.schema, 1);
    assert_eq!(r.identity, "voronoi_finite");
    let levels: Vec<u64> = r.trace.iter().map(|t| t.terms).collect();
    assert_eq!(levels, vec![16, 32, 64, 128, 256]);
    assert_eq!(r.trace.last().unwrap().rhs, r.rhs);
    assert_eq!(r.tolerances.kind, ToleranceKind::Absolute);
    assert!((r.discrepancy - (r.lhs - r.rhs).norm()).abs() < 1e-15);
    assert!(r.est_error < 1e-8);
    // the series is slowly convergent; after 256 terms it is within a few percent
    assert!(r.discrepancy < 0.05, "{}", r.discrepancy);
    assert!(r.smoothed_discrepancy.unwrap() < 5e-3);
    let json = r.to_json();
    assert!(json.contains("\"trace\"") && json.contains("\"route\""));
}

#[test]
fn log_case_main_term() {
    // -zeta(-1)/2 + int e^-t (3 gamma + log t)/2 dt = 1/24 + gamma
    let p = KernelParams::new(2, c(1.0)).unwrap();
    let m = schwartz_main(&p, &exp1()).unwrap();
    assert!((m - c(1.0 / 24.0 + EULER_GAMMA)).norm() < 1e-14);
    let cfg = VoronoiConfig::new(2, c(1.0), 0.5, 10.5, 32).unwrap();
    let r = voronoi_rhs(&cfg, &exp1(), VoronoiRoute::Kernel, 1e-3).unwrap();
    assert_eq!(r.identity, "voronoi_finite_log_case");
    assert!(r.rhs_main.re.is_finite());
}

#[test]
fn schwartz_exp_matches_b_transform_pipeline() {
    let quad = default_voronoi_quad();
    for (k, z, w) in [
        (2u32, c(0.5), c(1.0)),
        (1, c(0.5), c(2.0)),
        (
            3,
            Complex64::new(1.0 / 3.0, 1.0 / 7.0),
            Complex64::new(1.0, 1.0 / 3.0),
        ),
    ] {
        let p = KernelParams::new(k, z).unwrap();
        let f = TestFunctionSpec::exp_decay(w).unwrap();
        let r = voronoi_schwartz(&p, &f, 100, &quad, 1e-9).unwrap();
        assert!(r.pass, "k={k}: {:.3e}", r.discrepancy);
        assert_eq!(r.tolerances.kind, ToleranceKind::Relative);
        // truncated at 100 terms the identity itself holds to a few 1e-4
        assert!(
            (r.lhs - r.rhs).norm() < 1e-3 * r.lhs.norm(),
            "k={k}: {:.3e}",
            (r.lhs - r.rhs).norm() / r.lhs.norm()
        );
    }
}

#[test]
fn schwartz_gaussian() {
    let p = KernelParams::new(2, c(0.0)).unwrap();
    let r = voronoi_schwartz(
        &p,
        &TestFunctionSpec::Gaussian,
        200,
        &default_voronoi_quad(),
        1e-4,
    )
    .unwrap();
    assert!(r.pass && r.discrepancy < 1e-10, "{:.3e}", r.discrepancy);
    assert_eq!(r.trend_non_increasing, Some(true));
    // sum sigma_0^(2)(n) e^(-n^2), leading terms
    let e = |t: f64| (-t * t).exp();
    assert!((r.lhs.re - (e(1.0) + e(2.0) + e(3.0) + 2.0 * e(4.0))).abs() < 1e-10);
}

#[test]
fn schwartz_poly_exp_and_log_case() {
    let quad = default_voronoi_quad();
    let p = KernelParams::new(2, c(0.25)).unwrap();
    let f = TestFunctionSpec::poly_exp(1, c(1.5)).unwrap();
    let r = voronoi_schwartz(&p, &f, 128, &quad, 1e-3).unwrap();
    assert!(r.pass, "{:.3e}", r.discrepancy);
    let p = KernelParams::new(2, c(1.0)).unwrap();
    let r = voronoi_schwartz(&p, &exp1(), 128, &quad, 1e-4).unwrap();
    assert_eq!(r.identity, "voronoi_schwartz_log_case");
    assert!(r.pass, "{:.3e}", r.discrepancy);
}

#[test]
fn classical_divisor_formula() {
    let r = classical_voronoi_check(5.5, 5000, 5e-3).unwrap();
    assert_eq!(r.lhs, c(10.0));
    // sharp truncation converges like N^(-1/4)
    assert!(r.discrepancy < 0.05, "{}", r.discrepancy);
    assert!(
        r.smoothed_discrepancy.unwrap() < 1e-2,
        "{:?}",
        r.smoothed_discrepancy
    );
    let r = classical_voronoi_check(0.5, 2000, 5e-3).unwrap();
    assert_eq!(r.lhs, c(0.0));
    assert!(r.rhs.norm() < 0.05, "{}", r.rhs);
}

#[test]
fn trend_majority() {
    assert!(majority_non_increasing(&[4.0, 3.0, 3.5, 2.0]));
    assert!(!majority_non_increasing(&[1.0, 2.0, 3.0, 2.5]));
    assert!(majority_non_increasing(&[1.0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exp_mellin_recurrence(sr in 0.2f64..4.0, si in -3.0f64..3.0, wr in 0.3f64..3.0, wi in -2.0f64..2.0) {
        let w = Complex64::new(wr, wi);
        let s = Complex64::new(sr, si);
        let f = TestFunctionSpec::exp_decay(w).unwrap();
        // F(s + 1) = s F(s) / w
        let a = f.mellin(s + 1.0).unwrap();
        let b = f.mellin(s).unwrap() * s / w;
        prop_assert!((a - b).norm() < 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn lhs_additive(a in 0.1f64..5.0, gap1 in 0.1f64..6.0, gap2 in 0.1f64..6.0) {
        let m = a + gap1;
        let b = m + gap2;
        prop_assume!([a, m, b].iter().all(|x| (x - x.round()).abs() > 1e-6));
        let f = TestFunctionSpec::exp_decay(c(0.7)).unwrap();
        let whole = VoronoiConfig::new(3, c(1.2), a, b, 1).unwrap();
        let l = voronoi_lhs(&whole, &f).unwrap();
        let l1 = voronoi_lhs(&VoronoiConfig { beta: m, ..whole }, &f).unwrap();
        let l2 = voronoi_lhs(&VoronoiConfig { alpha: m, ..whole }, &f).unwrap();
        prop_assert!((l - l1 - l2).norm() < 1e-14);
    }
}
