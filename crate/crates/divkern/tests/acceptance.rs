//! Acceptance run: one PASS/FAIL line per criterion with its tolerance and
//! runtime. Criteria listed in `KNOWN_FAILING` are reported faithfully but do
//! not fail the run; any other failure exits with status 1.

use divkern::combinat::{
    gauss_is_zero, lemma45_lhs, lemma45_lhs_exact, lemma45_rhs, lemma45_rhs_exact, GaussRat,
};
use divkern::kernels::*;
use divkern::lambert::*;
use divkern::report::VerificationReport;
use divkern::specialfn::btransform::{
    b_even, b_negative_even, b_odd, b_power_series, b_transform_quadrature,
};
use divkern::summation::*;
use divkern::Complex64;
use std::time::Instant;

const KNOWN_FAILING: [&str; 2] = ["finite_voronoi", "classical_voronoi"];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ci(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// splitmix64 on a fixed seed, mapped to [0, 1).
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut x = self.0;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        ((x ^ (x >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    }
}

struct Outcome {
    label: &'static str,
    metric: f64,
    tol: f64,
    ok: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn le(metric: f64, tol: f64) -> Outcome {
        Outcome {
            label: "metric",
            metric,
            tol,
            ok: metric <= tol,
            detail: Vec::new(),
        }
    }
}

type Check = fn() -> divkern::Result<Outcome>;

fn wigert_grid() -> divkern::Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for k in 1..=4u32 {
        let mut zs = vec![c(0.0), c(0.5), ci(1.0 / 3.0, 1.0 / 7.0), c(k as f64 - 0.75)];
        zs.retain(|z| (z - (k as f64 - 1.0)).norm() > 1e-12);
        for z in zs {
            for w in [c(1.0), c(2.0), ci(1.0, 1.0 / 3.0)] {
                let r = verify_lambert(&LambertConfig::new(k, z, w)?, 1e-9)?;
                worst = worst.max(r.discrepancy);
                cells += 1;
            }
        }
    }
    let mut o = Outcome::le(worst, 1e-9);
    o.detail
        .push(format!("{cells} cells (k, z, w), max relative discrepancy"));
    Ok(o)
}

fn even_corollary() -> divkern::Result<Outcome> {
    let mut worst: f64 = 0.0;
    for w in [0.5, 1.0, 2.0] {
        let l = lambert_lhs(&LambertConfig::new(2, c(0.0), c(w))?)?.value;
        worst = worst.max(rel(wigert_even_corollary(2, 0, c(w))?, l));
        worst = worst.max(rel(wigert_classical_even(2, c(w))?, l));
    }
    Ok(Outcome::le(worst, 1e-10))
}

fn odd_corollary() -> divkern::Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (k, m) in [(3u32, 1u32), (5, 2)] {
        for w in [1.0, 2.0] {
            let l = lambert_lhs(&LambertConfig::new(k, c(2.0 * m as f64 - 1.0), c(w))?)?.value;
            worst = worst.max(rel(wigert_odd_corollary(k, m, c(w))?, l));
        }
    }
    Ok(Outcome::le(worst, 1e-10))
}

fn hardy() -> divkern::Result<Outcome> {
    // K_0(2 sqrt x) - (pi/2) Y_0(2 sqrt x), mpmath at 30 digits
    let oracle = [
        (0.25, 0.282_390_723_036_654_33),
        (1.0, -0.687_802_359_134_160_8),
        (4.0, 0.037_770_127_190_854_97),
        (9.0, 0.453_939_145_328_093_7),
    ];
    let p = KernelParams::new(1, c(0.0))?;
    let mut worst: f64 = 0.0;
    for (x, want) in oracle {
        worst = worst.max((h_series(&p, x)?.value - c(want)).norm());
    }
    Ok(Outcome::le(worst, 1e-9))
}

const GRID_Z: [f64; 4] = [-0.5, 0.25, 0.5, 1.4];
const GRID_X: [f64; 5] = [0.5, 1.5, 3.0, 5.0, 8.0];

fn combination() -> divkern::Result<Outcome> {
    // worst ratio |series - combination| / (est_series + est_combination)
    let mut ratio: f64 = 0.0;
    let mut max_est: f64 = 0.0;
    let mut points = 0;
    for k in 1..=3u32 {
        for z in GRID_Z.into_iter().filter(|&z| z < k as f64) {
            let p = KernelParams::new(k, c(z))?;
            for x in GRID_X {
                let a = h_series(&p, x)?;
                let b = h_from_k_combination(&p, x)?;
                max_est = max_est.max(a.est_error).max(b.est_error);
                ratio = ratio.max((a.value - b.value).norm() / (a.est_error + b.est_error + 1e-15));
                points += 1;
            }
        }
    }
    let mut o = Outcome::le(max_est, 1e-8);
    o.ok &= ratio <= 1.0;
    o.detail.push(format!(
        "{points} points; max est_error {max_est:.2e}; max |diff|/sum(est_error) {ratio:.3}"
    ));
    Ok(o)
}

fn cross_routes() -> divkern::Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for k in 1..=3u32 {
        for z in [0.25, 0.5] {
            let p = KernelParams::new(k, c(z))?;
            for x in GRID_X {
                let hs = h_series(&p, x)?.value;
                let hq = h_quadrature(&p, x)?.value;
                let ks = k_series(&p, c(x))?.value;
                let kr = k_real(&p, x)?.value;
                let kc = k_contour(&p, c(x))?.value;
                worst = worst
                    .max((hs - hq).norm())
                    .max((ks - kr).norm())
                    .max((kr - kc).norm())
                    .max((ks - kc).norm());
                points += 1;
            }
        }
    }
    let mut o = Outcome::le(worst, 1e-7);
    o.detail.push(format!(
        "{points} points, H: series/quadrature, K: series/real/contour"
    ));
    Ok(o)
}

fn ode() -> divkern::Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut coefficients_equal = true;
    for (k, z) in [(1u32, ci(0.2, 0.0)), (2, ci(0.5, 0.3))] {
        let p = KernelParams::new(k, z)?;
        for i in 1..=10 {
            worst = worst.max(ode_residual(&p, 0.3 * i as f64, OdeSolution::H)?);
        }
        let ku = k as usize;
        let q = 2 * ku + 2;
        let co = ode_coefficients(&p)?;
        for (j, m) in [q, q - 1, q - 2].into_iter().enumerate() {
            coefficients_equal &= co[j] == lemma45_lhs(ku, z, m)?;
            coefficients_equal &=
                (co[j] - lemma45_rhs(ku, z, m)).norm() <= 1e-12 * lemma45_rhs(ku, z, m).norm();
        }
    }
    let mut o = Outcome::le(worst, 1e-6);
    o.ok &= coefficients_equal;
    o.detail.push(format!(
        "20 points, k in {{1, 2}}; coefficients equal: {coefficients_equal}"
    ));
    Ok(o)
}

fn lemma45() -> divkern::Result<Outcome> {
    let zs = [
        GaussRat::from_ints(1, 3, 1, 7),
        GaussRat::from_ints(-2, 5, 0, 1),
        GaussRat::from_ints(7, 2, -1, 3),
    ];
    let mut exact_ok = true;
    for k in 1..=6usize {
        for z in &zs {
            for m in 1..=2 * k + 2 {
                exact_ok &=
                    gauss_is_zero(&(lemma45_lhs_exact(k, z, m)? - lemma45_rhs_exact(k, z, m)));
            }
        }
    }
    let mut rng = Rng(45);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let k = 1 + i % 6;
        let z = ci(
            -1.0 + (k as f64 + 1.0) * rng.next(),
            -2.0 + 4.0 * rng.next(),
        );
        for m in 1..=2 * k + 2 {
            let r = lemma45_rhs(k, z, m);
            worst = worst.max((lemma45_lhs(k, z, m)? - r).norm() / r.norm().max(1.0));
        }
    }
    let mut o = Outcome::le(worst, 1e-10);
    o.ok &= exact_ok;
    o.detail.push(format!("rational path k <= 6 at 3 Gaussian-rational z exact: {exact_ok}; floating path at 20 random z"));
    Ok(o)
}

fn b_lemmas() -> divkern::Result<Outcome> {
    let mut closed: f64 = 0.0;
    for &b in &[0.5, 1.0, 2.5, 6.0] {
        for m in 0..3u32 {
            closed = closed.max(rel(
                b_even(m, c(b)),
                b_power_series(c(2.0 * m as f64), c(b))?,
            ));
        }
        for m in 1..3u32 {
            closed = closed.max(rel(
                b_negative_even(m, c(b)),
                b_power_series(c(-2.0 * m as f64), c(b))?,
            ));
        }
    }
    let odd = rel(b_odd(0, c(1.0)), b_transform_quadrature(c(1.0), c(1.0))?);
    let mut cosine: f64 = 0.0;
    for (k, m, a) in [(2u32, 0u32, 2.0), (4, 1, 1.0), (6, 2, 1.5)] {
        cosine = cosine.max(rel(
            exact_cosine_integral(k, m, a)?,
            cosine_integral_quadrature(k, c(2.0 * m as f64), a)?,
        ));
    }
    let ok = closed <= 1e-10 && odd <= 1e-8 && cosine <= 1e-7;
    Ok(Outcome {
        label: "metric",
        metric: closed.max(odd).max(cosine),
        tol: 1e-7,
        ok,
        detail: vec![format!("even/negative-even closed forms {closed:.2e} (tol 1e-10); B(1,1) vs quadrature {odd:.2e} (tol 1e-8); cosine integral {cosine:.2e} (tol 1e-7)")],
    })
}

fn partial_fractions() -> divkern::Result<Outcome> {
    let mut rng = Rng(64);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let k = 1 + (i % 6) as u32;
        let a = ci(0.2 + 2.8 * rng.next(), -1.0 + 2.0 * rng.next());
        worst = worst.max(partial_fraction_check(k, a, 5.0 * rng.next())?.max());
    }
    Ok(Outcome::le(worst, 1e-12))
}

fn last_three(r: &VerificationReport) -> (Vec<f64>, bool) {
    let d: Vec<f64> = r
        .trace
        .iter()
        .rev()
        .take(3)
        .rev()
        .map(|t| t.discrepancy)
        .collect();
    let trend = d.windows(2).all(|w| w[1] <= w[0]);
    (d, trend)
}

fn finite_voronoi() -> divkern::Result<Outcome> {
    let f = TestFunctionSpec::exp_decay(c(1.0))?;
    let runs = [
        (
            "k=2 z=1/2",
            VoronoiConfig::new(2, c(0.5), 0.5, 10.5, 1024)?,
            VoronoiRoute::Kernel,
            1e-3,
        ),
        (
            "k=2 z=k-1",
            VoronoiConfig::new(2, c(1.0), 0.5, 10.5, 1024)?,
            VoronoiRoute::Kernel,
            1e-3,
        ),
        (
            "k=1 z=1/2 Bessel",
            VoronoiConfig::new(1, c(0.5), 0.5, 10.5, 1024)?,
            VoronoiRoute::Bessel,
            1e-4,
        ),
    ];
    let mut o = Outcome {
        label: "max discrepancy/tol",
        metric: 0.0,
        tol: 1.0,
        ok: true,
        detail: Vec::new(),
    };
    for (name, cfg, route, tol) in runs {
        let t0 = Instant::now();
        let r = voronoi_rhs(&cfg, &f, route, tol)?;
        let (d, trend) = last_three(&r);
        let ok = d.iter().all(|&x| x <= tol) && trend;
        o.ok &= ok;
        o.metric = d.iter().fold(o.metric, |m, &x| m.max(x / tol));
        o.detail.push(format!(
            "{name}: N=256/512/1024 discrepancy {} (tol {tol:.0e}), non-increasing {trend}, Riesz-mean discrepancy {:.2e}, {:.1}s -> {}",
            d.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join("/"),
            r.smoothed_discrepancy.unwrap_or(f64::NAN),
            t0.elapsed().as_secs_f64(),
            if ok { "PASS" } else { "FAIL" }
        ));
    }
    Ok(o)
}

fn schwartz() -> divkern::Result<Outcome> {
    let quad = default_voronoi_quad();
    let mut exp_worst: f64 = 0.0;
    for (k, z, w) in [
        (2u32, c(0.5), c(1.0)),
        (1, c(0.5), c(2.0)),
        (3, ci(1.0 / 3.0, 1.0 / 7.0), ci(1.0, 1.0 / 3.0)),
    ] {
        let p = KernelParams::new(k, z)?;
        let r = voronoi_schwartz(&p, &TestFunctionSpec::exp_decay(w)?, 200, &quad, 1e-9)?;
        exp_worst = exp_worst.max(r.discrepancy);
    }
    let p = KernelParams::new(2, c(0.0))?;
    let g = voronoi_schwartz(&p, &TestFunctionSpec::Gaussian, 200, &quad, 1e-4)?;
    Ok(Outcome {
        label: "metric",
        metric: exp_worst,
        tol: 1e-9,
        ok: exp_worst <= 1e-9 && g.discrepancy <= 1e-4,
        detail: vec![format!("e^(-wt) vs Lambert pipeline {exp_worst:.2e} (tol 1e-9); gaussian N=200 {:.2e} (tol 1e-4)", g.discrepancy)],
    })
}

fn classical_voronoi() -> divkern::Result<Outcome> {
    let r = classical_voronoi_check(5.5, 5000, 5e-3)?;
    let mut o = Outcome::le(r.discrepancy, 5e-3);
    o.ok &= r.lhs == c(10.0);
    o.detail.push(format!(
        "LHS = {} exactly; RHS {:.6}; Riesz-mean discrepancy {:.2e}",
        r.lhs.re,
        r.rhs.re,
        r.smoothed_discrepancy.unwrap_or(f64::NAN)
    ));
    Ok(o)
}

fn asymptotics() -> divkern::Result<Outcome> {
    let p = KernelParams::new(1, c(0.0))?;
    let n = 4000;
    let ys: Vec<f64> = (0..=n).map(|i| 20.0 + 20.0 * i as f64 / n as f64).collect();
    let v = ys
        .iter()
        .map(|&y| Ok(h_eval(&p, y)?.value.norm()))
        .collect::<divkern::Result<Vec<f64>>>()?;
    let mut worst: f64 = 0.0;
    let mut peaks = 0;
    for i in 1..n {
        if v[i] > v[i - 1] && v[i] > v[i + 1] {
            worst = worst.max((v[i] / h_asymptotic_amplitude(&p, ys[i]).norm() - 1.0).abs());
            peaks += 1;
        }
    }
    let mut o = Outcome::le(worst, 0.1);
    o.ok &= peaks > 0;
    o.detail.push(format!("{peaks} peaks of |H| on [20, 40]"));
    Ok(o)
}

fn main() {
    let criteria: [(&str, f64, Check); 14] = [
        ("wigert_transformation", 60.0, wigert_grid),
        ("wigert_even_corollary", 10.0, even_corollary),
        ("wigert_odd_corollary", 20.0, odd_corollary),
        ("hardy_reduction", 1.0, hardy),
        ("h_k_combination", 30.0, combination),
        ("cross_route_kernels", 120.0, cross_routes),
        ("kernel_ode", 10.0, ode),
        ("lemma45", 5.0, lemma45),
        ("b_transform_lemmas", 20.0, b_lemmas),
        ("partial_fractions", 2.0, partial_fractions),
        ("finite_voronoi", 600.0, finite_voronoi),
        ("schwartz_voronoi", 300.0, schwartz),
        ("classical_voronoi", 30.0, classical_voronoi),
        ("h_asymptotics", 10.0, asymptotics),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (name, budget, check) in criteria {
        let t0 = Instant::now();
        let res = check();
        let secs = t0.elapsed().as_secs_f64();
        let (ok, line, detail) = match res {
            Ok(o) => {
                let ok = o.ok && secs <= budget;
                (
                    ok,
                    format!("{} {:.3e} (tol {:.0e})", o.label, o.metric, o.tol),
                    o.detail,
                )
            }
            Err(e) => (false, format!("error: {e}"), Vec::new()),
        };
        println!(
            "{} {name}: {line}, {secs:.2}s (budget {budget:.0}s)",
            if ok { "PASS" } else { "FAIL" }
        );
        for d in detail {
            println!("    {d}");
        }
        if ok {
            passed += 1;
        } else if !KNOWN_FAILING.contains(&name) {
            unexpected.push(name);
        }
    }
    println!("acceptance: {passed}/14 criteria pass");
    if !unexpected.is_empty() {
        println!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
