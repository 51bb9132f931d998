//! `verify-lemmas`: exact coefficient identities and numerical lemma checks.

use clap::ValueEnum;
use divkern::combinat::{
    gauss_is_zero, lemma45_lhs, lemma45_lhs_exact, lemma45_rhs, lemma45_rhs_exact,
    vanishing_factors, GaussRat,
};
use divkern::kernels::{self, KernelParams, OdeSolution};
use divkern::lambert::{cosine_integral_quadrature, exact_cosine_integral, partial_fraction_check};
use divkern::quadrature::QuadratureConfig;
use divkern::report::REPORT_SCHEMA;
use divkern::specialfn::btransform::{
    b_even, b_negative_even, b_odd, b_power_series, b_transform_quadrature,
};
use divkern::specialfn::{bessel_k, bessel_y};
use divkern::{Complex64, Error, Result};
use num_traits::Zero;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Coefficients of the Meijer-G operator in Stirling numbers.
    Lemma45,
    /// Residual of the kernel ODE and its coefficients.
    Ode,
    /// Closed forms of B(z, b) at integers and the cosine integral.
    BLemmas,
    /// Partial-fraction decompositions of t^k/(t^(2k) + a^(2k)).
    PartialFractions,
    /// H from the two rotated K values against the residue series.
    Combination,
    /// k = 1, z = 0 against K_0 - (pi/2) Y_0.
    Hardy,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub discrepancy: f64,
    pub tol: f64,
    pub exact: bool,
    pub route: String,
    pub est_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub schema: u32,
    pub which: String,
    pub k: u32,
    pub z: Option<Complex64>,
    pub checks: Vec<Check>,
    pub route: String,
    pub est_error: f64,
    pub quadrature: Option<QuadratureConfig>,
    pub pass: bool,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn num(name: String, d: f64, tol: f64, route: &str, est: f64) -> Check {
    Check {
        name,
        discrepancy: d,
        tol,
        exact: false,
        route: route.into(),
        est_error: est,
        pass: d <= tol,
    }
}

fn exact(name: String, ok: bool) -> Check {
    Check {
        name,
        discrepancy: if ok { 0.0 } else { 1.0 },
        tol: 0.0,
        exact: true,
        route: "rational".into(),
        est_error: 0.0,
        pass: ok,
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn lemma45(k: u32, z: Option<Complex64>, tol: Option<f64>, out: &mut Vec<Check>) -> Result<()> {
    let ku = k as usize;
    if ku == 0 {
        return Err(Error::Domain("k must be a positive integer".into()));
    }
    let (zq, zf) = match z {
        Some(z) => (
            GaussRat::from_c64(z).ok_or_else(|| Error::Domain(format!("z = {z} is not finite")))?,
            z,
        ),
        None => (
            GaussRat::from_ints(1, 3, 1, 7),
            Complex64::new(1.0 / 3.0, 1.0 / 7.0),
        ),
    };
    for m in 1..=2 * ku + 2 {
        let l = lemma45_lhs_exact(ku, &zq, m)?;
        let ok = gauss_is_zero(&(l - lemma45_rhs_exact(ku, &zq, m)));
        out.push(exact(format!("lemma45_exact_m{m}"), ok));
    }
    let all_zero = vanishing_factors(ku).iter().all(|(_, f)| f.is_zero());
    out.push(exact("vanishing_factors".into(), all_zero));
    let tol = tol.unwrap_or(1e-10);
    for m in 1..=2 * ku + 2 {
        let d = rel(lemma45_lhs(ku, zf, m)?, lemma45_rhs(ku, zf, m));
        out.push(num(
            format!("lemma45_float_m{m}"),
            d,
            tol,
            "complex_f64",
            0.0,
        ));
    }
    Ok(())
}

fn ode(k: u32, z: Option<Complex64>, tol: Option<f64>, out: &mut Vec<Check>) -> Result<()> {
    let z = z.unwrap_or(c(0.5));
    let p = KernelParams::new(k, z)?;
    let ku = k as usize;
    let q = 2 * ku + 2;
    let co = kernels::ode_coefficients(&p)?;
    for (i, m) in [q, q - 1, q - 2].into_iter().enumerate() {
        let d = rel(co[i], lemma45_rhs(ku, z, m));
        out.push(num(
            format!("ode_coefficient_{i}"),
            d,
            1e-12,
            "stirling_expansion",
            0.0,
        ));
    }
    let tol = tol.unwrap_or(1e-6);
    for i in 1..=10 {
        let x = 0.3 * i as f64;
        let r = kernels::ode_residual(&p, x, OdeSolution::H)?;
        out.push(num(
            format!("ode_residual_h_x{x:.1}"),
            r,
            tol,
            "series_derivatives",
            0.0,
        ));
    }
    for x in [0.7, 1.9, 3.1] {
        let r = kernels::ode_residual(&p, x, OdeSolution::ISine)?;
        out.push(num(
            format!("ode_residual_sine_x{x:.1}"),
            r,
            tol,
            "steepest_descent_derivatives",
            0.0,
        ));
    }
    Ok(())
}

fn b_lemmas(tol: Option<f64>, out: &mut Vec<Check>) -> Result<()> {
    let bs = [0.5, 1.0, 2.5, 6.0];
    for m in 0..3u32 {
        for &b in &bs {
            let d = rel(b_even(m, c(b)), b_power_series(c(2.0 * m as f64), c(b))?);
            out.push(num(
                format!("b_even_m{m}_b{b}"),
                d,
                tol.unwrap_or(1e-10),
                "closed_form_vs_series",
                0.0,
            ));
        }
    }
    for m in 1..3u32 {
        for &b in &bs {
            let d = rel(
                b_negative_even(m, c(b)),
                b_power_series(c(-2.0 * m as f64), c(b))?,
            );
            out.push(num(
                format!("b_negative_even_m{m}_b{b}"),
                d,
                tol.unwrap_or(1e-10),
                "closed_form_vs_series",
                0.0,
            ));
        }
    }
    for b in [1.0, 2.0] {
        let d = rel(b_odd(0, c(b)), b_transform_quadrature(c(1.0), c(b))?);
        out.push(num(
            format!("b_odd_m0_b{b}"),
            d,
            tol.unwrap_or(1e-8),
            "log_series_vs_quadrature",
            0.0,
        ));
    }
    for (k, m, a) in [(2u32, 0u32, 2.0), (4, 1, 1.0), (6, 2, 1.5)] {
        let e = exact_cosine_integral(k, m, a)?;
        let q = cosine_integral_quadrature(k, c(2.0 * m as f64), a)?;
        let d = rel(e, q);
        out.push(num(
            format!("cosine_integral_k{k}_m{m}_a{a}"),
            d,
            tol.unwrap_or(1e-7),
            "closed_form_vs_quadrature",
            0.0,
        ));
    }
    Ok(())
}

fn partial_fractions(tol: Option<f64>, out: &mut Vec<Check>) -> Result<()> {
    // splitmix64, fixed seed
    let mut s: u64 = 0x5eed;
    let mut u = || {
        s = s.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut x = s;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        ((x ^ (x >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let k = 1 + (i % 6) as u32;
        let a = Complex64::new(0.2 + 2.8 * u(), -1.0 + 2.0 * u());
        let t = 5.0 * u();
        worst = worst.max(partial_fraction_check(k, a, t)?.max());
    }
    out.push(num(
        "partial_fractions_200_samples".into(),
        worst,
        tol.unwrap_or(1e-12),
        "rotated_roots",
        0.0,
    ));
    Ok(())
}

fn combination(k: u32, tol: Option<f64>, out: &mut Vec<Check>) -> Result<()> {
    for z in [-0.5, 0.25, 0.5, 1.4] {
        if z >= k as f64 {
            continue;
        }
        let p = KernelParams::new(k, c(z))?;
        for x in [0.5, 1.5, 3.0, 5.0, 8.0] {
            let a = kernels::h_series(&p, x)?;
            let b = kernels::h_from_k_combination(&p, x)?;
            let est = a.est_error + b.est_error;
            let d = (a.value - b.value).norm();
            let mut ch = num(
                format!("combination_z{z}_x{x}"),
                d,
                tol.unwrap_or(est + 1e-13),
                "series_vs_rotated_k",
                est,
            );
            ch.pass &= a.est_error <= 1e-8 && b.est_error <= 1e-8;
            out.push(ch);
        }
    }
    Ok(())
}

fn hardy(tol: Option<f64>, out: &mut Vec<Check>) -> Result<()> {
    let p = KernelParams::new(1, c(0.0))?;
    for x in [0.25, 1.0, 4.0, 9.0] {
        let y = c(2.0 * f64::sqrt(x));
        let want = bessel_k(c(0.0), y)? - bessel_y(c(0.0), y)? * (PI / 2.0);
        let v = kernels::h_series(&p, x)?;
        let d = (v.value - want).norm();
        out.push(num(
            format!("hardy_x{x}"),
            d,
            tol.unwrap_or(1e-9),
            v.route.as_str(),
            v.est_error,
        ));
    }
    Ok(())
}

pub fn run(which: Which, k: u32, z: Option<Complex64>, tol: Option<f64>) -> Result<LemmaReport> {
    if k == 0 {
        return Err(Error::Domain("k must be a positive integer".into()));
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("--tol must be positive, got {t}")));
        }
    }
    let mut checks = Vec::new();
    let all = which == Which::All;
    if all || which == Which::Lemma45 {
        lemma45(k, z, tol, &mut checks)?;
    }
    if all || which == Which::Ode {
        ode(k, z, tol, &mut checks)?;
    }
    if all || which == Which::BLemmas {
        b_lemmas(tol, &mut checks)?;
    }
    if all || which == Which::PartialFractions {
        partial_fractions(tol, &mut checks)?;
    }
    if all || which == Which::Combination {
        combination(k, tol, &mut checks)?;
    }
    if all || which == Which::Hardy {
        hardy(tol, &mut checks)?;
    }
    let quad = (all || which == Which::BLemmas).then(kernels::kernel_quad);
    let which_name = which
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let route = if which == Which::Lemma45 {
        "exact_rational+complex_f64"
    } else {
        "mixed"
    };
    Ok(LemmaReport {
        schema: REPORT_SCHEMA,
        which: which_name,
        k,
        z,
        est_error: checks.iter().map(|c| c.est_error).fold(0.0, f64::max),
        pass: checks.iter().all(|c| c.pass),
        checks,
        route: route.into(),
        quadrature: quad,
    })
}
