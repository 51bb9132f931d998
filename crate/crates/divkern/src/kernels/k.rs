//! Evaluation routes for `K_z^(k)(x)`.

use super::slater::slater_sum;
use super::{richardson_in_z, KernelParams, KernelValue, Route};
use crate::error::{domain, Result};
use crate::quadrature::{
    integrate_breaks, integrate_osc_tail, integrate_vertical_line, ContourSpec, DecayClass,
    QuadratureConfig,
};
use crate::specialfn::gamma::{gamma_c, lgamma_c};
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const RAY_SLACK: f64 = 1e-12;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `K_z^(k)(0) = (1/k) Gamma((k-1-z)/k)`, `Re z < k-1`.
pub fn k_zero(p: &KernelParams) -> Result<Complex64> {
    let kf = p.kf();
    if p.z.re >= kf - 1.0 {
        return domain(format!(
            "K(0) diverges for Re z >= k-1 (k = {}, z = {})",
            p.k, p.z
        ));
    }
    Ok(gamma_c((c(kf - 1.0) - p.z) / kf)? / kf)
}

fn k_prefactor(k: u32, z: Complex64) -> Complex64 {
    let kf = k as f64;
    c(1.0 / kf.sqrt()) * (-(z + 1.0) / kf * 2f64.ln()).exp()
}

fn series_at(k: u32, z: Complex64, x: Complex64) -> Result<(Complex64, f64)> {
    let p = KernelParams::unchecked(k, z);
    let s = slater_sum(&p.k_params(), k as usize + 2, k, x, 0)?;
    let pre = k_prefactor(k, z);
    Ok((s.value * pre, s.est_error * pre.norm()))
}

/// `K_z^(k)(x)` from the residue series of `G^{k+2,0}_{0,2k+2}`, for
/// `|arg x| <= pi/(2k)` including the boundary rays.
pub fn k_series(p: &KernelParams, x: Complex64) -> Result<KernelValue> {
    if x.norm() == 0.0 {
        let v = k_zero(p)?;
        return Ok(KernelValue {
            value: v,
            route: Route::Series,
            est_error: 1e-15 * v.norm(),
        });
    }
    if x.arg().abs() > PI / (2.0 * p.kf()) + RAY_SLACK {
        return domain(format!("K needs |arg x| <= pi/(2k), got arg {}", x.arg()));
    }
    if !p.k_degenerate() {
        let (v, e) = series_at(p.k, p.z, x)?;
        return Ok(KernelValue {
            value: v,
            route: Route::Series,
            est_error: e,
        });
    }
    let (v, e) = richardson_in_z(p.z, |z| series_at(p.k, z, x))?;
    Ok(KernelValue {
        value: v,
        route: Route::SeriesPerturbed,
        est_error: e,
    })
}

/// `int_0^inf exp(-t^-k) cos(xt) t^(z-k) dt` for real `x >= 0`.
pub fn k_real(p: &KernelParams, x: f64) -> Result<KernelValue> {
    k_real_with(p, x, &super::h::kernel_quad())
}

/// [`k_real`] under an explicit configuration.
pub fn k_real_with(p: &KernelParams, x: f64, cfg: &QuadratureConfig) -> Result<KernelValue> {
    cfg.validate()?;
    let cfg = *cfg;
    if x < 0.0 || !x.is_finite() {
        return domain("k_real needs x >= 0");
    }
    if x == 0.0 {
        let v = k_zero(p)?;
        return Ok(KernelValue {
            value: v,
            route: Route::Quadrature,
            est_error: 1e-15 * v.norm(),
        });
    }
    let kf = p.kf();
    let z = p.z;
    let env = move |t: f64| -> Complex64 {
        if t <= 0.0 {
            return c(0.0);
        }
        let e = -t.powf(-kf);
        if e < -745.0 {
            return c(0.0);
        }
        ((z - kf) * t.ln()).exp() * e.exp()
    };
    // past the envelope's hump and at least a couple of periods out
    let cut = 2f64.max(4.0 * PI / x);
    let n = ((cut * x / PI).ceil() as usize).max(8);
    // the integrand is below 1e-300 on (0, 0.0025^(1/k)]
    let start = (1.0 / 700.0f64).powf(1.0 / kf);
    let mut breaks = vec![start];
    for i in 1..=n {
        breaks.push(start + (cut - start) * i as f64 / n as f64);
    }
    let head = integrate_breaks(&|t: f64| env(t) * (x * t).cos(), &breaks, &cfg)?;
    let osc = QuadratureConfig {
        osc_max_halfperiods: cfg.osc_max_halfperiods.max(100),
        accel_order: cfg.accel_order.max(30),
        ..cfg
    };
    let tail = integrate_osc_tail(&env, x, 0.0, cut, &osc)?;
    Ok(KernelValue {
        value: head.value + tail.value,
        route: Route::Quadrature,
        est_error: head.error + tail.error,
    })
}

/// `ln Gamma` through the upward recurrence, so no reflection is needed.
fn lgamma_shifted(mut w: Complex64) -> Result<Complex64> {
    let mut acc = c(0.0);
    while w.re < 0.5 {
        acc -= w.ln();
        w += 1.0;
    }
    Ok(acc + lgamma_c(w)?)
}

/// `ln cos(w)` without overflow for large `|Im w|`.
fn ln_cos(w: Complex64) -> Complex64 {
    let e = if w.im >= 0.0 { I * w } else { -I * w };
    // cos w = exp(-e)/2 * (1 + exp(2e)) with Re(2e) <= 0
    -e - 2f64.ln() + (1.0 + (e * 2.0).exp()).ln()
}

/// `(1/(2 pi i k)) int_(c) Gamma(s) cos(pi s/2) Gamma((s-1-z)/k + 1) x^-s ds`
/// for `|arg x| < pi/(2k)`, on the abscissa `c = max(0, 1-k+Re z) + 1/2`.
pub fn k_contour(p: &KernelParams, x: Complex64) -> Result<KernelValue> {
    let c0 = 0f64.max(1.0 - p.kf() + p.z.re) + 0.5;
    k_contour_at(p, x, c0)
}

/// [`k_contour`] on a chosen abscissa `c > max(0, 1-k+Re z)`.
pub fn k_contour_at(p: &KernelParams, x: Complex64, abscissa: f64) -> Result<KernelValue> {
    let kf = p.kf();
    let z = p.z;
    if !(abscissa > 0f64.max(1.0 - kf + z.re)) {
        return domain(format!("abscissa {abscissa} is left of a pole"));
    }
    if x.norm() == 0.0 {
        return domain("the line integral is defined for x != 0");
    }
    let rate = 1.0 / kf - 2.0 * x.arg().abs() / PI;
    let power = abscissa + (abscissa - 1.0 - z.re) / kf;
    let ln_x = x.ln();
    let integrand = move |s: Complex64| -> Complex64 {
        let l = lgamma_shifted(s).unwrap_or(c(f64::NEG_INFINITY))
            + ln_cos(s * (PI / 2.0))
            + lgamma_shifted((s - 1.0 - z) / kf + 1.0).unwrap_or(c(f64::NEG_INFINITY))
            - s * ln_x;
        l.exp() / kf
    };
    let decay_class = if rate > 1e-9 {
        DecayClass::Exponential
    } else {
        DecayClass::Polynomial
    };
    let scale = integrand(c(abscissa)).norm().max(1e-300);
    let cfg = QuadratureConfig {
        abs_tol: 1e-16 * scale.max(1.0),
        rel_tol: 1e-12,
        max_subdivisions: 20_000,
        ..Default::default()
    };
    let spec = ContourSpec {
        c: abscissa,
        integrand: &integrand,
        decay_class,
        rate,
        power,
    };
    let r = integrate_vertical_line(&spec, &cfg)?;
    Ok(KernelValue {
        value: r.value,
        route: Route::Contour,
        est_error: r.error,
    })
}
