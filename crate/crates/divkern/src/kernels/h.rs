//! Evaluation routes for `H_z^(k)(x)`.

use super::contour::{oscillatory_kernel, KernelTrig};
use super::k::k_series;
use super::slater::{ln_meijer_arg, slater_sum};
use super::{richardson_in_z, KernelParams, KernelValue, Route};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_breaks, integrate_osc_tail, QuadratureConfig};
use crate::specialfn::bessel::{bessel_j, bessel_k, bessel_y};
use crate::specialfn::gamma::{cos_pi, gamma_c};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest `X^(1/(2k+2))` for which [`h_eval`] uses the residue series.
pub const SERIES_MAX_Y: f64 = 1.0;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `H_z^(k)(0) = (1/k) Gamma((k-1-z)/k) cos(pi (k-1-z)/(2k))`, `Re z < k-1`.
pub fn h_zero(p: &KernelParams) -> Result<Complex64> {
    let kf = p.kf();
    if p.z.re >= kf - 1.0 {
        return domain(format!(
            "H(0) diverges for Re z >= k-1 (k = {}, z = {})",
            p.k, p.z
        ));
    }
    let a = (c(kf - 1.0) - p.z) / kf;
    Ok(gamma_c(a)? * cos_pi(a * 0.5) / kf)
}

fn h_prefactor(k: u32, z: Complex64) -> Complex64 {
    let kf = k as f64;
    c(PI / kf.sqrt()) * (-(z + 1.0) / kf * 2f64.ln()).exp()
}

fn series_at(k: u32, z: Complex64, x: f64, deriv: usize) -> Result<(Complex64, f64)> {
    let p = KernelParams::unchecked(k, z);
    let s = slater_sum(&p.h_params(), k as usize + 1, k, c(x), deriv)?;
    let pre = h_prefactor(k, z);
    Ok((s.value * pre, s.est_error * pre.norm()))
}

/// `d^j/dx^j H_z^(k)(x)` from the residue series of `G^{k+1,0}_{0,2k+2}`.
pub fn h_series_deriv(p: &KernelParams, x: f64, deriv: usize) -> Result<KernelValue> {
    if x < 0.0 || !x.is_finite() {
        return domain("H is evaluated at x >= 0");
    }
    if x == 0.0 {
        let v = if deriv == 0 {
            h_zero(p)?
        } else {
            h_derivative_at_zero(p, deriv)?
        };
        return Ok(KernelValue {
            value: v,
            route: Route::Series,
            est_error: 1e-15 * v.norm(),
        });
    }
    if !p.h_degenerate() {
        let (v, e) = series_at(p.k, p.z, x, deriv)?;
        return Ok(KernelValue {
            value: v,
            route: Route::Series,
            est_error: e,
        });
    }
    let (v, e) = richardson_in_z(p.z, |z| series_at(p.k, z, x, deriv))?;
    Ok(KernelValue {
        value: v,
        route: Route::SeriesPerturbed,
        est_error: e,
    })
}

/// `H_z^(k)(x)` from the residue series.
pub fn h_series(p: &KernelParams, x: f64) -> Result<KernelValue> {
    h_series_deriv(p, x, 0)
}

/// `H_z^(k)(x)` on steepest-descent contours, for `x > 0`.
pub fn h_steepest_descent(p: &KernelParams, x: f64) -> Result<KernelValue> {
    if x == 0.0 {
        return h_series(p, 0.0);
    }
    let (v, e) = oscillatory_kernel(p.k, p.z, x, 0, KernelTrig::Cos)?;
    Ok(KernelValue {
        value: v,
        route: Route::SteepestDescent,
        est_error: e,
    })
}

/// `X^(1/(2k+2))` with `X = (1/4)(x/2k)^(2k)`.
pub fn growth_parameter(k: u32, x: f64) -> f64 {
    (ln_meijer_arg(k, c(x)).re / (2.0 * k as f64 + 2.0)).exp()
}

/// `H_z^(k)(x)` by the residue series for small `x`, steepest descent beyond.
pub fn h_eval(p: &KernelParams, x: f64) -> Result<KernelValue> {
    if x == 0.0 || growth_parameter(p.k, x) <= SERIES_MAX_Y {
        match h_series(p, x) {
            Err(Error::Horizon { .. }) => {}
            other => return other,
        }
    }
    h_steepest_descent(p, x)
}

/// `H_z^(k)(x)` by direct quadrature of the defining integral, split at
/// `eps = min(1/2, 8/x)` and `M = max(2, 8/max(x,1))`: `(0, eps]` after
/// `T = t^-k` with `cos(x T^(-1/k))` expanded, `[eps, M]` adaptively,
/// `[M, inf)` with `cos(t^-k)` expanded and each term an oscillatory tail.
pub fn h_quadrature(p: &KernelParams, x: f64) -> Result<KernelValue> {
    h_quadrature_with(p, x, &kernel_quad())
}

/// Default configuration of the quadrature routes.
pub fn kernel_quad() -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        max_subdivisions: 20_000,
        ..Default::default()
    }
}

/// [`h_quadrature`] under an explicit configuration (the oscillatory tails
/// use at least 100 half periods and acceleration order 30).
pub fn h_quadrature_with(p: &KernelParams, x: f64, cfg: &QuadratureConfig) -> Result<KernelValue> {
    cfg.validate()?;
    let cfg = *cfg;
    if x < 0.0 || !x.is_finite() {
        return domain("H is evaluated at x >= 0");
    }
    if x == 0.0 {
        let v = h_zero(p)?;
        return Ok(KernelValue {
            value: v,
            route: Route::Quadrature,
            est_error: 1e-15 * v.norm(),
        });
    }
    let kf = p.kf();
    let z = p.z;
    let osc = QuadratureConfig {
        osc_max_halfperiods: cfg.osc_max_halfperiods.max(100),
        accel_order: cfg.accel_order.max(30),
        ..cfg
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;

    // (0, eps]
    let eps = 0.5f64.min(8.0 / x);
    let t0 = eps.powf(-kf);
    let mut coef = 1.0 / kf;
    for m in 0..200 {
        let e = -(z + 1.0) / kf - 2.0 * m as f64 / kf;
        let bound = coef.abs() * 2.0 * t0.powf(e.re);
        if m > 0 && bound < 1e-17 {
            break;
        }
        let r = integrate_osc_tail(&|t: f64| (e * t.ln()).exp(), 1.0, 0.0, t0, &osc)?;
        total += r.value * coef;
        err += r.error * coef.abs();
        coef *= -x * x / ((2.0 * m as f64 + 1.0) * (2.0 * m as f64 + 2.0));
    }

    // [eps, M]
    let m_cut = 2f64.max(8.0 / x.max(1.0));
    let mid = |t: f64| ((z - kf) * t.ln()).exp() * (x * t).cos() * t.powf(-kf).cos();
    // one break per period of cos(t^-k) below 1/2
    let mut breaks = vec![eps];
    let mut big_t = t0 - 2.0 * PI;
    while big_t > 2f64.powf(kf) {
        breaks.push(big_t.powf(-1.0 / kf));
        big_t -= 2.0 * PI;
    }
    if eps < 0.5 {
        breaks.push(0.5);
    }
    let n_pieces = ((m_cut - 0.5) * x / PI).ceil().max(4.0) as usize;
    for i in 1..=n_pieces {
        breaks.push(0.5 + (m_cut - 0.5) * i as f64 / n_pieces as f64);
    }
    let r = integrate_breaks(&mid, &breaks, &cfg)?;
    total += r.value;
    err += r.error;

    // [M, inf)
    let mut coef: f64 = 1.0;
    for m in 0..200 {
        let e = z - kf - 2.0 * kf * m as f64;
        let bound = coef.abs() * 2.0 * m_cut.powf(e.re) / x;
        if m > 0 && bound < 1e-17 {
            break;
        }
        let r = integrate_osc_tail(&|t: f64| (e * t.ln()).exp(), x, 0.0, m_cut, &osc)?;
        total += r.value * coef;
        err += r.error * coef.abs();
        coef *= -1.0 / ((2.0 * m as f64 + 1.0) * (2.0 * m as f64 + 2.0));
    }
    Ok(KernelValue {
        value: total,
        route: Route::Quadrature,
        est_error: err,
    })
}

/// `(1/2)[e^{i pi (k-1-z)/(2k)} K(e^{-i pi/(2k)} x) + e^{-i pi (k-1-z)/(2k)} K(e^{i pi/(2k)} x)]`
/// with both `K` values from the residue series.
pub fn h_from_k_combination(p: &KernelParams, x: f64) -> Result<KernelValue> {
    if x < 0.0 || !x.is_finite() {
        return domain("H is evaluated at x >= 0");
    }
    if x == 0.0 {
        return h_series(p, 0.0);
    }
    let kf = p.kf();
    let rot = Complex64::from_polar(1.0, PI / (2.0 * kf));
    let phase = (Complex64::new(0.0, PI / (2.0 * kf)) * (c(kf - 1.0) - p.z)).exp();
    let km = k_series(p, c(x) / rot)?;
    let kp = k_series(p, c(x) * rot)?;
    let v = (phase * km.value + kp.value / phase) * 0.5;
    let route = if km.route == Route::SeriesPerturbed {
        Route::SeriesPerturbed
    } else {
        Route::Series
    };
    Ok(KernelValue {
        value: v,
        route,
        est_error: 0.5 * (km.est_error * phase.norm() + kp.est_error / phase.norm()),
    })
}

/// `(pi/2) x^(-z/2) [cos(pi z/2) M_z(2 sqrt x) - sin(pi z/2) J_z(2 sqrt x)]`,
/// `M_nu = (2/pi) K_nu - Y_nu`: the case `k = 1` in Bessel functions.
pub fn h_k1_closed_form(z: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return domain("the Bessel form needs x > 0");
    }
    if !(z.re > -1.0 && z.re < 1.0) {
        return domain("the Bessel form needs -1 < Re z < 1");
    }
    let y = c(2.0 * x.sqrt());
    let m = bessel_k(z, y)? * (2.0 / PI) - bessel_y(z, y)?;
    let j = bessel_j(z, y)?;
    let half = z * 0.5;
    let pre = (-half * x.ln()).exp() * (PI / 2.0);
    Ok(pre * (cos_pi(half) * m - crate::specialfn::gamma::sin_pi(half) * j))
}

/// `d^j/dx^j H_z^(k)(x)` at `x = 0` for `0 <= j <= 2k+1` and `-j-1 < Re z < k-j-1`.
pub fn h_derivative_at_zero(p: &KernelParams, j: usize) -> Result<Complex64> {
    let kf = p.kf();
    if j > 2 * p.k as usize + 1 {
        return domain(format!("derivative order {j} exceeds 2k+1"));
    }
    let jf = j as f64;
    if !(p.z.re > -jf - 1.0 && p.z.re < -jf - 1.0 + kf) {
        return domain(format!(
            "derivative {j} at 0 needs {} < Re z < {}",
            -jf - 1.0,
            kf - jf - 1.0
        ));
    }
    if j % 2 == 1 {
        return Ok(c(0.0));
    }
    let a = (c(kf - jf - 1.0) - p.z) / kf;
    let sign = if (j / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(gamma_c(a)? * cos_pi(a * 0.5) * (sign / kf))
}

/// Coefficient of `x^(2i)` in `H`, `0 <= i <= k-1`, read off the `n = 0`
/// term of the residue branch at `b_{i+1} = i/k`.
pub fn h_series_monomial(p: &KernelParams, i: usize) -> Result<Complex64> {
    let k = p.k as usize;
    if i >= k {
        return domain("monomial index must be below k");
    }
    let b = p.h_params();
    let h = i;
    let mut v = h_prefactor(p.k, p.z);
    for j in 0..=k {
        if j != h {
            v *= gamma_c(b[j] - b[h])?;
        }
    }
    for bj in b.iter().skip(k + 1) {
        v /= gamma_c(c(1.0) - bj + b[h])?;
    }
    let two_k = 2.0 * k as f64;
    Ok(v * two_k.powi(-(2 * i as i32)) * 4f64.powf(-(i as f64) / k as f64))
}

/// Exponent `theta = 1/(4(k+1)) - (1+z)/(2k(k+1))` of the asymptotic envelope.
pub fn h_asymptotic_theta(p: &KernelParams) -> Complex64 {
    let kf = p.kf();
    c(1.0 / (4.0 * (kf + 1.0))) - (p.z + 1.0) / (2.0 * kf * (kf + 1.0))
}

/// Envelope `sqrt(pi) X^theta / (sqrt(k(k+1)) 2^((1+z)/k))`, `X = (1/4)(y/2k)^(2k)`.
pub fn h_asymptotic_amplitude(p: &KernelParams, y: f64) -> Complex64 {
    let kf = p.kf();
    let ln_x = ln_meijer_arg(p.k, c(y));
    (h_asymptotic_theta(p) * ln_x).exp() * PI.sqrt() / (kf * (kf + 1.0)).sqrt()
        * (-(p.z + 1.0) / kf * 2f64.ln()).exp()
}

/// Leading large-`y` behaviour: the envelope times `cos(pi/4 + (2k+2) X^(1/(2k+2)))`.
pub fn h_asymptotic(p: &KernelParams, y: f64) -> Complex64 {
    let kf = p.kf();
    let phase = PI / 4.0 + (2.0 * kf + 2.0) * growth_parameter(p.k, y);
    h_asymptotic_amplitude(p, y) * phase.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallXBound {
    pub max_abs: f64,
    /// `2 (|H(0)| + 1)`, or `None` when `Re z >= k-1` and `H(0)` is infinite.
    pub bound: Option<f64>,
    pub holds: bool,
}

/// Sample `|H(x)|` at 50 points of `(0, 0.1]` against `2 (|H(0)| + 1)`.
///
/// For `Re z >= k-1` the branch `X^{b_{k+1}}` behaves like `x^(k-1-z)`, so
/// `H` is unbounded at 0 and the check reports `holds = false`.
pub fn h_small_x_bound(p: &KernelParams) -> Result<SmallXBound> {
    let bound = h_zero(p).ok().map(|h0| 2.0 * (h0.norm() + 1.0));
    let mut max_abs: f64 = 0.0;
    for i in 1..=50 {
        let x = 0.1 * i as f64 / 50.0;
        max_abs = max_abs.max(h_series(p, x)?.value.norm());
    }
    let holds = bound.is_some_and(|b| max_abs <= b);
    Ok(SmallXBound {
        max_abs,
        bound,
        holds,
    })
}
