//! `d^j/dx^j int_0^inf t^(z-k) trig(xt) trig(t^-k) dt` on steepest-descent
//! contours.
//!
//! With `t = t0 tau`, `t0 = (k/x)^(1/(k+1))` and `Lambda = (x/k)^(k/(k+1))`,
//! the product of the two trigonometric factors splits into four exponentials
//! `exp(i Lambda (s1 k tau + s2 tau^-k))`. Equal signs have a saddle at
//! `tau = 1` and are integrated along `tau = exp(u + i s psi(u))`, where
//! `psi` bends from `-pi/(4k)` at `u -> -inf` to `pi/4` at `u -> inf`.
//! Opposite signs have no saddle and are integrated along the ray
//! `arg tau = s1 pi/(2k+2)`. Every piece then decays exponentially at both ends.

use crate::error::{domain, Result};
use crate::quadrature::{integrate_breaks, QuadratureConfig};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelTrig {
    /// `cos(xt) cos(t^-k)`, the kernel `H`.
    Cos,
    /// `sin(xt) sin(t^-k)`, the second solution of the kernel ODE.
    Sin,
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn cfg() -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: 1e-16,
        rel_tol: 1e-13,
        max_subdivisions: 20_000,
        ..Default::default()
    }
}

/// Endpoints where `|g|` has fallen below `1e-19` times its value at `start`.
fn extent<G: Fn(f64) -> f64>(g: &G, start: f64, dir: f64, step0: f64) -> f64 {
    let peak = g(start).max(1e-300);
    let mut u = start;
    let mut step = step0;
    for _ in 0..400 {
        u += dir * step;
        let v = g(u);
        if !v.is_finite() {
            continue;
        }
        if v < 1e-19 * peak {
            return u;
        }
        step *= 1.15;
    }
    u
}

fn saddle_piece(k: f64, a: Complex64, lambda: f64, s: f64) -> Result<(Complex64, f64)> {
    let lp = PI / 4.0;
    let lm = PI / (4.0 * k);
    let integrand = |u: f64| -> Complex64 {
        let (psi, dpsi) = if u >= 0.0 {
            let t = (u / lp).tanh();
            (lp * t, 1.0 - t * t)
        } else {
            let t = (u / lm).tanh();
            (lm * t, 1.0 - t * t)
        };
        let ln_tau = Complex64::new(u, s * psi);
        let tau = ln_tau.exp();
        // phase relative to its saddle value i s lambda (k+1)
        let phase = I * s * lambda * (tau * k + (-ln_tau * k).exp() - (k + 1.0));
        (a * ln_tau + phase).exp() * tau * Complex64::new(1.0, s * dpsi)
    };
    let mag = |u: f64| integrand(u).norm();
    let lo = extent(&mag, 0.0, -1.0, 0.05);
    let hi = extent(&mag, 0.0, 1.0, 0.05);
    let mut breaks = vec![lo];
    for f in [0.5, 0.25, 0.1] {
        breaks.push(lo * f);
    }
    breaks.push(0.0);
    for f in [0.1, 0.25, 0.5] {
        breaks.push(hi * f);
    }
    breaks.push(hi);
    let r = integrate_breaks(&integrand, &breaks, &cfg())?;
    Ok((r.value, r.error))
}

fn ray_piece(k: f64, a: Complex64, lambda: f64, s: f64) -> Result<(Complex64, f64)> {
    let alpha = s * PI / (2.0 * k + 2.0);
    // integrate in u = ln r
    let integrand = |u: f64| -> Complex64 {
        let ln_tau = Complex64::new(u, alpha);
        let tau = ln_tau.exp();
        let phase = I * lambda * (tau * (s * k) - (-ln_tau * k).exp() * s);
        (a * ln_tau + phase).exp() * tau
    };
    let mag = |u: f64| integrand(u).norm();
    // the modulus peaks near the point where the two decay rates balance
    let mut u_peak = 0.0;
    let mut best = mag(0.0);
    let mut u = -8.0;
    while u <= 8.0 {
        let v = mag(u);
        if v > best {
            best = v;
            u_peak = u;
        }
        u += 0.25;
    }
    let lo = extent(&mag, u_peak, -1.0, 0.05);
    let hi = extent(&mag, u_peak, 1.0, 0.05);
    let breaks = vec![lo, 0.5 * (lo + u_peak), u_peak, 0.5 * (u_peak + hi), hi];
    let r = integrate_breaks(&integrand, &breaks, &cfg())?;
    Ok((r.value, r.error))
}

/// Split of the kernel into `plus e^{i L} + minus e^{-i L} + rest` with
/// `L = (k+1) (x/k)^(k/(k+1))`; the three parts vary slowly in `ln x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelComponents {
    pub plus: Complex64,
    pub minus: Complex64,
    pub rest: Complex64,
    pub error: f64,
}

impl KernelComponents {
    pub fn combine(&self, x: f64, k: u32) -> Complex64 {
        let ph = saddle_phase(k, x);
        let e = Complex64::from_polar(1.0, ph);
        self.plus * e + self.minus * e.conj() + self.rest
    }
}

/// `(k+1) (x/k)^(k/(k+1))`.
pub fn saddle_phase(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    (kf + 1.0) * (x / kf).powf(kf / (kf + 1.0))
}

pub fn kernel_components(
    k: u32,
    z: Complex64,
    x: f64,
    deriv: usize,
    trig: KernelTrig,
) -> Result<KernelComponents> {
    if !(x > 0.0) {
        return domain("steepest-descent route needs x > 0");
    }
    let kf = k as f64;
    let t0 = (kf / x).powf(1.0 / (kf + 1.0));
    let lambda = (x / kf).powf(kf / (kf + 1.0));
    let a = z - kf + deriv as f64;
    let scale = (Complex64::new(t0.ln(), 0.0) * (a + 1.0)).exp();
    let mut out = KernelComponents {
        plus: Complex64::new(0.0, 0.0),
        minus: Complex64::new(0.0, 0.0),
        rest: Complex64::new(0.0, 0.0),
        error: 0.0,
    };
    for &s1 in &[1.0, -1.0] {
        for &s2 in &[1.0, -1.0] {
            let (v, e) = if s1 == s2 {
                saddle_piece(kf, a, lambda, s1)?
            } else {
                ray_piece(kf, a, lambda, s1)?
            };
            let coef = match trig {
                KernelTrig::Cos => Complex64::new(0.25, 0.0),
                KernelTrig::Sin => Complex64::new(-0.25 * s1 * s2, 0.0),
            } * (I * s1).powi(deriv as i32)
                * scale;
            if s1 != s2 {
                out.rest += coef * v;
            } else if s1 > 0.0 {
                out.plus += coef * v;
            } else {
                out.minus += coef * v;
            }
            out.error += 0.25 * e * scale.norm();
        }
    }
    Ok(out)
}

/// `d^j/dx^j int_0^inf t^(z-k) trig(xt) trig(t^-k) dt` for `x > 0`; returns
/// the value and an error estimate.
pub fn oscillatory_kernel(
    k: u32,
    z: Complex64,
    x: f64,
    deriv: usize,
    trig: KernelTrig,
) -> Result<(Complex64, f64)> {
    let c = kernel_components(k, z, x, deriv, trig)?;
    Ok((c.combine(x, k), c.error))
}
