//! Bessel functions `J, Y, I, K` of complex order.
//!
//! | function | method |
//! |----------|--------|
//! | `J_nu`, `I_nu` | power series with double-double accumulation (`|x| <= 17`) |
//! | `Y_nu` | reflection formula from two `J` series when `nu` is at least `1e-4` from an integer and `|x| <= 17`; Hankel route otherwise |
//! | `H^(1,2)_nu` | Hankel asymptotic expansion for `x >= 25`, otherwise trapezoidal rule on the steepest-descent path of the Sommerfeld integral |
//! | `K_nu` | trapezoidal rule on `int_0^inf exp(-x cosh t) cosh(nu t) dt`, `Re x > 0` |
//!
//! Large real arguments of `J` are taken from the Hankel pair.

use super::gamma::rgamma;
use crate::dd::CDd;
use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J,
    Y,
    I,
    K,
}

/// Order of a Bessel function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    pub nu: Complex64,
}

/// Distance below which the order is treated as an integer by `Y`.
pub const NEAR_INTEGER: f64 = 1e-4;
const SERIES_MAX: f64 = 17.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn integer_order(nu: Complex64, tol: f64) -> Option<i64> {
    if nu.im.abs() < tol && (nu.re - nu.re.round()).abs() < tol {
        Some(nu.re.round() as i64)
    } else {
        None
    }
}

/// `sum_m (sign x^2/4)^m / (m! (nu+1)_m)` with double-double accumulation.
fn series_core(nu: Complex64, x: Complex64, sign: f64) -> Complex64 {
    let q = CDd::from_c64(x * x * (0.25 * sign));
    let nu1 = CDd::from_c64(nu + 1.0);
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    for m in 0..500 {
        let mf = m as f64;
        let den = nu1.add_c64(c(mf)).mul_c64(c(mf + 1.0));
        term = term * q / den;
        sum += term;
        if term.norm_l1() < 1e-34 * sum.norm_l1() && mf > x.norm() * 0.5 {
            break;
        }
    }
    sum.to_c64()
}

fn series_j_or_i(nu: Complex64, x: Complex64, sign: f64) -> Complex64 {
    if let Some(n) = integer_order(nu, 1e-15) {
        if n < 0 {
            // J_{-n} = (-1)^n J_n, I_{-n} = I_n
            let v = series_j_or_i(c(-n as f64), x, sign);
            return if sign < 0.0 && n % 2 != 0 { -v } else { v };
        }
    }
    let pre = (nu * (x * 0.5).ln()).exp() * rgamma(nu + 1.0);
    pre * series_core(nu, x, sign)
}

/// Hankel asymptotic sum `sum_k (+-i)^k a_k(nu) / x^k`.
fn hankel_asymptotic(nu: Complex64, x: f64, kind: i32) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let unit = if kind == 1 {
        Complex64::i()
    } else {
        -Complex64::i()
    };
    let mut term = c(1.0);
    let mut sum = c(1.0);
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term = term * (mu - odd * odd) * unit / (kf * 8.0 * x);
        let t = term.norm();
        if t > prev {
            break;
        }
        sum += term;
        prev = t;
        if t < 1e-17 * sum.norm() {
            break;
        }
    }
    let omega = c(x) - nu * (PI / 2.0) - PI / 4.0;
    let phase = if kind == 1 {
        (Complex64::i() * omega).exp()
    } else {
        (-Complex64::i() * omega).exp()
    };
    phase * sum * (2.0 / (PI * x)).sqrt()
}

/// Sommerfeld integral along a path through the saddle at `i pi/2`.
fn hankel_path(nu: Complex64, x: Complex64, kind: i32) -> Complex64 {
    let s = if kind == 1 { 1.0 } else { -1.0 };
    let h = (0.4 / x.norm().sqrt()).min(0.08);
    let f = |u: f64| -> Complex64 {
        let th = 0.5 * PI * (1.0 + (2.0 * u / PI).tanh());
        let w = Complex64::new(u, s * th);
        let sech = 1.0 / (2.0 * u / PI).cosh();
        let dw = Complex64::new(1.0, s * sech * sech);
        (x * w.sinh() - nu * w).exp() * dw
    };
    let mut sum = f(0.0);
    let mut peak = sum.norm();
    for dir in [1.0, -1.0] {
        let mut j = 1;
        let mut small = 0;
        loop {
            let v = f(dir * j as f64 * h);
            let a = v.norm();
            sum += v;
            peak = peak.max(a);
            if a < 1e-18 * peak || !a.is_finite() {
                small += 1;
                if small > 3 {
                    break;
                }
            } else {
                small = 0;
            }
            j += 1;
            if j > 200_000 {
                break;
            }
        }
    }
    // H1 = (1/(pi i)) int, H2 = -(1/(pi i)) int
    sum * h / (Complex64::i() * PI) * s
}

/// Hankel function `H^(1)_nu(x)` (`kind = 1`) or `H^(2)_nu(x)` (`kind = 2`)
/// for `Re x > 0`.
pub fn hankel(nu: Complex64, x: Complex64, kind: i32) -> Result<Complex64> {
    if x.re <= 0.0 {
        return domain(format!("Hankel function needs Re x > 0, got {x}"));
    }
    if x.im == 0.0 && x.re >= ASYMPTOTIC_MIN && nu.norm() <= 6.0 {
        Ok(hankel_asymptotic(nu, x.re, kind))
    } else {
        Ok(hankel_path(nu, x, kind))
    }
}

/// `K_nu(x)` for `Re x > 0`.
pub fn bessel_k(nu: Complex64, x: Complex64) -> Result<Complex64> {
    if x.re <= 0.0 {
        return domain(format!("K_nu needs Re x > 0, got {x}"));
    }
    let ax = x.norm();
    let h = (0.5 / ax.sqrt()).min(0.1);
    let nure = nu.re.abs();
    // exp(-x) factored out to avoid underflow for large x
    let f = |t: f64| -> Complex64 {
        let g = -x * (t.cosh() - 1.0);
        let ch = if t == 0.0 { c(1.0) } else { (nu * t).cosh() };
        g.exp() * ch
    };
    let mut sum = 0.5 * f(0.0);
    let mut j = 1;
    loop {
        let t = j as f64 * h;
        let v = f(t);
        sum += v;
        let decay = x.re * (t.cosh() - 1.0) - nure * t;
        if decay > 45.0 + (sum.norm().max(1e-300)).ln().max(0.0) && j > 4 {
            break;
        }
        j += 1;
        if j > 1_000_000 {
            return Err(Error::NonConvergence("K_nu trapezoid".into()));
        }
    }
    Ok(sum * h * (-x).exp())
}

/// `Y_nu(x)` by the reflection formula `(J_nu cos(nu pi) - J_{-nu}) / sin(nu pi)`
/// with no integer-order guard.
pub fn bessel_y_reflection(nu: Complex64, x: Complex64) -> Complex64 {
    let jp = series_j_or_i(nu, x, -1.0);
    let jm = series_j_or_i(-nu, x, -1.0);
    let npi = nu * PI;
    (jp * npi.cos() - jm) / npi.sin()
}

fn j_large(nu: Complex64, x: Complex64) -> Result<Complex64> {
    let h1 = hankel(nu, x, 1)?;
    let h2 = hankel(nu, x, 2)?;
    Ok((h1 + h2) * 0.5)
}

/// `Z_nu(x)` for the requested kind.
pub fn bessel(order: BesselOrder, kind: BesselKind, x: Complex64) -> Result<Complex64> {
    let nu = order.nu;
    match kind {
        BesselKind::J => {
            if x.norm() <= SERIES_MAX || x.re <= 0.0 || x.im != 0.0 {
                Ok(series_j_or_i(nu, x, -1.0))
            } else {
                j_large(nu, x)
            }
        }
        BesselKind::I => Ok(series_j_or_i(nu, x, 1.0)),
        BesselKind::K => {
            if x.norm() == 0.0 {
                return Err(Error::Pole("K_nu at x = 0".into()));
            }
            bessel_k(nu, x)
        }
        BesselKind::Y => {
            if x.norm() == 0.0 {
                return Err(Error::Pole("Y_nu at x = 0".into()));
            }
            let near_int = integer_order(nu, NEAR_INTEGER).is_some();
            if x.norm() <= SERIES_MAX && !near_int {
                Ok(bessel_y_reflection(nu, x))
            } else {
                let h1 = hankel(nu, x, 1)?;
                let h2 = hankel(nu, x, 2)?;
                Ok((h1 - h2) / (2.0 * Complex64::i()))
            }
        }
    }
}

pub fn bessel_j(nu: Complex64, x: Complex64) -> Result<Complex64> {
    bessel(BesselOrder { nu }, BesselKind::J, x)
}

pub fn bessel_y(nu: Complex64, x: Complex64) -> Result<Complex64> {
    bessel(BesselOrder { nu }, BesselKind::Y, x)
}

pub fn bessel_i(nu: Complex64, x: Complex64) -> Result<Complex64> {
    bessel(BesselOrder { nu }, BesselKind::I, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        c(x)
    }

    // Reference values from standard tables.
    #[test]
    fn integer_order_references() {
        let j0 = bessel_j(r(0.0), r(1.0)).unwrap();
        assert!((j0.re - 0.765_197_686_557_966_6).abs() < 1e-15);
        let y0 = bessel_y(r(0.0), r(1.0)).unwrap();
        assert!((y0.re - 0.088_256_964_215_676_96).abs() < 1e-13, "{y0}");
        let k0 = bessel_k(r(0.0), r(1.0)).unwrap();
        assert!((k0.re - 0.421_024_438_240_708_3).abs() < 1e-14, "{k0}");
        let k1 = bessel_k(r(1.0), r(2.0)).unwrap();
        assert!((k1.re - 0.139_865_881_816_522_4).abs() < 1e-14, "{k1}");
        let y1 = bessel_y(r(1.0), r(30.0)).unwrap();
        assert!((y1.re - 0.084_425_570_661_747_23).abs() < 1e-13, "{y1}");
        let j0b = bessel_j(r(0.0), r(20.0)).unwrap();
        assert!((j0b.re - 0.167_024_664_340_583_1).abs() < 1e-13, "{j0b}");
        let y0m = bessel_y(r(0.0), r(20.0)).unwrap();
        assert!((y0m.re - 0.062_640_596_809_383_9).abs() < 1e-13, "{y0m}");
    }

    #[test]
    fn half_order() {
        for &x in &[0.7, 3.1, 19.0, 40.0] {
            let j = bessel_j(r(-0.5), r(x)).unwrap();
            let e = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!(
                (j.re - e).abs() < 1e-13 && j.im.abs() < 1e-13,
                "x={x} {j} {e}"
            );
            let k = bessel_k(r(0.5), r(x)).unwrap();
            let ek = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((k.re - ek).abs() < 1e-14 * ek.max(1e-300) * 10.0, "x={x}");
        }
    }

    #[test]
    fn k_even_in_order() {
        let nu = Complex64::new(0.37, 0.21);
        for &x in &[
            Complex64::new(0.3, 0.0),
            Complex64::new(2.0, 1.5),
            Complex64::new(12.0, -3.0),
        ] {
            let a = bessel_k(nu, x).unwrap();
            let b = bessel_k(-nu, x).unwrap();
            assert!((a - b).norm() < 1e-15 * a.norm().max(1e-300) * 10.0);
        }
    }

    #[test]
    fn wronskian_jy() {
        // J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi x)
        let nu = Complex64::new(0.3, 0.1);
        for &x in &[0.5, 5.0, 16.0, 18.0, 30.0] {
            let j0 = bessel_j(nu, r(x)).unwrap();
            let j1 = bessel_j(nu + 1.0, r(x)).unwrap();
            let y0 = bessel_y(nu, r(x)).unwrap();
            let y1 = bessel_y(nu + 1.0, r(x)).unwrap();
            let w = j1 * y0 - j0 * y1;
            assert!(
                (w - 2.0 / (PI * x)).norm() < 1e-12 / x.min(1.0),
                "x={x} {w}"
            );
        }
    }

    #[test]
    fn near_integer_y_limit() {
        let lim = bessel_y(r(0.0), r(1.3)).unwrap();
        let refl = bessel_y_reflection(r(1e-4), r(1.3));
        let refl2 = bessel_y_reflection(r(2e-4), r(1.3));
        let extrap = 2.0 * refl - refl2;
        assert!((refl - lim).norm() < 1e-4);
        assert!((extrap - lim).norm() < 1e-7, "{extrap} {lim}");
    }

    #[test]
    fn path_and_asymptotic_agree() {
        let nu = Complex64::new(0.25, 0.0);
        for &x in &[25.0, 40.0] {
            let a = hankel_asymptotic(nu, x, 1);
            let b = hankel_path(nu, r(x), 1);
            assert!((a - b).norm() < 1e-13, "x={x} {a} {b}");
        }
    }
}
