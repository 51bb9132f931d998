//! Residue-series (Slater) expansion of `G^{m,0}_{0,q}(X | b)` with
//! `X = (1/4)(x/2k)^(2k)`:
//!
//! `G = sum_{h<=m} X^{b_h} prod_{j<=m, j!=h} pi/sin(pi(b_j-b_h))
//!      sum_n ((-1)^m X)^n / prod_{j<=q} Gamma(1+b_h-b_j+n)`.
//!
//! Inner sums run in double-double; derivatives in `x` are taken termwise.

use crate::dd::CDd;
use crate::error::{Error, Result};
use crate::specialfn::gamma::{cos_pi, rgamma, sin_pi};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative distance of `sin(pi d)` from zero below which two parameters collide.
pub const COLLISION_TOL: f64 = 1e-6;
const HORIZON: f64 = 1e12;
const MAX_TERMS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlaterSum {
    pub value: Complex64,
    pub est_error: f64,
    pub max_partial: f64,
}

/// `ln X` for `X = (1/4)(x/2k)^(2k)`, continuous on the rays `arg x = +-pi/(2k)`.
pub fn ln_meijer_arg(k: u32, x: Complex64) -> Complex64 {
    (x / (2.0 * k as f64)).ln() * (2.0 * k as f64) - 4f64.ln()
}

/// True when two of the first `m` parameters differ by an integer.
pub fn has_collision(b: &[Complex64], m: usize) -> bool {
    for h in 0..m {
        for j in 0..m {
            if j != h {
                let d = b[j] - b[h];
                if d.im.abs() < COLLISION_TOL && (d.re - d.re.round()).abs() < COLLISION_TOL {
                    return true;
                }
            }
        }
    }
    false
}

fn falling(a: Complex64, j: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for i in 0..j {
        p *= a - i as f64;
    }
    p
}

/// `d^j/dx^j G^{m,0}_{0,q}((1/4)(x/2k)^(2k) | b)` for `x != 0`.
pub fn slater_sum(
    b: &[Complex64],
    m: usize,
    k: u32,
    x: Complex64,
    deriv: usize,
) -> Result<SlaterSum> {
    if has_collision(b, m) {
        return Err(Error::Degenerate(format!("parameters {b:?} collide")));
    }
    if x == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Slater sum evaluated at x = 0".into()));
    }
    let q = b.len();
    let two_k = 2.0 * k as f64;
    let ln_x_big = ln_meijer_arg(k, x);
    let big_x = ln_x_big.exp();
    let sgn = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let step = CDd::from_c64(big_x * sgn);
    let bd: Vec<CDd> = b.iter().map(|&v| CDd::from_c64(v)).collect();
    let mut total = CDd::ZERO;
    let mut branch_abs = 0.0;
    let mut max_partial: f64 = 0.0;
    let mut tail = 0.0;
    for h in 0..m {
        let mut pref = Complex64::new(1.0, 0.0);
        // relative error of pref from rounding in b_j - b_h
        let mut pref_rel = 8.0 * f64::EPSILON;
        for j in 0..m {
            if j != h {
                let sn = sin_pi(b[j] - b[h]);
                pref *= PI / sn;
                let cot = cos_pi(b[j] - b[h]) / sn;
                pref_rel += f64::EPSILON * (b[j].norm() + b[h].norm()) * PI * cot.norm();
            }
        }
        // first n with no 1/Gamma zero among 1 + b_h - b_j + n
        let mut n0 = 0usize;
        for j in 0..q {
            let d = b[h] - b[j] + 1.0;
            if d.im.abs() < 1e-12 && d.re <= 0.0 && (d.re - d.re.round()).abs() < 1e-12 {
                n0 = n0.max((-d.re.round()) as usize + 1);
            }
        }
        let shift: Vec<CDd> = (0..q).map(|j| bd[h] - bd[j]).collect();
        let mut u0 = Complex64::new(1.0, 0.0);
        for j in 0..q {
            u0 *= rgamma(b[h] - b[j] + (1.0 + n0 as f64));
        }
        let lead = (ln_x_big * (b[h] + n0 as f64)).exp() * pref * sgn.powi(n0 as i32) * u0;
        let mut v = CDd::ONE;
        let mut s = CDd::ZERO;
        let mut mp: f64 = 0.0;
        let mut n = n0;
        let mut small = 0;
        loop {
            let a = (b[h] + n as f64) * two_k;
            let term = if deriv == 0 {
                v
            } else {
                v.mul_c64(falling(a, deriv))
            };
            s += term;
            let tn = term.norm_l1();
            mp = mp.max(s.norm_l1()).max(tn);
            let mut den = CDd::ONE;
            for sh in &shift {
                den = den * sh.add_c64(Complex64::new(1.0 + n as f64, 0.0));
            }
            let den_abs = den.norm_l1();
            v = v * step / den;
            n += 1;
            let ratio_small = den_abs > 2.0 * big_x.norm();
            if v.norm_l1() == 0.0 {
                break;
            }
            if tn == 0.0 {
                // a zero of the falling factorial, not of the series
                continue;
            }
            if ratio_small && tn <= 1e-34 * s.norm_l1() {
                small += 1;
                if small >= 2 {
                    tail += (lead * tn).norm();
                    break;
                }
            } else {
                small = 0;
            }
            if n - n0 > MAX_TERMS {
                return Err(Error::NonConvergence(format!(
                    "Slater branch {h} at x = {x}"
                )));
            }
        }
        let bv = s.mul_c64(lead);
        branch_abs += bv.to_c64().norm() * pref_rel;
        max_partial = max_partial.max(mp * lead.norm());
        total += bv;
    }
    let mut value = total.to_c64();
    let mut est = branch_abs + 1e-31 * max_partial + tail;
    if deriv > 0 {
        let xd = x.powi(deriv as i32);
        value /= xd;
        est /= xd.norm();
    }
    let ratio = max_partial / value.norm().max(1e-8);
    if ratio > HORIZON {
        return Err(Error::Horizon {
            ratio,
            partial_re: value.re,
            partial_im: value.im,
        });
    }
    Ok(SlaterSum {
        value,
        est_error: est,
        max_partial,
    })
}
