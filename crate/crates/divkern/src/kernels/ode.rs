//! The order-`2k+2` equation
//! `x^2 w^(2k+2) + (2z+k+3) x w^(2k+1) + (z+1)(z+k+1) w^(2k) + (-1)^k k^2 w = 0`
//! satisfied by `H` and by the sine-kernel companion
//! `int_0^inf t^(z-k) sin(xt) sin(t^-k) dt`.

use super::contour::{oscillatory_kernel, KernelTrig};
use super::h::h_series_deriv;
use super::KernelParams;
use crate::combinat::lemma45_lhs;
use crate::error::{domain, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeSolution {
    H,
    ISine,
}

/// Coefficients of `x^2 w^(2k+2)`, `x w^(2k+1)`, `w^(2k)` and `w`; the first
/// three are the top coefficients of the Meijer-G operator expanded in
/// Stirling numbers.
pub fn ode_coefficients(p: &KernelParams) -> Result<[Complex64; 4]> {
    let k = p.k as usize;
    let q = 2 * k + 2;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok([
        lemma45_lhs(k, p.z, q)?,
        lemma45_lhs(k, p.z, q - 1)?,
        lemma45_lhs(k, p.z, q - 2)?,
        Complex64::new(sign * (k * k) as f64, 0.0),
    ])
}

fn derivatives(p: &KernelParams, x: f64, which: OdeSolution) -> Result<[Complex64; 4]> {
    let k = p.k as usize;
    let orders = [2 * k + 2, 2 * k + 1, 2 * k, 0];
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, &j) in out.iter_mut().zip(&orders) {
        *o = match which {
            OdeSolution::H => h_series_deriv(p, x, j)?.value,
            OdeSolution::ISine => oscillatory_kernel(p.k, p.z, x, j, KernelTrig::Sin)?.0,
        };
    }
    Ok(out)
}

/// Residual of the kernel equation at `x > 0`, divided by its largest term.
pub fn ode_residual(p: &KernelParams, x: f64, which: OdeSolution) -> Result<f64> {
    if !(x > 0.0) {
        return domain("the ODE residual is evaluated at x > 0");
    }
    let c = ode_coefficients(p)?;
    let w = derivatives(p, x, which)?;
    let terms = [
        c[0] * x * x * w[0],
        c[1] * x * w[1],
        c[2] * w[2],
        c[3] * w[3],
    ];
    let sum: Complex64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    Ok(if scale == 0.0 {
        0.0
    } else {
        sum.norm() / scale
    })
}
