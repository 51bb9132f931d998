//! Piecewise Chebyshev tables of `H` on `[x_lo, x_hi]` for sweeps that need
//! millions of kernel values.
//!
//! The steepest-descent split `plus e^{iL} + minus e^{-iL} + rest` has slowly
//! varying parts, which are interpolated in `ln x`; the phase `L` is exact.

use super::contour::{kernel_components, saddle_phase, KernelComponents, KernelTrig};
use super::KernelParams;
use crate::error::{domain, Result};
use num_complex::Complex64;
use rayon::prelude::*;

const DEGREE: usize = 16;
const PIECE_WIDTH: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct KernelTable {
    k: u32,
    lo: f64,
    width: f64,
    coeffs: Vec<[[Complex64; DEGREE]; 3]>,
    /// Largest interpolation error seen at the check points, plus the
    /// integration error of the nodes.
    pub max_error: f64,
}

fn nodes() -> [f64; DEGREE] {
    let mut t = [0.0; DEGREE];
    for (j, v) in t.iter_mut().enumerate() {
        *v = (std::f64::consts::PI * (j as f64 + 0.5) / DEGREE as f64).cos();
    }
    t
}

fn clenshaw(c: &[Complex64; DEGREE], t: f64) -> Complex64 {
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    for &cj in c.iter().skip(1).rev() {
        let b0 = cj + b1 * (2.0 * t) - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + b1 * t - b2
}

impl KernelTable {
    /// Table of `H_z^(k)` on `[x_lo, x_hi]`, `0 < x_lo < x_hi`.
    pub fn build(p: &KernelParams, x_lo: f64, x_hi: f64) -> Result<KernelTable> {
        if !(x_lo > 0.0 && x_hi > x_lo) {
            return domain("kernel table needs 0 < x_lo < x_hi");
        }
        let lo = x_lo.ln();
        let span = x_hi.ln() - lo;
        let n = (span / PIECE_WIDTH).ceil().max(1.0) as usize;
        let width = span / n as f64;
        let t = nodes();
        let comp = |u: f64| kernel_components(p.k, p.z, u.exp(), 0, KernelTrig::Cos);
        let pieces: Vec<Result<([[Complex64; DEGREE]; 3], f64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let a = lo + width * i as f64;
                let mut vals = [[Complex64::new(0.0, 0.0); DEGREE]; 3];
                let mut err: f64 = 0.0;
                for (j, &tj) in t.iter().enumerate() {
                    let c = comp(a + 0.5 * width * (tj + 1.0))?;
                    vals[0][j] = c.plus;
                    vals[1][j] = c.minus;
                    vals[2][j] = c.rest;
                    err = err.max(c.error);
                }
                let mut coeffs = [[Complex64::new(0.0, 0.0); DEGREE]; 3];
                for (cc, vv) in coeffs.iter_mut().zip(&vals) {
                    for (m, cm) in cc.iter_mut().enumerate() {
                        let mut s = Complex64::new(0.0, 0.0);
                        for (j, v) in vv.iter().enumerate() {
                            s += v
                                * (std::f64::consts::PI * m as f64 * (j as f64 + 0.5)
                                    / DEGREE as f64)
                                    .cos();
                        }
                        *cm = s * (2.0 / DEGREE as f64);
                    }
                    cc[0] *= 0.5;
                }
                // one off-node check per piece
                let tc = 0.377;
                let x = (a + 0.5 * width * (tc + 1.0)).exp();
                let direct = comp(x.ln())?.combine(x, p.k);
                let interp = KernelComponents {
                    plus: clenshaw(&coeffs[0], tc),
                    minus: clenshaw(&coeffs[1], tc),
                    rest: clenshaw(&coeffs[2], tc),
                    error: 0.0,
                }
                .combine(x, p.k);
                Ok((coeffs, err + (direct - interp).norm()))
            })
            .collect();
        let mut coeffs = Vec::with_capacity(n);
        let mut max_error: f64 = 0.0;
        for r in pieces {
            let (c, e) = r?;
            coeffs.push(c);
            max_error = max_error.max(e);
        }
        Ok(KernelTable {
            k: p.k,
            lo,
            width,
            coeffs,
            max_error,
        })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (
            self.lo.exp(),
            (self.lo + self.width * self.coeffs.len() as f64).exp(),
        )
    }

    /// `H(x)` for `x` inside the table range (clamped to the end pieces).
    pub fn eval(&self, x: f64) -> Complex64 {
        let u = (x.ln() - self.lo) / self.width;
        let i = (u.floor().max(0.0) as usize).min(self.coeffs.len() - 1);
        let t = (2.0 * (u - i as f64) - 1.0).clamp(-1.0, 1.0);
        let c = &self.coeffs[i];
        let e = Complex64::from_polar(1.0, saddle_phase(self.k, x));
        clenshaw(&c[0], t) * e + clenshaw(&c[1], t) * e.conj() + clenshaw(&c[2], t)
    }
}
