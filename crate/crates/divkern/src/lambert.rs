//! Lambert series `sum sigma_z^(k)(n) e^(-nw)` and their exact Wigert-type
//! transformations, with the partial-fraction lemmas behind them.
//!
//! The dual side is a sum over `n` of `B`-transform combinations at
//! `a = 2 pi (2 pi n / w)^(1/k)` rotated by powers of `zeta_4k = e^(i pi/(2k))`.
//! For large `a` each `B` is a power series in `1/a` plus a part of size
//! `e^(-Re a)`; the powers mostly cancel between rotations, and the survivors
//! are summed over the remaining `n` in closed form through
//! `sum S_z^(k)(n) n^-s = zeta(ks) zeta(s + 1 - (1+z)/k)`.

use crate::arith::{build_table, s_dirichlet_tail};
use crate::dd::CSum;
use crate::error::{domain, Result};
use crate::kernels::KernelParams;
use crate::quadrature::{integrate_breaks, integrate_osc_tail, QuadratureConfig};
use crate::report::{
    discrepancy, fmt_c, ToleranceKind, Tolerances, VerificationReport, REPORT_SCHEMA,
};
use crate::specialfn::btransform::ASYMPTOTIC_RADIUS;
use crate::specialfn::gamma::{gamma_c, sin_pi};
use crate::specialfn::{b_transform, zeta_c, BTransformInput};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// `zeta_4k^e`.
pub fn root_4k(k: u32, e: i64) -> Complex64 {
    cis(PI * e as f64 / (2.0 * k as f64))
}

/// Exponential cut: terms below `e^-EXP_CUT` relative are dropped.
const EXP_CUT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambertConfig {
    pub p: KernelParams,
    pub w: Complex64,
    /// Left-side terms; `None` picks the count from the tail bound.
    pub n_lhs: Option<u64>,
    /// Dual-series terms summed exactly; `None` picks the count adaptively.
    pub n_rhs: Option<u64>,
}

impl LambertConfig {
    pub fn new(k: u32, z: Complex64, w: Complex64) -> Result<Self> {
        let p = KernelParams::new(k, z)?;
        if !(w.re > 0.0) || !w.im.is_finite() {
            return domain(format!("need Re w > 0, got w = {w}"));
        }
        Ok(LambertConfig {
            p,
            w,
            n_lhs: None,
            n_rhs: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub est_error: f64,
    pub terms: u64,
}

fn lhs_terms(k: u32, z: Complex64, w: Complex64) -> u64 {
    // |sigma_z^(k)(n)| <= n^((1 + max(Re z, 0))/k)
    let g = (1.0 + z.re.max(0.0)) / k as f64;
    let mut n = 1.0f64;
    for _ in 0..50 {
        n = ((45.0 + g * n.max(1.0).ln()) / w.re).max(1.0);
    }
    n.ceil() as u64 + 1
}

fn lhs_tail_bound(k: u32, z: Complex64, w: Complex64, n: u64) -> f64 {
    let g = (1.0 + z.re.max(0.0)) / k as f64;
    let nf = (n + 1) as f64;
    let r = (-w.re).exp() * (1.0 + 1.0 / nf).powf(g);
    nf.powf(g) * (-w.re * nf).exp() / (1.0 - r).max(1e-300)
}

/// `sum_n sigma_z^(k)(n) e^(-nw)`.
pub fn lambert_lhs(cfg: &LambertConfig) -> Result<SeriesValue> {
    let (k, z, w) = (cfg.p.k, cfg.p.z, cfg.w);
    let n = cfg.n_lhs.unwrap_or_else(|| lhs_terms(k, z, w));
    let t = build_table(k, z, n)?;
    let mut acc = CSum::new();
    for i in 1..=n {
        acc.add(t.sigma(i) * (-w * i as f64).exp());
    }
    let est = lhs_tail_bound(k, z, w, n) + 1e-16 * acc.max_partial();
    Ok(SeriesValue {
        value: acc.value(),
        est_error: est,
        terms: n,
    })
}

/// The same series regrouped as `sum_d d^z / (e^(d^k w) - 1)`.
pub fn lambert_resummed(k: u32, z: Complex64, w: Complex64) -> Result<SeriesValue> {
    if !(w.re > 0.0) {
        return domain("need Re w > 0");
    }
    let mut acc = CSum::new();
    let mut d = 1u64;
    loop {
        let x = w * (d as f64).powi(k as i32);
        let lnd = (d as f64).ln();
        let term = (z * lnd - x).exp() / (c(1.0) - (-x).exp());
        acc.add(term);
        if x.re > 45.0 + z.re.max(0.0) * lnd {
            break;
        }
        d += 1;
    }
    Ok(SeriesValue {
        value: acc.value(),
        est_error: 1e-16 * acc.max_partial(),
        terms: d,
    })
}

/// Weighted rotations `(W_i, rho_i)`, the `B` order, the power of `n` and
/// the prefactor of the dual series for `(k, z, w)`.
struct DualShape {
    rot: Vec<(Complex64, Complex64)>,
    zb: Complex64,
    n_pow: Complex64,
    pref: Complex64,
}

fn dual_shape(k: u32, z: Complex64, w: Complex64) -> DualShape {
    let kf = k as f64;
    let ki = k as i64;
    let mut rot = Vec::new();
    if k.is_multiple_of(2) {
        for j in 1..=(ki / 2) {
            let e = 2 * j - 1;
            let a = root_4k(k, (2 - ki) * e);
            rot.push((a, root_4k(k, e)));
            rot.push((a.conj(), root_4k(k, -e)));
        }
        let sign = if (k / 2 - 1).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let pref = ((c(2.0 + 2.0 / kf) - z) * (2.0 * PI).ln()).exp() * sign
            / (PI * PI * kf * (w.ln() * (2.0 / kf)).exp());
        DualShape {
            rot,
            zb: z,
            n_pow: (c(1.0) - z) / kf,
            pref,
        }
    } else {
        rot.push((c(1.0), c(1.0)));
        for j in 1..=((ki - 1) / 2) {
            let bj = root_4k(k, (1 - ki) * 2 * j);
            rot.push((bj, root_4k(k, 2 * j)));
            rot.push((bj.conj(), root_4k(k, -2 * j)));
        }
        let sign = if ((k - 1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let pref = ((c(1.0 + 1.0 / kf) - z) * (2.0 * PI).ln()).exp() * sign
            / (PI * PI * kf * (w.ln() / kf).exp());
        DualShape {
            rot,
            zb: z + 1.0,
            n_pow: -z / kf,
            pref,
        }
    }
}

/// Main terms `-zeta(-z)/2 + zeta(k-z)/w + Gamma((1+z)/k) zeta((1+z)/k) / (k w^((1+z)/k))`.
pub fn wigert_main(k: u32, z: Complex64, w: Complex64) -> Result<Complex64> {
    let kf = k as f64;
    let r = (z + 1.0) / kf;
    Ok(-zeta_c(-z)? * 0.5
        + zeta_c(c(kf) - z)? / w
        + gamma_c(r)? * zeta_c(r)? / (kf * (w.ln() * r).exp()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WigertValue {
    pub value: Complex64,
    pub main: Complex64,
    /// Dual series over `n <= terms`.
    pub series: Complex64,
    /// Closed-form power tail over `n > terms`.
    pub tail: Complex64,
    pub terms: u64,
    pub est_error: f64,
}

/// Right side of the Wigert-type transformation for `z != k - 1`.
pub fn wigert_rhs(cfg: &LambertConfig) -> Result<WigertValue> {
    let (k, z, w) = (cfg.p.k, cfg.p.z, cfg.w);
    if (z - (k as f64 - 1.0)).norm() < 1e-12 {
        return domain("the transformation excludes z = k - 1");
    }
    let kf = k as f64;
    let shape = dual_shape(k, z, w);
    let cc = (w.ln() * (-1.0 / kf)).exp() * (2.0 * PI).powf(1.0 + 1.0 / kf);
    let min_re = shape
        .rot
        .iter()
        .map(|&(_, r)| (cc * r).re)
        .fold(f64::INFINITY, f64::min);
    let n_exact = cfg.n_rhs.unwrap_or_else(|| {
        let need = (EXP_CUT.max(ASYMPTOTIC_RADIUS) / min_re.min(cc.norm())).powf(kf);
        need.ceil().max(1.0) as u64
    });
    let (terms, mag) = dual_terms(k, z, &shape, cc, n_exact)?;
    let mut acc = CSum::new();
    for t in terms {
        acc.add(t);
    }
    let series = acc.value() * shape.pref;
    let tail = power_tail(k, z, &shape, cc, n_exact)? * shape.pref;
    let main = wigert_main(k, z, w)?;
    let est = 1e-13 * mag * shape.pref.norm() + (-EXP_CUT).exp() * series.norm();
    Ok(WigertValue {
        value: main + series + tail,
        main,
        series,
        tail,
        terms: n_exact,
        est_error: est,
    })
}

/// Unscaled dual-series terms for `n = 1..=n_max` and the size of their
/// largest partial contributions.
fn dual_terms(
    k: u32,
    z: Complex64,
    shape: &DualShape,
    cc: Complex64,
    n_max: u64,
) -> Result<(Vec<Complex64>, f64)> {
    let kf = k as f64;
    let table = build_table(k, z, n_max.max(1))?;
    let mut out = Vec::with_capacity(n_max as usize);
    let mut mag = 0.0;
    for n in 1..=n_max {
        let nf = n as f64;
        let a = cc * nf.powf(1.0 / kf);
        let mut inner = CSum::new();
        for &(wt, r) in &shape.rot {
            let v = b_transform(&BTransformInput::new(shape.zb, a * r)?)?;
            inner.add(wt * v);
        }
        let sn = table.s(n) * (shape.n_pow * nf.ln()).exp();
        mag += sn.norm() * inner.max_partial();
        out.push(sn * inner.value());
    }
    Ok((out, mag))
}

/// Terms `n = 1..=n_max` of the dual series of the transformation, prefactor
/// included, without main terms or tail.
pub fn wigert_dual_terms(cfg: &LambertConfig, n_max: u64) -> Result<Vec<Complex64>> {
    let (k, z, w) = (cfg.p.k, cfg.p.z, cfg.w);
    if (z - (k as f64 - 1.0)).norm() < 1e-12 {
        return domain("the transformation excludes z = k - 1");
    }
    let kf = k as f64;
    let shape = dual_shape(k, z, w);
    let cc = (w.ln() * (-1.0 / kf)).exp() * (2.0 * PI).powf(1.0 + 1.0 / kf);
    let (t, _) = dual_terms(k, z, &shape, cc, n_max)?;
    Ok(t.into_iter().map(|v| v * shape.pref).collect())
}

/// `sum_{n > N} S(n) n^(n_pow) sum_i W_i P(zb, a_n rho_i)` with `P` the power
/// part of the large-`b` expansion of `B`.
fn power_tail(
    k: u32,
    z: Complex64,
    shape: &DualShape,
    cc: Complex64,
    n_exact: u64,
) -> Result<Complex64> {
    let kf = k as f64;
    let zb = shape.zb;
    let s0 = sin_pi(zb * 0.5);
    if s0.norm() < 1e-300 {
        return Ok(c(0.0));
    }
    let wsum: f64 = shape.rot.iter().map(|(wt, _)| wt.norm()).sum();
    let a_min = cc.norm() * ((n_exact + 1) as f64).powf(1.0 / kf);
    let mut acc = CSum::new();
    let mut g = gamma_c(zb + 1.0)?;
    let cc2 = cc * cc;
    let mut cpow = c(1.0) / cc2;
    let mut last = f64::INFINITY;
    for m in 0..400u32 {
        let mf = m as f64;
        let coef: Complex64 = shape
            .rot
            .iter()
            .map(|&(wt, r)| wt * r.powi(-(2 * m as i32) - 2))
            .sum();
        // size of the m-th power term at the first tail index
        let size = g.norm() * a_min.powf(-2.0 * mf - 2.0);
        if size > last {
            break;
        }
        last = size;
        if coef.norm() > 1e-12 * wsum {
            let s = c((2.0 * mf + 2.0) / kf) - shape.n_pow;
            let term = coef * g * cpow * s_dirichlet_tail(k, z, s, n_exact)?;
            acc.add(term);
            if term.norm() < 1e-20 * acc.value().norm() {
                break;
            }
        }
        g *= (zb + 2.0 * mf + 1.0) * (zb + 2.0 * mf + 2.0);
        cpow /= cc2;
    }
    Ok(-s0 * acc.value())
}

/// `Lbar_{k,z}(w) = sum_n S_z^(k)(n) e^(-n^(1/k) w)`, `Re w > 0`.
pub fn lbar(k: u32, z: Complex64, w: Complex64) -> Result<SeriesValue> {
    if !(w.re > 0.0) {
        return domain(format!("Lbar needs Re w > 0, got {w}"));
    }
    let kf = k as f64;
    let g = ((1.0 + z.re) / kf - 1.0).max(0.0) + 1.0;
    let mut u = 1.0f64;
    for _ in 0..50 {
        u = ((EXP_CUT + 5.0 + g * kf * u.max(1.0).ln()) / w.re).max(1.0);
    }
    let n = u.powf(kf).ceil() as u64;
    let t = build_table(k, z, n)?;
    let mut acc = CSum::new();
    for i in 1..=n {
        acc.add(t.s(i) * (-w * (i as f64).powf(1.0 / kf)).exp());
    }
    Ok(SeriesValue {
        value: acc.value(),
        est_error: 1e-16 * acc.max_partial(),
        terms: n,
    })
}

/// `Lbar_k(w) = sum_n n^(1/k - 1) / (e^(n^(1/k) w) - 1)`, the classical
/// regrouping of `Lbar_{k,0}`.
pub fn lbar_classical(k: u32, w: Complex64) -> Result<Complex64> {
    if !(w.re > 0.0) {
        return domain("need Re w > 0");
    }
    let kf = k as f64;
    let mut acc = CSum::new();
    let mut n = 1u64;
    loop {
        let r = (n as f64).powf(1.0 / kf);
        let x = w * r;
        acc.add(c(r / n as f64) * (-x).exp() / (c(1.0) - (-x).exp()));
        if x.re > EXP_CUT + 5.0 {
            break;
        }
        n += 1;
    }
    Ok(acc.value())
}

fn check_corollary_w(w: Complex64) -> Result<()> {
    if !(w.re > 0.0) {
        return domain(format!("need Re w > 0, got w = {w}"));
    }
    Ok(())
}

/// Right side of the generalized Wigert identity for `z = 2m`, `k` even, `0 <= m < k/2`.
pub fn wigert_even_corollary(k: u32, m: u32, w: Complex64) -> Result<Complex64> {
    if k < 2 || !k.is_multiple_of(2) || 2 * m >= k {
        return domain("need k >= 2 even and 0 <= m < k/2");
    }
    check_corollary_w(w)?;
    let kf = k as f64;
    let z = c(2.0 * m as f64);
    let main = wigert_main(k, z, w)?;
    let base = ((c(2.0 * PI) / w).ln() * ((1.0 + 2.0 * m as f64) / kf)).exp();
    let arg0 = (c(2.0 * PI) / w).ln() * (1.0 / kf);
    let arg0 = arg0.exp() * (2.0 * PI);
    let sign = if (k / 2 + m - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut acc = CSum::new();
    let q = 1.0 - kf + 2.0 * m as f64;
    for j in 1..=(k / 2) {
        let e = (2 * j - 1) as f64;
        let th = PI * e / (2.0 * kf);
        acc.add(cis(q * th) * lbar(k, z, arg0 * cis(th))?.value);
        acc.add(cis(-q * th) * lbar(k, z, arg0 * cis(-th))?.value);
    }
    Ok(main + acc.value() * base * (sign / kf))
}

/// Right side of the odd counterpart for `z = 2m - 1`, `k > 1` odd, `1 <= m < (k+1)/2`.
pub fn wigert_odd_corollary(k: u32, m: u32, w: Complex64) -> Result<Complex64> {
    if k < 3 || k.is_multiple_of(2) || m < 1 || 2 * m > k {
        return domain("need k > 1 odd and 1 <= m < (k+1)/2");
    }
    check_corollary_w(w)?;
    let kf = k as f64;
    let z = c(2.0 * m as f64 - 1.0);
    let main = wigert_main(k, z, w)?;
    let base = ((c(2.0 * PI) / w).ln() * (2.0 * m as f64 / kf)).exp();
    let arg0 = ((c(2.0 * PI) / w).ln() * (1.0 / kf)).exp() * (2.0 * PI);
    let sign = if ((k - 1) / 2 + m).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut acc = CSum::new();
    acc.add(lbar(k, z, arg0)?.value);
    let q = 2.0 * m as f64 - kf;
    for j in 1..=((k - 1) / 2) {
        let th = PI * j as f64 / kf;
        acc.add(cis(q * th) * lbar(k, z, arg0 * cis(th))?.value);
        acc.add(cis(-q * th) * lbar(k, z, arg0 * cis(-th))?.value);
    }
    Ok(main + acc.value() * base * (sign / kf))
}

/// Wigert's classical even-`k` formula for `L_k(w) = sum d^(k)(n) e^(-nw)`.
pub fn wigert_classical_even(k: u32, w: Complex64) -> Result<Complex64> {
    if k < 2 || !k.is_multiple_of(2) {
        return domain("the classical formula is for even k >= 2");
    }
    check_corollary_w(w)?;
    let kf = k as f64;
    let r = (c(2.0 * PI) / w).ln() * (1.0 / kf);
    let arg0 = r.exp() * (2.0 * PI);
    let main = zeta_c(c(kf))? / w
        + (w.ln() * (-1.0 / kf)).exp() * gamma_c(c(1.0 + 1.0 / kf))? * zeta_c(c(1.0 / kf))?
        + 0.25;
    let sign = if (k / 2 - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut acc = CSum::new();
    for j in 0..(k / 2) {
        let th = PI * (2 * j + 1) as f64 / (2.0 * kf);
        let ph = th * (kf - 1.0);
        acc.add(cis(ph) * lbar_classical(k, arg0 * cis(-th))?);
        acc.add(cis(-ph) * lbar_classical(k, arg0 * cis(th))?);
    }
    Ok(main + acc.value() * r.exp() * (sign / kf))
}

/// Residuals of the partial-fraction decompositions of `t^k/(t^(2k) + a^(2k))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialFractionResidual {
    /// Decomposition over all `k` pairs of roots.
    pub full: f64,
    /// Decomposition paired into conjugate rotations.
    pub simplified: f64,
}

impl PartialFractionResidual {
    pub fn max(&self) -> f64 {
        self.full.max(self.simplified)
    }
}

/// Both decompositions of `t^k/(t^(2k) + a^(2k))` at one point.
pub fn partial_fraction_check(k: u32, a: Complex64, t: f64) -> Result<PartialFractionResidual> {
    if k == 0 {
        return domain("k must be positive");
    }
    let ki = k as i64;
    let kf = k as f64;
    let tc = c(t);
    let a2k = a.powi(2 * k as i32);
    let den = tc.powi(2 * k as i32) + a2k;
    if den.norm() < 1e-300 {
        return domain("t^(2k) + a^(2k) vanishes");
    }
    let lhs = tc.powi(k as i32) / den;
    let a1k = a.powc(c(1.0 - kf));
    let cj = |j: i64| a1k * root_4k(k, (1 - ki) * (2 * j - 1)) / (2.0 * kf);
    let mut full = CSum::new();
    for j in 1..=ki {
        let r = a * root_4k(k, 2 * j - 1);
        let v = if k % 2 == 1 {
            tc * 2.0 * cj(j) / (tc * tc - r * r)
        } else {
            a * 2.0 * cj(j) * root_4k(k, 2 * j - 1) / (tc * tc - r * r)
        };
        full.add(v);
    }
    let mut simp = CSum::new();
    if k % 2 == 1 {
        let sign = if ((k - 1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let pre = a1k * tc * (sign / kf);
        simp.add(pre / (tc * tc + a * a));
        for j in 1..=((ki - 1) / 2) {
            let bj = root_4k(k, (1 - ki) * 2 * j);
            let r1 = a * root_4k(k, 2 * j);
            let r2 = a * root_4k(k, -2 * j);
            simp.add(pre * bj / (tc * tc + r1 * r1));
            simp.add(pre * bj.conj() / (tc * tc + r2 * r2));
        }
    } else {
        let sign = if (k / 2 - 1).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let pre = a.powc(c(2.0 - kf)) * (sign / kf);
        for j in 1..=(ki / 2) {
            let aj = root_4k(k, (2 - ki) * (2 * j - 1));
            let r1 = a * root_4k(k, 2 * j - 1);
            let r2 = a * root_4k(k, -(2 * j - 1));
            simp.add(pre * aj / (tc * tc + r1 * r1));
            simp.add(pre * aj.conj() / (tc * tc + r2 * r2));
        }
    }
    Ok(PartialFractionResidual {
        full: (full.value() - lhs).norm(),
        simplified: (simp.value() - lhs).norm(),
    })
}

/// Closed form of `int_0^inf t^(k+2m) cos t / (t^(2k) + a^(2k)) dt`, `k` even, `0 <= 2m < k`.
pub fn exact_cosine_integral(k: u32, m: u32, a: f64) -> Result<Complex64> {
    if k < 2 || !k.is_multiple_of(2) || 2 * m >= k {
        return domain("need k >= 2 even and 0 <= 2m < k");
    }
    if !(a > 0.0) {
        return domain("need a > 0");
    }
    let kf = k as f64;
    let q = 1.0 - kf + 2.0 * m as f64;
    let sign = if (k / 2 + m - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut acc = CSum::new();
    for j in 1..=(k / 2) {
        let th = PI * (2 * j - 1) as f64 / (2.0 * kf);
        acc.add((Complex64::new(0.0, q * th) - cis(th) * a).exp());
        acc.add((Complex64::new(0.0, -q * th) - cis(-th) * a).exp());
    }
    Ok(acc.value() * (PI * sign / (2.0 * kf)) * a.powf(2.0 * m as f64 - kf + 1.0))
}

/// `int_0^inf t^(k+z) cos t / (t^(2k) + a^(2k)) dt` through the `B`
/// combinations of the partial fractions, `-1 < Re z < k`.
pub fn cosine_integral_b(k: u32, z: Complex64, a: Complex64) -> Result<Complex64> {
    if !(z.re > -1.0 && z.re < k as f64) {
        return domain(format!("need -1 < Re z < k, got {z}"));
    }
    let kf = k as f64;
    let ki = k as i64;
    let mut acc = CSum::new();
    if k.is_multiple_of(2) {
        let sign = if (k / 2 - 1).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        for j in 1..=(ki / 2) {
            let aj = root_4k(k, (2 - ki) * (2 * j - 1));
            acc.add(aj * b_transform(&BTransformInput::new(z, a * root_4k(k, 2 * j - 1))?)?);
            acc.add(
                aj.conj() * b_transform(&BTransformInput::new(z, a * root_4k(k, -(2 * j - 1)))?)?,
            );
        }
        Ok(acc.value() * a.powc(c(2.0 - kf)) * (sign / kf))
    } else {
        let sign = if ((k - 1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        acc.add(b_transform(&BTransformInput::new(z + 1.0, a)?)?);
        for j in 1..=((ki - 1) / 2) {
            let bj = root_4k(k, (1 - ki) * 2 * j);
            acc.add(bj * b_transform(&BTransformInput::new(z + 1.0, a * root_4k(k, 2 * j))?)?);
            acc.add(
                bj.conj() * b_transform(&BTransformInput::new(z + 1.0, a * root_4k(k, -2 * j))?)?,
            );
        }
        Ok(acc.value() * a.powc(c(1.0 - kf)) * (sign / kf))
    }
}

/// Direct quadrature of `int_0^inf t^(k+z) cos t / (t^(2k) + a^(2k)) dt` for real `a > 0`.
pub fn cosine_integral_quadrature(k: u32, z: Complex64, a: f64) -> Result<Complex64> {
    if !(z.re > -1.0 && z.re < k as f64) {
        return domain(format!("need -1 < Re z < k, got {z}"));
    }
    let kf = k as f64;
    let a2k = a.powf(2.0 * kf);
    let env = |t: f64| (c(kf) + z).scale(t.ln()).exp() / (t.powf(2.0 * kf) + a2k);
    let cut = 2.0 * PI * (1.0 + (2.0 * a / (2.0 * PI)).ceil());
    let cfg = QuadratureConfig {
        abs_tol: 1e-16,
        rel_tol: 1e-12,
        max_subdivisions: 20_000,
        ..Default::default()
    };
    let mut breaks = vec![0.0];
    let mut x = 0.5f64.min(a / 4.0);
    while x < cut {
        breaks.push(x);
        x += (a / 4.0).clamp(0.25, 1.0);
    }
    breaks.push(cut);
    let head = integrate_breaks(&|t: f64| env(t) * t.cos(), &breaks, &cfg)?;
    let tail_cfg = QuadratureConfig {
        osc_max_halfperiods: 120,
        accel_order: 30,
        ..cfg
    };
    let tail = integrate_osc_tail(&env, 1.0, 0.0, cut, &tail_cfg)?;
    Ok(head.value + tail.value)
}

fn lambert_params(cfg: &LambertConfig) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("k".into(), cfg.p.k.to_string());
    m.insert("z".into(), fmt_c(cfg.p.z));
    m.insert("w".into(), fmt_c(cfg.w));
    m
}

/// Compares the Lambert series with its transformation.
pub fn verify_lambert(cfg: &LambertConfig, tol: f64) -> Result<VerificationReport> {
    let lhs = lambert_lhs(cfg)?;
    let rhs = wigert_rhs(cfg)?;
    let d = discrepancy(lhs.value, rhs.value, ToleranceKind::Relative);
    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        identity: "lambert_transformation".into(),
        params: lambert_params(cfg),
        lhs: lhs.value,
        rhs: rhs.value,
        rhs_main: rhs.main,
        trace: Vec::new(),
        terms: rhs.terms,
        tolerances: Tolerances {
            target: tol,
            kind: ToleranceKind::Relative,
            quadrature: None,
        },
        discrepancy: d,
        est_error: (lhs.est_error + rhs.est_error) / lhs.value.norm().max(f64::MIN_POSITIVE),
        route: "b_transform_dual_series+zeta_power_tail".into(),
        trend_non_increasing: None,
        smoothed_discrepancy: None,
        pass: d <= tol,
    })
}
