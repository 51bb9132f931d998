//! Numerical integration engines.
//!
//! * [`integrate_finite`]: global adaptive 7/15-point Gauss-Kronrod with a
//!   tanh-sinh fallback for endpoint singularities.
//! * [`integrate_osc_tail`]: `int_a^inf envelope(t) cos(freq t + phase0) dt`
//!   split at the exact zeros of the cosine, one Kronrod panel per half
//!   period, and Euler (repeated averaging) acceleration of the partial sums.
//! * [`integrate_vertical_line`]: `(1/2 pi i) int_(c) F(s) ds` truncated at
//!   `|Im s| = T`, with `T` chosen from the declared exponential decay rate.
//!
//! All reductions run in a fixed order, so results are reproducible bit for
//! bit for a fixed configuration.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub osc_max_halfperiods: usize,
    pub accel_order: usize,
    /// Truncation height for vertical lines; `<= 0` selects it from the decay rate.
    pub contour_height_cut: f64,
    pub dd_mode: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            osc_max_halfperiods: 80,
            accel_order: 24,
            contour_height_cut: 0.0,
            dd_mode: false,
        }
    }
}

impl QuadratureConfig {
    /// Defaults for oscillatory tails (relative tolerance `1e-8`).
    pub fn oscillatory() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            ..Default::default()
        }
    }

    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if self.osc_max_halfperiods < 8 {
            return Err(Error::Domain("osc_max_halfperiods must be >= 8".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: (value, error estimate).
pub fn gk15<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    let mut fv = [Complex64::new(0.0, 0.0); 14];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        rk += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            rg += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = rk * 0.5;
    let mut resasc = (fc - mean).norm() * WGK[7];
    for j in 0..7 {
        resasc += ((fv[2 * j] - mean).norm() + (fv[2 * j + 1] - mean).norm()) * WGK[j];
    }
    let hh = h.abs();
    let mut err = ((rk - rg) * hh).norm();
    let resasc = resasc * hh;
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (1.0f64).min((200.0 * err / resasc).powf(1.5));
    }
    let resabs = resabs * hh;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (rk * h, err)
}

struct Panel {
    a: f64,
    b: f64,
    val: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.partial_cmp(&o.err).unwrap_or(Ordering::Equal)
    }
}

fn adaptive_gk<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> (QuadResult, bool) {
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut abs_sum = 0.0;
    let mut evals = 0;
    for w in breaks.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        evals += 15;
        total += v;
        err += e;
        abs_sum += v.norm();
        heap.push(Panel {
            a: w[0],
            b: w[1],
            val: v,
            err: e,
        });
    }
    let mut n = heap.len();
    loop {
        // below 50 ulp of the summed panel magnitudes nothing more can be resolved
        let tol = cfg
            .abs_tol
            .max(cfg.rel_tol * total.norm())
            .max(50.0 * f64::EPSILON * abs_sum);
        if err <= tol {
            return (
                QuadResult {
                    value: total,
                    error: err,
                    evals,
                },
                true,
            );
        }
        if n >= cfg.max_subdivisions {
            return (
                QuadResult {
                    value: total,
                    error: err,
                    evals,
                },
                false,
            );
        }
        let p = match heap.pop() {
            Some(p) => p,
            None => {
                return (
                    QuadResult {
                        value: total,
                        error: err,
                        evals,
                    },
                    false,
                )
            }
        };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // interval cannot be split further
            heap.push(Panel { err: 0.0, ..p });
            err -= p.err;
            continue;
        }
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        evals += 30;
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        abs_sum += v1.norm() + v2.norm() - p.val.norm();
        heap.push(Panel {
            a: p.a,
            b: m,
            val: v1,
            err: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            val: v2,
            err: e2,
        });
        n += 1;
    }
}

/// Double-exponential rule on `[a, b]`, halving the step until two levels agree.
fn tanh_sinh<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> (QuadResult, bool) {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut h = 1.0;
    let mut prev = Complex64::new(f64::NAN, 0.0);
    let mut evals = 0;
    let node = |t: f64| -> (f64, f64) {
        let u = 0.5 * PI * t.sinh();
        let x = u.tanh();
        let w = 0.5 * PI * t.cosh() / (u.cosh() * u.cosh());
        (x, w)
    };
    let eval_at = |t: f64| -> Complex64 {
        let (x, w) = node(t);
        if w == 0.0 || x.abs() >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let p = c + hw * x;
        if p <= a || p >= b {
            return Complex64::new(0.0, 0.0);
        }
        f(p) * w
    };
    let tmax = 3.2;
    let mut sum = eval_at(0.0);
    let mut j = 1;
    while j as f64 * h <= tmax {
        let t = j as f64 * h;
        sum += eval_at(t) + eval_at(-t);
        evals += 2;
        j += 1;
    }
    for _ in 0..10 {
        h *= 0.5;
        let mut add = Complex64::new(0.0, 0.0);
        let mut j = 1;
        while j as f64 * h <= tmax {
            let t = j as f64 * h;
            add += eval_at(t) + eval_at(-t);
            evals += 2;
            j += 2;
        }
        sum += add;
        let est = sum * h * hw;
        let diff = (est - prev).norm();
        let tol = cfg.abs_tol.max(cfg.rel_tol * est.norm());
        if diff.is_finite() && diff < tol {
            return (
                QuadResult {
                    value: est,
                    error: diff,
                    evals,
                },
                true,
            );
        }
        prev = est;
    }
    (
        QuadResult {
            value: prev,
            error: f64::INFINITY,
            evals,
        },
        false,
    )
}

/// `int_a^b f(t) dt`.
pub fn integrate_finite<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    integrate_breaks(f, &[a, b], cfg)
}

/// `int f` over consecutive intervals of `breaks` with one adaptive pass.
pub fn integrate_breaks<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if breaks.len() < 2 {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evals: 0,
        });
    }
    let (r, ok) = adaptive_gk(f, breaks, cfg);
    if ok {
        return Ok(r);
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = r.evals;
    for w in breaks.windows(2) {
        let (t, ok) = tanh_sinh(f, w[0], w[1], cfg);
        evals += t.evals;
        if !ok {
            return Err(Error::NonConvergence(format!(
                "finite quadrature on [{}, {}]: error {:.3e}",
                breaks[0],
                breaks[breaks.len() - 1],
                r.error
            )));
        }
        total += t.value;
        err += t.error;
    }
    Ok(QuadResult {
        value: total,
        error: err,
        evals,
    })
}

/// Euler transform by repeated averaging of the final partial sums.
fn averaged_limit(partials: &[Complex64], depth: usize) -> Complex64 {
    let d = depth.min(partials.len() - 1);
    let mut v: Vec<Complex64> = partials[partials.len() - 1 - d..].to_vec();
    while v.len() > 1 {
        for i in 0..v.len() - 1 {
            v[i] = (v[i] + v[i + 1]) * 0.5;
        }
        v.pop();
    }
    v[0]
}

/// `int_a^inf envelope(t) cos(freq t + phase0) dt` for `freq > 0`.
pub fn integrate_osc_tail<F: Fn(f64) -> Complex64 + ?Sized>(
    envelope: &F,
    freq: f64,
    phase0: f64,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if !(freq > 0.0) {
        return Err(Error::Domain("oscillatory tail needs freq > 0".into()));
    }
    cfg.validate()?;
    let g = |t: f64| envelope(t) * (freq * t + phase0).cos();
    let m0 = ((freq * a + phase0 - 0.5 * PI) / PI).ceil();
    let zero = |m: f64| (0.5 * PI + m * PI - phase0) / freq;
    let mut t0 = zero(m0);
    if t0 < a {
        t0 = a;
    }
    let sub = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-3,
        rel_tol: cfg.rel_tol * 1e-3,
        ..*cfg
    };
    let mut evals = 0;
    let head = if t0 > a {
        let r = integrate_finite(&g, a, t0, &sub)?;
        evals += r.evals;
        r.value
    } else {
        Complex64::new(0.0, 0.0)
    };
    let n = cfg.osc_max_halfperiods;
    let mut partials = Vec::with_capacity(n);
    let mut terms = Vec::with_capacity(n);
    let mut s = head;
    let mut qerr = 0.0;
    for m in 0..n {
        let lo = zero(m0 + m as f64);
        let hi = zero(m0 + m as f64 + 1.0);
        let r = integrate_finite(&g, lo, hi, &sub)?;
        evals += r.evals;
        qerr += r.error;
        s += r.value;
        terms.push(r.value);
        partials.push(s);
    }
    let depth = cfg.accel_order.min(n - 2);
    let v1 = averaged_limit(&partials, depth);
    let v0 = averaged_limit(&partials[..n - 1], depth);
    let v2 = averaged_limit(&partials, depth.saturating_sub(2));
    let accel_err = (v1 - v0).norm().max((v1 - v2).norm());
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    // The last few terms must rotate by more than a quarter turn.
    let tail_ok = terms[n - 4..].windows(2).all(|w| {
        (w[0] * w[1].conj()).re <= 0.0 || w[0].norm() < 1e-3 * scale || w[0].norm() < cfg.abs_tol
    });
    if !tail_ok {
        return Err(Error::NonConvergence(
            "oscillatory tail terms do not alternate".into(),
        ));
    }
    Ok(QuadResult {
        value: v1,
        error: accel_err + qerr,
        evals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayClass {
    Exponential,
    Polynomial,
}

/// Contour `Re s = c` with integrand `F`.
///
/// `rate` is the net exponential decay `delta` in `|F(c+it)| ~ |t|^power e^{-pi delta |t| / 2}`.
pub struct ContourSpec<'a> {
    pub c: f64,
    pub integrand: &'a dyn Fn(Complex64) -> Complex64,
    pub decay_class: DecayClass,
    pub rate: f64,
    pub power: f64,
}

/// Height `T` with `sqrt(2 pi) T^(power - 1/2) e^{-pi T rate / 2} = tol`.
pub fn truncation_height(rate: f64, power: f64, tol: f64) -> f64 {
    let mut t: f64 = 10.0;
    for _ in 0..100 {
        let nt = (2.0 / (PI * rate))
            * ((2.0 * PI).sqrt().ln() + (power - 0.5) * t.max(1.0).ln() - tol.ln());
        if (nt - t).abs() < 1e-6 {
            t = nt;
            break;
        }
        t = nt.max(1.0);
    }
    t.max(1.0)
}

/// `(1/(2 pi i)) int_{c - i inf}^{c + i inf} F(s) ds`.
pub fn integrate_vertical_line(spec: &ContourSpec, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if spec.decay_class == DecayClass::Polynomial || !(spec.rate > 0.0) {
        return Err(Error::PolynomialDecay(
            "vertical-line integrals need an exponentially decaying integrand".into(),
        ));
    }
    let t_cut = if cfg.contour_height_cut > 0.0 {
        cfg.contour_height_cut
    } else {
        truncation_height(spec.rate, spec.power, cfg.abs_tol * 1e-1)
    };
    let c = spec.c;
    let f = |t: f64| (spec.integrand)(Complex64::new(c, t));
    let pieces = 16;
    let mut breaks = Vec::with_capacity(2 * pieces + 1);
    for i in 0..=2 * pieces {
        breaks.push(-t_cut + t_cut * i as f64 / pieces as f64);
    }
    let r = integrate_breaks(&f, &breaks, cfg)?;
    Ok(QuadResult {
        value: r.value / (2.0 * PI),
        error: r.error / (2.0 * PI),
        evals: r.evals,
    })
}
