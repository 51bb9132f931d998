//! Riemann zeta function for complex arguments.
//!
//! Euler-Maclaurin summation on `Re s >= 1/2`; the asymmetric functional
//! equation `zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)` elsewhere.

use super::gamma::{gamma_unchecked, sin_pi};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

// B_{2j} / (2j)! for j = 1..=16
const B2J_OVER_FACT: [f64; 16] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_229e-18,
    -1.395_446_468_581_252e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_547e-23,
    2.267_952_452_337_683e-24,
    -5.744_790_668_872_202e-26,
];

fn zeta_em(s: Complex64) -> Complex64 {
    let n = (15.0 + s.im.abs()).ceil() as usize;
    let nf = n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (1..n).rev() {
        acc += (-s * (j as f64).ln()).exp();
    }
    let n_s = (-s * nf.ln()).exp();
    acc += n_s * nf / (s - 1.0) + 0.5 * n_s;
    // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut poch = s;
    let mut pw = n_s / nf;
    let inv_n2 = 1.0 / (nf * nf);
    for (j, &b) in B2J_OVER_FACT.iter().enumerate() {
        let term = b * poch * pw;
        acc += term;
        if term.norm() < 1e-17 * acc.norm() {
            break;
        }
        let m = 2.0 * j as f64 + 1.0;
        poch *= (s + m) * (s + m + 1.0);
        pw *= inv_n2;
    }
    acc
}

/// `sum_{d > m} d^-s` for `s != 1` (any `Re s` for which the sum converges,
/// analytically continued otherwise).
pub fn zeta_tail(s: Complex64, m: u64) -> Complex64 {
    let a = (m + 1).max((20.0 + s.im.abs()).ceil() as u64);
    let mut acc = Complex64::new(0.0, 0.0);
    for d in (m + 1..a).rev() {
        acc += (-s * (d as f64).ln()).exp();
    }
    let af = a as f64;
    let a_s = (-s * af.ln()).exp();
    acc += a_s * af / (s - 1.0) + 0.5 * a_s;
    let mut poch = s;
    let mut pw = a_s / af;
    let inv_a2 = 1.0 / (af * af);
    for (j, &b) in B2J_OVER_FACT.iter().enumerate() {
        let term = b * poch * pw;
        acc += term;
        if term.norm() < 1e-17 * acc.norm() {
            break;
        }
        let q = 2.0 * j as f64 + 1.0;
        poch *= (s + q) * (s + q + 1.0);
        pw *= inv_a2;
    }
    acc
}

/// `zeta(s)`.
pub fn zeta_c(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-15 {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    if s.re >= 0.5 {
        return Ok(zeta_em(s));
    }
    // Trivial zeros are exact.
    if s.im == 0.0 && s.re < 0.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if s == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(-0.5, 0.0));
    }
    let one_minus = 1.0 - s;
    let f = (s * 2f64.ln()).exp()
        * ((s - 1.0) * PI.ln()).exp()
        * sin_pi(s * 0.5)
        * gamma_unchecked(one_minus);
    Ok(f * zeta_em(one_minus))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!((zeta_c(c(2.0, 0.0)).unwrap() - PI * PI / 6.0).norm() < 1e-14);
        assert!((zeta_c(c(-1.0, 0.0)).unwrap() + 1.0 / 12.0).norm() < 1e-15);
        assert!((zeta_c(c(0.0, 0.0)).unwrap() + 0.5).norm() < 1e-15);
        assert!((zeta_c(c(0.5, 0.0)).unwrap() - c(-1.460_354_508_809_586_8, 0.0)).norm() < 1e-13);
        assert!(zeta_c(c(1.0, 0.0)).is_err());
        assert_eq!(zeta_c(c(-4.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn tails() {
        let s = c(2.5, 0.3);
        let mut direct = Complex64::new(0.0, 0.0);
        for d in 1..=7u64 {
            direct += (-s * (d as f64).ln()).exp();
        }
        let t = zeta_tail(s, 7);
        assert!((direct + t - zeta_c(s).unwrap()).norm() < 1e-14);
        assert!((zeta_tail(s, 0) - zeta_c(s).unwrap()).norm() < 1e-14);
        // far tail ~ m^(1-s)/(s-1)
        let m = 1_000_000u64;
        let far = zeta_tail(c(3.0, 0.0), m);
        assert!((far.re * 2.0 * (m as f64).powi(2) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn first_nontrivial_zero() {
        let z = zeta_c(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12, "{z}");
    }
}
