//! Complex gamma, reciprocal gamma, log-gamma and digamma.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Nonpositive integer test with a tiny tolerance.
pub fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im.abs() < 1e-14 && s.re <= 0.5 && (s.re - s.re.round()).abs() < 1e-14
}

/// `ln Gamma(s)` on `Re s >= 1/2` (principal branch of the Lanczos form).
fn lgamma_right(s: Complex64) -> Complex64 {
    let z = s - 1.0;
    let mut a = c(LANCZOS[0]);
    for (i, &ci) in LANCZOS.iter().enumerate().skip(1) {
        a += ci / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// `sin(pi s)` accurate near integers.
pub fn sin_pi(s: Complex64) -> Complex64 {
    let n = s.re.round();
    let r = Complex64::new(s.re - n, s.im);
    let v = (r * PI).sin();
    if (n as i64).rem_euclid(2) == 1 {
        -v
    } else {
        v
    }
}

/// `cos(pi s)` accurate near half-integers.
pub fn cos_pi(s: Complex64) -> Complex64 {
    sin_pi(s + 0.5)
}

/// `Gamma(s)`.
pub fn gamma_c(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("Gamma at {s}")));
    }
    Ok(gamma_unchecked(s))
}

pub(crate) fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        c(PI) / (sin_pi(s) * gamma_unchecked(1.0 - s))
    } else {
        lgamma_right(s).exp()
    }
}

/// `1/Gamma(s)`, entire; exactly zero at nonpositive integers.
pub fn rgamma(s: Complex64) -> Complex64 {
    if is_nonpositive_integer(s) {
        return c(0.0);
    }
    if s.re < 0.5 {
        sin_pi(s) * gamma_unchecked(1.0 - s) / PI
    } else {
        (-lgamma_right(s)).exp()
    }
}

/// `ln Gamma(s)`; the imaginary part is continuous on `Re s >= 1/2` and
/// otherwise only determined modulo `2 pi`.
pub fn lgamma_c(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("lnGamma at {s}")));
    }
    if s.re < 0.5 {
        Ok(c(PI.ln()) - sin_pi(s).ln() - lgamma_right(1.0 - s))
    } else {
        Ok(lgamma_right(s))
    }
}

/// Digamma `psi(s)` via upward recurrence and the asymptotic series.
pub fn digamma_c(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("digamma at {s}")));
    }
    if s.re < 0.5 {
        // psi(s) = psi(1-s) - pi cot(pi s)
        let cot = cos_pi(s) / sin_pi(s);
        return Ok(digamma_c(1.0 - s)? - cot * PI);
    }
    let mut z = s;
    let mut acc = c(0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // B_{2j}/(2j) for j = 1..8
    const T: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
        -3617.0 / 8160.0,
    ];
    let zi2 = 1.0 / (z * z);
    let mut p = zi2;
    let mut ser = c(0.0);
    for t in T {
        ser += p * t;
        p *= zi2;
    }
    Ok(acc + z.ln() - 0.5 / z - ser)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn half() {
        let g = gamma_c(c(0.5)).unwrap();
        assert!(close(g, c(PI.sqrt()), 1e-15));
    }

    #[test]
    fn integers_and_poles() {
        assert!(close(gamma_c(c(6.0)).unwrap(), c(120.0), 1e-14));
        assert!(gamma_c(c(-3.0)).is_err());
        assert_eq!(rgamma(c(-3.0)), c(0.0));
        assert!(close(gamma_c(c(-0.5)).unwrap(), c(-2.0 * PI.sqrt()), 1e-14));
    }

    #[test]
    fn recurrence_and_reflection() {
        let pts = [
            Complex64::new(0.3, 1.7),
            Complex64::new(-2.4, 0.2),
            Complex64::new(7.5, -3.0),
            Complex64::new(25.0, 40.0),
            Complex64::new(-10.3, 5.0),
        ];
        for &s in &pts {
            let g = gamma_c(s).unwrap();
            assert!(close(s * g, gamma_c(s + 1.0).unwrap(), 1e-13), "{s}");
            let r = g * gamma_c(1.0 - s).unwrap() * sin_pi(s) / PI;
            assert!(close(r, c(1.0), 1e-12), "{s}");
        }
    }

    #[test]
    fn digamma_values() {
        assert!(close(digamma_c(c(1.0)).unwrap(), c(-EULER_GAMMA), 1e-15));
        for &s in &[
            Complex64::new(0.2, 0.3),
            Complex64::new(-1.5, 2.0),
            Complex64::new(30.0, -4.0),
        ] {
            let d = digamma_c(s + 1.0).unwrap() - digamma_c(s).unwrap();
            assert!((d - 1.0 / s).norm() < 1e-12, "{s}");
        }
    }
}
