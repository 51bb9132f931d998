//! Double-double arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving
//! roughly 106 bits of significand. Only the operations needed by the series
//! accumulators are provided: add, sub, mul, div, and a complex wrapper.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn from_c64(z: Complex64) -> CDd {
        CDd {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn norm_l1(self) -> f64 {
        self.re.to_f64().abs() + self.im.to_f64().abs()
    }

    #[inline]
    pub fn mul_c64(self, b: Complex64) -> CDd {
        CDd {
            re: self.re.mul_f64(b.re) - self.im.mul_f64(b.im),
            im: self.re.mul_f64(b.im) + self.im.mul_f64(b.re),
        }
    }

    #[inline]
    pub fn add_c64(self, b: Complex64) -> CDd {
        CDd {
            re: self.re.add_f64(b.re),
            im: self.im.add_f64(b.im),
        }
    }

    #[inline]
    pub fn scale(self, s: Dd) -> CDd {
        CDd {
            re: self.re * s,
            im: self.im * s,
        }
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, b: CDd) -> CDd {
        CDd {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl AddAssign for CDd {
    #[inline]
    fn add_assign(&mut self, b: CDd) {
        *self = *self + b;
    }
}

impl Sub for CDd {
    type Output = CDd;
    #[inline]
    fn sub(self, b: CDd) -> CDd {
        CDd {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Neg for CDd {
    type Output = CDd;
    #[inline]
    fn neg(self) -> CDd {
        CDd {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, b: CDd) -> CDd {
        CDd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for CDd {
    type Output = CDd;
    #[inline]
    fn div(self, b: CDd) -> CDd {
        let den = b.re * b.re + b.im * b.im;
        let num = CDd {
            re: self.re * b.re + self.im * b.im,
            im: self.im * b.re - self.re * b.im,
        };
        CDd {
            re: num.re / den,
            im: num.im / den,
        }
    }
}

/// Compensated (double-double) accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CSum {
    acc: CDd,
    max_abs: f64,
}

impl CSum {
    pub fn new() -> CSum {
        CSum::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.acc = self.acc.add_c64(v);
        let a = self.acc.to_c64().norm();
        if a > self.max_abs {
            self.max_abs = a;
        }
    }

    #[inline]
    pub fn add_dd(&mut self, v: CDd) {
        self.acc += v;
        let a = self.acc.to_c64().norm();
        if a > self.max_abs {
            self.max_abs = a;
        }
    }

    pub fn value(&self) -> Complex64 {
        self.acc.to_c64()
    }

    pub fn value_dd(&self) -> CDd {
        self.acc
    }

    /// Largest partial-sum magnitude seen so far.
    pub fn max_partial(&self) -> f64 {
        self.max_abs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_lost_bits() {
        let a = Dd::new(1.0).add_f64(1e-20);
        let b = a - Dd::new(1.0);
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn division_roundtrip() {
        let a = Dd::new(1.0) / Dd::new(3.0);
        let back = a * Dd::new(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_sum_cancellation() {
        let mut s = CSum::new();
        s.add(Complex64::new(1e17, -1e17));
        s.add(Complex64::new(3.0, 0.5));
        s.add(Complex64::new(-1e17, 1e17));
        assert_eq!(s.value(), Complex64::new(3.0, 0.5));
        assert!(s.max_partial() > 1e17);
    }

    #[test]
    fn complex_div() {
        let a = CDd::from_c64(Complex64::new(1.0, 2.0));
        let b = CDd::from_c64(Complex64::new(3.0, -1.0));
        let q = (a / b).to_c64();
        let e = Complex64::new(1.0, 2.0) / Complex64::new(3.0, -1.0);
        assert!((q - e).norm() < 1e-16);
    }
}
