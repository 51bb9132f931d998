//! The `1F2` hypergeometric series.

use super::gamma::is_nonpositive_integer;
use crate::dd::CDd;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `1F2(a; b, c | x) = sum_n (a)_n x^n / ((b)_n (c)_n n!)`.
pub fn hyp1f2(a: Complex64, b: Complex64, c: Complex64, x: Complex64) -> Result<Complex64> {
    for (name, p) in [("b", b), ("c", c)] {
        if is_nonpositive_integer(p) {
            return Err(Error::Pole(format!("1F2 lower parameter {name} = {p}")));
        }
    }
    let xd = CDd::from_c64(x);
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut small = 0;
    for n in 0..100_000 {
        let nf = n as f64;
        let num = CDd::from_c64(a + nf);
        let den = CDd::from_c64((b + nf) * (c + nf) * (nf + 1.0));
        term = term * num * xd / den;
        sum += term;
        if term.norm_l1() <= 1e-33 * sum.norm_l1() || term.norm_l1() == 0.0 {
            small += 1;
            // the ratio shrinks monotonically once n exceeds |x|^(1/2)
            if small >= 2 && nf * nf > x.norm() {
                return Ok(sum.to_c64());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence(format!("1F2 at x = {x}")))
}
