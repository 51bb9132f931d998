//! Divisor functions `sigma_z^(k)(n) = sum_{d^k | n} d^z` and
//! `S_z^(k)(n) = sum_{d1^k d2 = n} d2^((1+z)/k - 1)`, pointwise and sieved.

use crate::dd::CSum;
use crate::error::{domain, Error, Result};
use crate::specialfn::zeta_tail;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Default memory budget for [`build_table`], in bytes.
pub const DEFAULT_TABLE_BUDGET: usize = 1 << 30;

fn cpow(d: u64, z: Complex64) -> Complex64 {
    if d == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        (z * (d as f64).ln()).exp()
    }
}

fn check(k: u32, n: u64) -> Result<()> {
    if k == 0 {
        return domain("k must be a positive integer");
    }
    if n == 0 {
        return domain("n must be at least 1");
    }
    Ok(())
}

/// Largest `d` with `d^k <= n`.
pub fn kth_root_floor(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|p| p > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|p| p <= n) {
        r += 1;
    }
    r
}

/// `sigma_z^(k)(n)`.
pub fn sigma_zk(k: u32, z: Complex64, n: u64) -> Result<Complex64> {
    check(k, n)?;
    let mut s = CSum::new();
    for d in 1..=kth_root_floor(n, k) {
        if n.is_multiple_of(d.pow(k)) {
            s.add(cpow(d, z));
        }
    }
    Ok(s.value())
}

/// `S_z^(k)(n)`.
pub fn s_zk(k: u32, z: Complex64, n: u64) -> Result<Complex64> {
    check(k, n)?;
    let e = (z + 1.0) / k as f64 - 1.0;
    let mut s = CSum::new();
    for d1 in 1..=kth_root_floor(n, k) {
        let q = d1.pow(k);
        if n.is_multiple_of(q) {
            s.add(cpow(n / q, e));
        }
    }
    Ok(s.value())
}

/// Dense tables of `sigma_z^(k)(n)` and `S_z^(k)(n)` for `1 <= n <= limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorTable {
    pub k: u32,
    pub z: Complex64,
    pub limit: u64,
    /// `sigma[n - 1] = sigma_z^(k)(n)`
    pub sigma: Vec<Complex64>,
    /// `s_table[n - 1] = S_z^(k)(n)`
    pub s_table: Vec<Complex64>,
}

impl DivisorTable {
    pub fn sigma(&self, n: u64) -> Complex64 {
        self.sigma[(n - 1) as usize]
    }

    pub fn s(&self, n: u64) -> Complex64 {
        self.s_table[(n - 1) as usize]
    }

    /// CSV with columns `n, re_sigma, im_sigma, re_s, im_s`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        wr.write_record(["n", "re_sigma", "im_sigma", "re_s", "im_s"])
            .map_err(io)?;
        for (i, (a, b)) in self.sigma.iter().zip(&self.s_table).enumerate() {
            wr.write_record(&[
                (i + 1).to_string(),
                format!("{:e}", a.re),
                format!("{:e}", a.im),
                format!("{:e}", b.re),
                format!("{:e}", b.im),
            ])
            .map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Domain(format!("csv: {e}")))?;
        Ok(())
    }
}

const BLOCK: usize = 1 << 15;

/// Sieve both tables up to `limit` within the default memory budget.
pub fn build_table(k: u32, z: Complex64, limit: u64) -> Result<DivisorTable> {
    build_table_with_budget(k, z, limit, DEFAULT_TABLE_BUDGET)
}

/// Sieve both tables; fails with [`Error::Budget`] when the tables and the
/// power caches would exceed `budget` bytes.
///
/// Output blocks are filled in parallel, each from the full set of divisors,
/// so the result does not depend on the thread count.
pub fn build_table_with_budget(
    k: u32,
    z: Complex64,
    limit: u64,
    budget: usize,
) -> Result<DivisorTable> {
    check(k, limit)?;
    let n = limit as usize;
    let need = (n as u128) * 16 * 3 + (kth_root_floor(limit, k) as u128) * 16;
    if need > budget as u128 {
        return Err(Error::Budget(format!(
            "tables up to N = {limit} need {need} bytes, budget is {budget}"
        )));
    }
    let droot = kth_root_floor(limit, k) as usize;
    let e = (z + 1.0) / k as f64 - 1.0;
    let pz: Vec<Complex64> = (1..=droot as u64)
        .into_par_iter()
        .map(|d| cpow(d, z))
        .collect();
    let pe: Vec<Complex64> = (1..=limit).into_par_iter().map(|m| cpow(m, e)).collect();
    let qk: Vec<usize> = (1..=droot).map(|d| d.pow(k)).collect();
    let mut sigma = vec![Complex64::new(0.0, 0.0); n];
    let mut s_table = vec![Complex64::new(0.0, 0.0); n];
    sigma
        .par_chunks_mut(BLOCK)
        .zip(s_table.par_chunks_mut(BLOCK))
        .enumerate()
        .for_each(|(bi, (sg, st))| {
            let lo = bi * BLOCK + 1;
            let hi = lo + sg.len();
            // pairs (d, m) with d^k m in [lo, hi): small d^k by d, large d^k by m
            let q0 = ((hi as f64).sqrt() as usize).max(1);
            for (di, &q) in qk.iter().enumerate() {
                if q > q0 || q >= hi {
                    break;
                }
                let mut m = lo.div_ceil(q);
                while m * q < hi {
                    let idx = m * q - lo;
                    sg[idx] += pz[di];
                    st[idx] += pe[m - 1];
                    m += 1;
                }
            }
            let mut m = 1;
            while m * q0 < hi {
                // smallest d with d^k >= max(q0 + 1, lo / m)
                let floor_q = (q0 + 1).max(lo.div_ceil(m));
                let d_lo = kth_root_floor(floor_q as u64 - 1, k) as usize + 1;
                let d_hi = kth_root_floor(((hi - 1) / m) as u64, k) as usize;
                for d in d_lo..=d_hi.min(qk.len()) {
                    let q = qk[d - 1];
                    let idx = m * q - lo;
                    sg[idx] += pz[d - 1];
                    st[idx] += pe[m - 1];
                }
                m += 1;
            }
        });
    Ok(DivisorTable {
        k,
        z,
        limit,
        sigma,
        s_table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirichletSeries {
    /// `sum sigma_z^(k)(n) n^-s = zeta(s) zeta(ks - z)`
    Sigma,
    /// `sum S_z^(k)(n) n^-s = zeta(ks) zeta(s + 1 - (1+z)/k)`
    S,
}

/// `sum_{n <= N} a(n) n^-s` from a prebuilt table.
pub fn dirichlet_partial_table(
    t: &DivisorTable,
    series: DirichletSeries,
    s: Complex64,
    n_max: u64,
) -> Complex64 {
    let a = match series {
        DirichletSeries::Sigma => &t.sigma,
        DirichletSeries::S => &t.s_table,
    };
    let mut acc = CSum::new();
    for (i, v) in a.iter().take(n_max.min(t.limit) as usize).enumerate() {
        acc.add(*v * cpow(i as u64 + 1, -s));
    }
    acc.value()
}

/// `sum_{n <= N} a(n) n^-s` for `a = sigma_z^(k)` or `S_z^(k)`.
pub fn dirichlet_partial(
    k: u32,
    z: Complex64,
    s: Complex64,
    n_max: u64,
    series: DirichletSeries,
) -> Result<Complex64> {
    let t = build_table(k, z, n_max)?;
    Ok(dirichlet_partial_table(&t, series, s, n_max))
}

/// `sum_{n > N} S_z^(k)(n) n^-s`, regrouped over `n = d1^k d2` into
/// zeta tails so that no cancellation against the full Dirichlet series occurs.
pub fn s_dirichlet_tail(k: u32, z: Complex64, s: Complex64, n_max: u64) -> Result<Complex64> {
    check(k, n_max.max(1))?;
    let u = s + 1.0 - (z + 1.0) / k as f64;
    let ks = s * k as f64;
    let d_max = kth_root_floor(n_max, k);
    let mut acc = CSum::new();
    for d1 in 1..=d_max {
        let q = d1.pow(k);
        acc.add(cpow(d1, -ks) * zeta_tail(u, n_max / q));
    }
    acc.add(zeta_tail(ks, d_max) * zeta_tail(u, 0));
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pointwise_values() {
        assert_eq!(sigma_zk(3, Complex64::new(0.3, 1.0), 1).unwrap(), r(1.0));
        assert_eq!(sigma_zk(1, r(0.0), 6).unwrap(), r(4.0));
        assert!((sigma_zk(2, r(2.0), 4).unwrap() - r(5.0)).norm() < 1e-14);
        assert_eq!(s_zk(4, r(0.7), 1).unwrap(), r(1.0));
        assert!((s_zk(2, r(1.0), 4).unwrap() - r(2.0)).norm() < 1e-14);
        for n in 1..60 {
            let z = Complex64::new(0.4, -0.3);
            assert!((sigma_zk(1, z, n).unwrap() - s_zk(1, z, n).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn roots() {
        assert_eq!(kth_root_floor(26, 3), 2);
        assert_eq!(kth_root_floor(27, 3), 3);
        assert_eq!(kth_root_floor(u64::MAX, 2), 4_294_967_295);
    }

    #[test]
    fn tables() {
        let t = build_table(1, r(0.0), 100).unwrap();
        assert_eq!(t.sigma(12), r(6.0));
        let t = build_table(2, r(0.0), 100).unwrap();
        assert_eq!(t.sigma(4), r(2.0));
        assert!(matches!(
            build_table_with_budget(1, r(0.0), 1000, 100),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn sieve_matches_enumeration() {
        for &(k, z) in &[
            (1, Complex64::new(0.3, 0.8)),
            (2, r(-0.4)),
            (3, Complex64::new(1.5, -2.0)),
            (5, r(2.0)),
        ] {
            let t = build_table(k, z, 70_000).unwrap();
            for n in (1..=2000u64).chain([65_535, 65_536, 65_537, 69_999, 70_000]) {
                let a = sigma_zk(k, z, n).unwrap();
                let b = s_zk(k, z, n).unwrap();
                assert!(
                    (t.sigma(n) - a).norm() < 1e-10 * a.norm().max(1.0),
                    "k={k} n={n}"
                );
                assert!(
                    (t.s(n) - b).norm() < 1e-10 * b.norm().max(1.0),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn csv_export() {
        let t = build_table(2, r(1.0), 4).unwrap();
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let s = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "n,re_sigma,im_sigma,re_s,im_s");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("4,3e0,0e0,2e0,0e0"));
    }
}
