//! Exact combinatorics: Stirling numbers, elementary symmetric polynomials,
//! and the Meijer-G parameter vectors of the two kernels.
//!
//! | item | representation |
//! |------|----------------|
//! | `S(n,m)`, `s(n,m)` | exact `BigInt`, memoized for `n <= 64` |
//! | `e_l(X)` | complex double, product recurrence |
//! | `b_j`, `b'_j` | affine in `z` with rational coefficients |
//!
//! The parameter vectors are stored symbolically as `c + d*z` so the same
//! data feeds both the floating evaluators and the exact Gaussian-rational
//! check of the differential-equation coefficients.

use crate::dd::CDd;
use crate::error::{domain, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Largest row of the memoized Stirling tables.
pub const STIRLING_MAX: usize = 64;

struct Tables {
    second: Vec<Vec<BigInt>>,
    first: Vec<Vec<BigInt>>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let n = STIRLING_MAX + 1;
        let mut second = vec![vec![BigInt::zero(); n]; n];
        let mut first = vec![vec![BigInt::zero(); n]; n];
        second[0][0] = BigInt::one();
        first[0][0] = BigInt::one();
        for i in 1..n {
            for m in 1..=i {
                second[i][m] = BigInt::from(m) * &second[i - 1][m] + &second[i - 1][m - 1];
                first[i][m] = &first[i - 1][m - 1] - BigInt::from(i - 1) * &first[i - 1][m];
            }
        }
        Tables { second, first }
    })
}

/// Stirling number of the second kind `S(n, m)`.
pub fn stirling2(n: usize, m: usize) -> Result<BigInt> {
    if n > STIRLING_MAX {
        return domain(format!(
            "stirling2: n = {n} exceeds table limit {STIRLING_MAX}"
        ));
    }
    if m > n {
        return Ok(BigInt::zero());
    }
    Ok(tables().second[n][m].clone())
}

/// Signed Stirling number of the first kind `s(n, m)`.
pub fn stirling1_signed(n: usize, m: usize) -> Result<BigInt> {
    if n > STIRLING_MAX {
        return domain(format!(
            "stirling1: n = {n} exceeds table limit {STIRLING_MAX}"
        ));
    }
    if m > n {
        return Ok(BigInt::zero());
    }
    Ok(tables().first[n][m].clone())
}

/// The multiset `X_n = {x_1, ..., x_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolMultiset {
    pub elements: Vec<Complex64>,
}

impl SymbolMultiset {
    pub fn new(elements: Vec<Complex64>) -> Result<SymbolMultiset> {
        if elements.is_empty() {
            return domain("symbol multiset must be non-empty");
        }
        Ok(SymbolMultiset { elements })
    }

    /// All `e_0, ..., e_n` as coefficients of `prod (1 + x_j t)`.
    pub fn elem_sym_all(&self) -> Vec<Complex64> {
        poly_from_roots(&self.elements)
    }
}

fn poly_from_roots<T>(xs: &[T]) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    let mut e = vec![T::one()];
    for x in xs {
        e.push(T::zero());
        for l in (1..e.len()).rev() {
            let v = e[l].clone() + x.clone() * e[l - 1].clone();
            e[l] = v;
        }
    }
    e
}

/// Elementary symmetric polynomial `e_l(X)`.
pub fn elem_sym(x: &SymbolMultiset, l: usize) -> Result<Complex64> {
    let n = x.elements.len();
    if l > n {
        return domain(format!("elem_sym: l = {l} > n = {n}"));
    }
    Ok(x.elem_sym_all()[l])
}

/// `c + d*z` with rational `c`, `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub c: BigRational,
    pub d: BigRational,
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

impl Affine {
    fn new(c: BigRational, d: BigRational) -> Affine {
        Affine { c, d }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        Complex64::new(rat_to_f64(&self.c), 0.0) + z * rat_to_f64(&self.d)
    }

    pub fn eval_exact(&self, z: &GaussRat) -> GaussRat {
        GaussRat::from_rat(self.c.clone()) + z.clone() * GaussRat::from_rat(self.d.clone())
    }

    /// True when the coefficient of `z` vanishes.
    pub fn is_constant(&self) -> bool {
        self.d.is_zero()
    }
}

/// Symbolic parameters `b_j` of the `H` kernel (1-based `j` stored at `j-1`).
pub fn h_params_affine(k: usize) -> Vec<Affine> {
    let k = k as i64;
    let mut b = Vec::with_capacity(2 * k as usize + 2);
    for j in 1..=2 * k + 2 {
        let v = if j <= k {
            Affine::new(rat(j - 1, k), rat(0, 1))
        } else if j == k + 1 {
            Affine::new(rat(k - 1, 2 * k), rat(-1, 2 * k))
        } else if j <= 2 * k + 1 {
            Affine::new(rat(4 * k + 3 - 2 * j, 2 * k), rat(0, 1))
        } else {
            Affine::new(rat(2 * k - 1, 2 * k), rat(-1, 2 * k))
        };
        b.push(v);
    }
    b
}

/// Symbolic parameters `b'_j` of the `K` kernel.
pub fn k_params_affine(k: usize) -> Vec<Affine> {
    let k = k as i64;
    let mut b = Vec::with_capacity(2 * k as usize + 2);
    for j in 1..=2 * k + 2 {
        let v = if j <= k {
            Affine::new(rat(j - 1, k), rat(0, 1))
        } else if j == k + 1 {
            Affine::new(rat(k - 1, 2 * k), rat(-1, 2 * k))
        } else if j == k + 2 {
            Affine::new(rat(2 * k - 1, 2 * k), rat(-1, 2 * k))
        } else {
            Affine::new(rat(4 * k - 2 * j + 5, 2 * k), rat(0, 1))
        };
        b.push(v);
    }
    b
}

/// Parameters of `G^{k+1,0}_{0,2k+2}` representing `H_z^(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerParamsH {
    pub k: usize,
    pub z: Complex64,
    pub b: Vec<Complex64>,
}

/// Parameters of `G^{k+2,0}_{0,2k+2}` representing `K_z^(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerParamsK {
    pub k: usize,
    pub z: Complex64,
    pub bprime: Vec<Complex64>,
}

pub fn meijer_params_h(k: usize, z: Complex64) -> Result<MeijerParamsH> {
    if k == 0 {
        return domain("k must be >= 1");
    }
    let b = h_params_affine(k).iter().map(|a| a.eval(z)).collect();
    Ok(MeijerParamsH { k, z, b })
}

pub fn meijer_params_k(k: usize, z: Complex64) -> Result<MeijerParamsK> {
    if k == 0 {
        return domain("k must be >= 1");
    }
    let bprime = k_params_affine(k).iter().map(|a| a.eval(z)).collect();
    Ok(MeijerParamsK { k, z, bprime })
}

/// Gaussian rational `re + i*im`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> GaussRat {
        GaussRat { re, im }
    }

    pub fn from_rat(re: BigRational) -> GaussRat {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRat {
        GaussRat::new(rat(re_num, re_den), rat(im_num, im_den))
    }

    /// The exact binary value of a finite double pair.
    pub fn from_c64(z: Complex64) -> Option<GaussRat> {
        Some(GaussRat::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn from_int(n: &BigInt) -> GaussRat {
        GaussRat::from_rat(BigRational::from_integer(n.clone()))
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::from_rat(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::from_rat(BigRational::one())
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        GaussRat::new(
            self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            self.re * o.im + self.im * o.re,
        )
    }
}

/// `sum_{j=0}^{2k+2-m} (-2k)^j e_j(X_{2k+2}) S(2k+2-j, m)` in floating point.
///
/// The terms grow like `(2k)^j` and cancel down to at most a quadratic in
/// `z`, so the parameters, the `e_j` and the sum are carried in double-double.
pub fn lemma45_lhs(k: usize, z: Complex64, m: usize) -> Result<Complex64> {
    let q = 2 * k + 2;
    if k == 0 || m == 0 || m > q {
        return domain(format!(
            "lemma45: need k >= 1 and 1 <= m <= {q}, got k={k}, m={m}"
        ));
    }
    meijer_params_h(k, z)?;
    let zd = CDd::from_c64(z);
    let rat_dd = |r: &BigRational| {
        let f = |b: &BigInt| CDd::from_c64(Complex64::new(b.to_f64().unwrap_or(f64::NAN), 0.0));
        f(r.numer()) / f(r.denom())
    };
    let b: Vec<CDd> = h_params_affine(k)
        .iter()
        .map(|a| rat_dd(&a.c) + zd * rat_dd(&a.d))
        .collect();
    let mut e = vec![CDd::ONE];
    for x in &b {
        e.push(CDd::ZERO);
        for l in (1..e.len()).rev() {
            e[l] = e[l] + *x * e[l - 1];
        }
    }
    let mut acc = CDd::ZERO;
    let mut pw = 1.0;
    for (j, ej) in e.iter().enumerate().take(q - m + 1) {
        let s = stirling2(q - j, m)?.to_f64().unwrap_or(f64::NAN);
        acc += ej
            .mul_c64(Complex64::new(pw, 0.0))
            .mul_c64(Complex64::new(s, 0.0));
        pw *= -2.0 * k as f64;
    }
    Ok(acc.to_c64())
}

/// Exact version of [`lemma45_lhs`] for Gaussian-rational `z`.
pub fn lemma45_lhs_exact(k: usize, z: &GaussRat, m: usize) -> Result<GaussRat> {
    let q = 2 * k + 2;
    if k == 0 || m == 0 || m > q {
        return domain(format!(
            "lemma45: need k >= 1 and 1 <= m <= {q}, got k={k}, m={m}"
        ));
    }
    let b: Vec<GaussRat> = h_params_affine(k).iter().map(|a| a.eval_exact(z)).collect();
    let e = poly_from_roots(&b);
    let mut acc = GaussRat::zero();
    let step = BigInt::from(-2 * k as i64);
    let mut pw = BigInt::one();
    for (j, ej) in e.into_iter().enumerate().take(q - m + 1) {
        let coef = &pw * stirling2(q - j, m)?;
        acc = acc + ej * GaussRat::from_int(&coef);
        pw *= &step;
    }
    Ok(acc)
}

/// Right side of the coefficient identity: 1, 2z+k+3, (z+1)(z+k+1) or 0.
pub fn lemma45_rhs(k: usize, z: Complex64, m: usize) -> Complex64 {
    let q = 2 * k + 2;
    let kf = k as f64;
    if m == q {
        Complex64::new(1.0, 0.0)
    } else if m == q - 1 {
        2.0 * z + kf + 3.0
    } else if m == q - 2 {
        (z + 1.0) * (z + kf + 1.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

pub fn lemma45_rhs_exact(k: usize, z: &GaussRat, m: usize) -> GaussRat {
    let q = 2 * k + 2;
    let kk = GaussRat::from_rat(rat(k as i64, 1));
    let one = GaussRat::one();
    if m == q {
        one
    } else if m == q - 1 {
        GaussRat::from_rat(rat(2, 1)) * z.clone() + kk + GaussRat::from_rat(rat(3, 1))
    } else if m == q - 2 {
        (z.clone() + one.clone()) * (z.clone() + kk + one)
    } else {
        GaussRat::zero()
    }
}

/// The factors `1 - (2k/n) b_i` that kill the low-order coefficients:
/// `i = 2k-l+2` for odd `n = 2l-1 <= 2k-1`, `i = l+1` for even `n = 2l <= 2k-2`.
/// Returns `(n, factor)` pairs, each factor exact.
pub fn vanishing_factors(k: usize) -> Vec<(usize, BigRational)> {
    let b = h_params_affine(k);
    let two_k = BigRational::from_integer(BigInt::from(2 * k));
    let mut out = Vec::new();
    for n in 1..=2 * k - 1 {
        let idx = if n % 2 == 1 {
            let l = n.div_ceil(2);
            2 * k - l + 2
        } else {
            n / 2 + 1
        };
        let bi = &b[idx - 1];
        // Only constant parameters appear in these positions.
        debug_assert!(bi.is_constant());
        let f = BigRational::one() - &two_k / BigRational::from_integer(BigInt::from(n)) * &bi.c;
        out.push((n, f));
    }
    out
}

/// Absolute value helper for exact checks.
pub fn gauss_is_zero(g: &GaussRat) -> bool {
    g.re.abs().is_zero() && g.im.abs().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(0, 0).unwrap(), BigInt::from(1));
        assert_eq!(stirling2(4, 3).unwrap(), BigInt::from(6));
        assert_eq!(stirling2(4, 2).unwrap(), BigInt::from(7));
        assert_eq!(stirling2(3, 5).unwrap(), BigInt::from(0));
        assert_eq!(stirling1_signed(3, 3).unwrap(), BigInt::from(1));
        assert_eq!(stirling1_signed(3, 2).unwrap(), BigInt::from(-3));
        assert_eq!(stirling1_signed(3, 1).unwrap(), BigInt::from(2));
        assert!(stirling2(65, 3).is_err());
    }

    #[test]
    fn stirling2_recurrence_exhaustive() {
        for n in 1..=30 {
            for m in 1..=30 {
                let lhs = stirling2(n, m).unwrap();
                let rhs = BigInt::from(m) * stirling2(n - 1, m).unwrap()
                    + stirling2(n - 1, m - 1).unwrap();
                assert_eq!(lhs, rhs, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn elem_sym_examples() {
        let x = SymbolMultiset::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(elem_sym(&x, 2).unwrap(), c(11.0, 0.0));
        assert_eq!(elem_sym(&x, 0).unwrap(), c(1.0, 0.0));
        assert!(elem_sym(&x, 4).is_err());
        assert!(SymbolMultiset::new(vec![]).is_err());
    }

    #[test]
    fn h_params_k2_sum() {
        let p = meijer_params_h(2, c(0.0, 0.0)).unwrap();
        let x = SymbolMultiset::new(p.b).unwrap();
        assert!((elem_sym(&x, 1).unwrap() - c(2.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn params_k1_z0() {
        let h = meijer_params_h(1, c(0.0, 0.0)).unwrap();
        let k = meijer_params_k(1, c(0.0, 0.0)).unwrap();
        let want = [0.0, 0.0, 0.5, 0.5];
        for (j, w) in want.into_iter().enumerate() {
            assert!((h.b[j] - c(w, 0.0)).norm() < 1e-15);
            assert!((k.bprime[j] - c(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn lemma45_small_exact() {
        let z = GaussRat::from_ints(1, 3, 2, 5);
        for k in 1..=3 {
            for m in 1..=2 * k + 2 {
                let l = lemma45_lhs_exact(k, &z, m).unwrap();
                assert_eq!(l, lemma45_rhs_exact(k, &z, m), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn vanishing_factors_are_zero() {
        for k in 1..=8 {
            for (n, f) in vanishing_factors(k) {
                assert!(f.is_zero(), "k={k} n={n}");
            }
        }
    }
}
