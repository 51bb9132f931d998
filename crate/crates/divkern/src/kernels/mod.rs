//! The kernels `H_z^(k)(x) = int_0^inf t^(z-k) cos(xt) cos(t^-k) dt` and
//! `K_z^(k)(x)` (the Mellin-Barnes companion, equal to
//! `int_0^inf exp(-t^-k) cos(xt) t^(z-k) dt` on the positive axis).
//!
//! Each kernel has several independent evaluation routes; [`h_eval`] picks the
//! residue series for small arguments and a steepest-descent contour otherwise.

mod contour;
mod h;
mod k;
mod ode;
pub mod slater;
mod table;
mod tabulate;

pub use contour::{
    kernel_components, oscillatory_kernel, saddle_phase, KernelComponents, KernelTrig,
};
pub use h::{
    growth_parameter, h_asymptotic, h_asymptotic_amplitude, h_asymptotic_theta,
    h_derivative_at_zero, h_eval, h_from_k_combination, h_k1_closed_form, h_quadrature,
    h_quadrature_with, h_series, h_series_deriv, h_series_monomial, h_small_x_bound,
    h_steepest_descent, h_zero, kernel_quad, SmallXBound, SERIES_MAX_Y,
};
pub use k::{k_contour, k_contour_at, k_real, k_real_with, k_series, k_zero};
pub use ode::{ode_coefficients, ode_residual, OdeSolution};
pub use table::KernelTable;
pub use tabulate::{tabulate_h, write_tabulation_csv, TabulationRow};

use crate::combinat::{meijer_params_h, meijer_params_k};
use crate::error::{domain, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Kernel parameters `k >= 1` and `-1 < Re z < k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub k: u32,
    pub z: Complex64,
}

impl KernelParams {
    pub fn new(k: u32, z: Complex64) -> Result<Self> {
        if k == 0 {
            return domain("k must be a positive integer");
        }
        if !(z.re > -1.0 && z.re < k as f64) {
            return domain(format!("need -1 < Re z < k = {k}, got z = {z}"));
        }
        Ok(KernelParams { k, z })
    }

    /// Parameters outside the strip, for internal perturbation and contour use.
    pub(crate) fn unchecked(k: u32, z: Complex64) -> Self {
        KernelParams { k, z }
    }

    pub fn kf(&self) -> f64 {
        self.k as f64
    }

    /// Meijer parameters `b_1..b_{2k+2}` of `H`.
    pub fn h_params(&self) -> Vec<Complex64> {
        meijer_params_h(self.k as usize, self.z)
            .map(|p| p.b)
            .unwrap_or_default()
    }

    /// Meijer parameters `b'_1..b'_{2k+2}` of `K`.
    pub fn k_params(&self) -> Vec<Complex64> {
        meijer_params_k(self.k as usize, self.z)
            .map(|p| p.bprime)
            .unwrap_or_default()
    }

    /// Whether the residue series of `H` hits a pole collision.
    pub fn h_degenerate(&self) -> bool {
        slater::has_collision(&self.h_params(), self.k as usize + 1)
    }

    pub fn k_degenerate(&self) -> bool {
        slater::has_collision(&self.k_params(), self.k as usize + 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Series,
    /// Residue series at `z +- h`, Richardson-extrapolated to `h = 0`.
    SeriesPerturbed,
    Quadrature,
    Contour,
    SteepestDescent,
    BesselClosedForm,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Series => "series",
            Route::SeriesPerturbed => "series_perturbed",
            Route::Quadrature => "quadrature",
            Route::Contour => "contour",
            Route::SteepestDescent => "steepest_descent",
            Route::BesselClosedForm => "bessel_closed_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub route: Route,
    pub est_error: f64,
}

/// Step used when a degenerate parameter set is evaluated by perturbation.
pub const PERTURBATION_STEP: f64 = 1e-3;

/// Richardson limit of the even average `(f(z+h) + f(z-h))/2` as `h -> 0`
/// from steps `h, 2h, 4h`.
pub(crate) fn richardson_in_z<F>(z: Complex64, f: F) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Result<(Complex64, f64)>,
{
    let h = PERTURBATION_STEP;
    let mut a = [Complex64::new(0.0, 0.0); 3];
    let mut err = 0.0f64;
    for (i, s) in [1.0, 2.0, 4.0].iter().enumerate() {
        let (p, ep) = f(z + h * s)?;
        let (m, em) = f(z - h * s)?;
        a[i] = (p + m) * 0.5;
        err = err.max(0.5 * (ep + em));
    }
    let r1h = (a[0] * 4.0 - a[1]) / 3.0;
    let r12h = (a[1] * 4.0 - a[2]) / 3.0;
    let r2 = (r1h * 16.0 - r12h) / 15.0;
    Ok((r2, (r2 - r1h).norm() + 4.0 * err))
}
