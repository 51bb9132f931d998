//! Generalized divisor functions `sigma_z^(k)(n) = sum_{d^k | n} d^z`, the
//! kernels `H_z^(k)` and `K_z^(k)` of their Voronoi summation formula, and
//! numerical verification of the Voronoi and Lambert-series identities.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod combinat;
pub mod dd;
pub mod error;
pub mod kernels;
pub mod lambert;
pub mod quadrature;
pub mod report;
pub mod specialfn;
pub mod summation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
