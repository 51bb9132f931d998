//! Classical special functions of complex argument.

pub mod bessel;
pub mod btransform;
pub mod gamma;
pub mod hyp;
pub mod zeta;

pub use bessel::{bessel, bessel_i, bessel_j, bessel_k, bessel_y, hankel, BesselKind, BesselOrder};
pub use btransform::{b_transform, b_transform_route, BRoute, BTransformInput};
pub use gamma::{digamma_c, gamma_c, lgamma_c, rgamma, EULER_GAMMA};
pub use hyp::hyp1f2;
pub use zeta::{zeta_c, zeta_tail};
