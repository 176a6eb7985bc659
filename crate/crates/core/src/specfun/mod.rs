//! Scalar special functions and quadrature used by the analytic metrics.

mod bessel;
mod hyp2f1;
mod quadrature;

pub use bessel::bessel_k0;
pub use hyp2f1::hyp2f1_special;
pub(crate) use hyp2f1::hyp2f1_special_with_gap;
pub use quadrature::{
    integrate, integrate_semi_infinite, integrate_semi_infinite_removable, QuadratureSpec,
    REMOVABLE_CUTOFF,
};

/// Error function, accurate to a few ulp (musl implementation).
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function `1 - erf(x)` without cancellation for large `x`.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
