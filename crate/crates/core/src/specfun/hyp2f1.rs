//! The single Gauss hypergeometric instance `2F1(2, 1/2; 5/2; x)`.
//!
//! Writing the series coefficient as `3(k+1) / ((2k+1)(2k+3))` and splitting
//! it into partial fractions gives
//!
//! ```text
//! 2F1(2, 1/2; 5/2; x) = 3/4 * sum_k x^k [1/(2k+1) + 1/(2k+3)]
//! ```
//!
//! which sums to `atanh` for `x > 0` and `atan` for `x < 0`. Because
//! `c - a - b = 0` the function has a logarithmic singularity at `x = 1`;
//! the `atanh` branch carries it exactly, so no slow series is ever summed
//! near the singular point.

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 0.5;

/// `2F1(2, 1/2; 5/2; x)` on `[-1, 1)`.
pub fn hyp2f1_special(x: f64) -> Result<f64> {
    if !(-1.0..1.0).contains(&x) {
        return Err(Error::domain("hyp2f1_special", x, "[-1, 1)"));
    }
    Ok(evaluate(x, 1.0 - x))
}

/// Same function, with `1 - x` supplied by a caller that knows it more
/// accurately than the subtraction would give it.
pub(crate) fn hyp2f1_special_with_gap(x: f64, one_minus_x: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&x) && one_minus_x > 0.0);
    evaluate(x, one_minus_x)
}

fn evaluate(x: f64, one_minus_x: f64) -> f64 {
    if x.abs() <= SERIES_LIMIT {
        series(x)
    } else if x > 0.0 {
        log_branch(x, one_minus_x)
    } else {
        arctan_branch(x)
    }
}

fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 0..200 {
        let kf = f64::from(k);
        let coeff = 3.0 * (kf + 1.0) / ((2.0 * kf + 1.0) * (2.0 * kf + 3.0));
        let term = coeff * power;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        power *= x;
    }
    sum
}

/// `x in (0.5, 1)`: `t = sqrt(x)`, result `3/4 [atanh t / t + (atanh t - t) / t^3]`.
fn log_branch(x: f64, one_minus_x: f64) -> f64 {
    let t = x.sqrt();
    // 1 - t without cancellation, then atanh t = 1/2 ln(1 + 2t / (1 - t)).
    let one_minus_t = one_minus_x / (1.0 + t);
    let atanh = 0.5 * (2.0 * t / one_minus_t).ln_1p();
    0.75 * (atanh / t + (atanh - t) / (t * x))
}

/// `x in [-1, -0.5)`: `w = sqrt(-x)`, result `3/4 [atan w / w + (w - atan w) / w^3]`.
fn arctan_branch(x: f64) -> f64 {
    let w = (-x).sqrt();
    let atan = w.atan();
    0.75 * (atan / w + (w - atan) / (w * -x))
}
