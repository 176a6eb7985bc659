//! Per-element fading distributions: densities, moments, Laplace-domain
//! MGFs `E[exp(-s g)]`, and seeded samplers.
//!
//! All Rayleigh factors use the unit convention `f(g) = g exp(-g^2 / 2)`.
//! The double-Rayleigh gain is the product of two independent Rayleigh
//! amplitudes, density `g K0(g)`. The triple cascade multiplies in a third
//! (the source-to-surface hop) and is handled through conditioning on that
//! factor instead of through Meijer-G functions.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distr::Open01;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, bessel_k0, hyp2f1_special_with_gap, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingKind {
    Rayleigh,
    DoubleRayleigh,
    TripleCascade,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMoments {
    pub mean: f64,
    pub variance: f64,
}

impl ChannelMoments {
    /// Second raw moment `E[g^2]`.
    pub fn second_moment(&self) -> f64 {
        self.variance + self.mean * self.mean
    }

    /// Triple-cascade constants as they are printed in the closed-form relay
    /// outage expression: mean coefficient `pi^3 / (2 sqrt 2)` and variance
    /// `8 - (pi/2)^(3/2)`. Neither matches the distribution; see
    /// [`moments`] for the correct pair.
    pub fn triple_cascade_as_printed() -> Self {
        Self {
            mean: PI.powi(3) / (2.0 * std::f64::consts::SQRT_2),
            variance: 8.0 - FRAC_PI_2.powf(1.5),
        }
    }
}

/// Exact per-element mean and variance.
pub fn moments(kind: FadingKind) -> ChannelMoments {
    match kind {
        FadingKind::Rayleigh => ChannelMoments {
            mean: FRAC_PI_2.sqrt(),
            variance: 2.0 - FRAC_PI_2,
        },
        FadingKind::DoubleRayleigh => ChannelMoments {
            mean: FRAC_PI_2,
            variance: 4.0 - PI * PI / 4.0,
        },
        // E[g] = (pi/2)^(1/2) * pi/2, E[g^2] = 2 * 4.
        FadingKind::TripleCascade => ChannelMoments {
            mean: FRAC_PI_2.powf(1.5),
            variance: 8.0 - FRAC_PI_2.powi(3),
        },
    }
}

/// Probability density at `g > 0`.
pub fn pdf(kind: FadingKind, g: f64) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::domain("pdf", g, "(0, inf)"));
    }
    match kind {
        FadingKind::Rayleigh => Ok(g * (-0.5 * g * g).exp()),
        FadingKind::DoubleRayleigh => Ok(g * bessel_k0(g)?),
        FadingKind::TripleCascade => triple_cascade_pdf(g),
    }
}

/// Product density `f3(g) = int (1/y) f_R(y) f_DR(g/y) dy`
/// `= int exp(-y^2/2) (g/y) K0(g/y) dy`.
fn triple_cascade_pdf(g: f64) -> Result<f64> {
    specfun::integrate_semi_infinite(
        |y| {
            let ratio = g / y;
            if !ratio.is_finite() {
                return 0.0;
            }
            // ratio > 0 here, so K0 cannot fail.
            (-0.5 * y * y).exp() * ratio * bessel_k0(ratio).unwrap_or(0.0)
        },
        &inner_spec(),
    )
}

/// Inner quadratures feed outer ones, so they run three orders tighter than
/// the default.
fn inner_spec() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        max_subdivisions: 2000,
    }
}

/// `E[exp(-s g)]` for a double-Rayleigh gain:
/// `4 / (3 (1+s)^2) * 2F1(2, 1/2; 5/2; (s-1)/(s+1))`.
pub fn mgf_double_rayleigh(s: f64) -> f64 {
    debug_assert!(s >= 0.0, "MGF argument must be non-negative");
    let s = s.max(0.0);
    let one_plus = 1.0 + s;
    let x = (s - 1.0) / one_plus;
    let gap = 2.0 / one_plus;
    4.0 / (3.0 * one_plus * one_plus) * hyp2f1_special_with_gap(x, gap)
}

/// Below this argument `1 - M(s)` is taken from its Taylor series, which
/// avoids the cancellation in `1 - M(s)` when `M(s)` is within 1e-4 of one.
const TAYLOR_LIMIT: f64 = 1e-4;

/// `1 - E[exp(-s g)]` for a double-Rayleigh gain.
pub fn mgf_complement_double_rayleigh(s: f64) -> f64 {
    if s < TAYLOR_LIMIT {
        // Raw moments E[g^k] = (2^(k/2) Gamma(1 + k/2))^2: pi/2, 4, 9pi/2, 64.
        let s = s.max(0.0);
        s * (FRAC_PI_2 + s * (-2.0 + s * (0.75 * PI - s * (8.0 / 3.0))))
    } else {
        1.0 - mgf_double_rayleigh(s)
    }
}

/// `E[exp(-s g)]` for the triple cascade, via
/// `M3(s) = int y exp(-y^2/2) M2(s y) dy`.
pub fn mgf_triple_cascade(s: f64) -> Result<f64> {
    if s <= 1.0 {
        Ok(1.0 - mgf_complement_triple_cascade(s)?)
    } else {
        specfun::integrate_semi_infinite(
            |y| y * (-0.5 * y * y).exp() * mgf_double_rayleigh(s * y),
            &inner_spec(),
        )
    }
}

/// `1 - M3(s)`, integrated directly for small `s` so that it keeps full
/// relative accuracy as `s -> 0`.
pub fn mgf_complement_triple_cascade(s: f64) -> Result<f64> {
    if s <= 0.0 {
        return Ok(0.0);
    }
    if s <= 1.0 {
        specfun::integrate_semi_infinite(
            |y| y * (-0.5 * y * y).exp() * mgf_complement_double_rayleigh(s * y),
            &inner_spec(),
        )
    } else {
        Ok(1.0 - mgf_triple_cascade(s)?)
    }
}

/// Seeded ChaCha stream. Independent substreams are split off the root by
/// index, so parallel consumers reproduce the serial sequence exactly.
#[derive(Debug, Clone)]
pub struct ChannelStream {
    rng: ChaCha8Rng,
}

impl ChannelStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Fresh stream keyed by `(root seed, index)`, positioned at its start.
    /// Splitting an already-split stream replaces its index.
    pub fn split(&self, index: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(self.rng.get_seed());
        rng.set_stream(index);
        Self { rng }
    }
}

impl RngCore for ChannelStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// One draw of the per-element gain. Cascades are products of independent
/// inverse-transform Rayleigh draws.
pub fn sample<R: Rng + ?Sized>(kind: FadingKind, rng: &mut R) -> f64 {
    match kind {
        FadingKind::Rayleigh => sample_rayleigh(rng),
        FadingKind::DoubleRayleigh => sample_rayleigh(rng) * sample_rayleigh(rng),
        FadingKind::TripleCascade => {
            sample_rayleigh(rng) * sample_rayleigh(rng) * sample_rayleigh(rng)
        }
    }
}

#[inline]
pub(crate) fn sample_rayleigh<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    (-2.0 * u.ln()).sqrt()
}
