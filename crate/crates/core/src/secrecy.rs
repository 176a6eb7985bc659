//! Analytic secrecy metrics for the two surface-assisted topologies.
//!
//! Average link capacity comes from the MGF identity
//!
//! ```text
//! C = 1/ln 2 * int_0^inf (1/z) (1 - M(z)) exp(-z) dz,   M(z) = E[exp(-z gamma)]
//! ```
//!
//! where the SNR MGF factors into `N` identical per-element terms. The
//! closed-form approximation replaces each capacity by its Jensen bound
//! `log2(1 + E[gamma])`, and the outage probability uses a Gaussian
//! approximation of the element sum with the eavesdropper sum replaced by
//! its mean.

use std::cell::RefCell;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channels::{
    self, mgf_complement_double_rayleigh, mgf_complement_triple_cascade, mgf_double_rayleigh,
    mgf_triple_cascade, ChannelMoments, FadingKind,
};
use crate::error::{Error, Result};
use crate::specfun::{erfc, integrate_semi_infinite_removable, QuadratureSpec};

/// Network topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Vehicle-to-vehicle link, the source transmits through an on-board
    /// surface acting as access point. Per-element gains are double Rayleigh.
    V2vRisAp,
    /// Fixed source reflecting off a building-mounted surface. Per-element
    /// gains are Rayleigh (source hop) times double Rayleigh (vehicle hop).
    VanetRisRelay,
}

impl Model {
    /// Distribution of one element's gain on a receive link.
    pub fn element_kind(self) -> FadingKind {
        match self {
            Model::V2vRisAp => FadingKind::DoubleRayleigh,
            Model::VanetRisRelay => FadingKind::TripleCascade,
        }
    }
}

/// Receiver whose link is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    Destination,
    Eavesdropper,
}

/// Physical parameters of one scenario. Powers are in watts, distances in
/// meters, noise in the same (normalised) power unit as `p_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub model: Model,
    pub p_s: f64,
    pub n_0: f64,
    pub beta: f64,
    pub n_cells: u32,
    pub r_d: f64,
    pub r_e: f64,
    /// Source-to-surface distance; only the relay topology has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_s: Option<f64>,
}

impl SystemParams {
    /// Reference scenario: 10 W, unit noise, beta 2.7, 16 cells, r_D 4 m,
    /// r_E 8 m and, for the relay, r_s 10 m.
    pub fn defaults(model: Model) -> Self {
        Self {
            model,
            p_s: 10.0,
            n_0: 1.0,
            beta: 2.7,
            n_cells: 16,
            r_d: 4.0,
            r_e: 8.0,
            r_s: match model {
                Model::V2vRisAp => None,
                Model::VanetRisRelay => Some(10.0),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("p_s", self.p_s)?;
        positive("n_0", self.n_0)?;
        positive("beta", self.beta)?;
        positive("r_d", self.r_d)?;
        positive("r_e", self.r_e)?;
        if self.n_cells < 1 {
            return Err(Error::invalid("n_cells", "must be >= 1"));
        }
        match (self.model, self.r_s) {
            (Model::V2vRisAp, Some(_)) => Err(Error::invalid(
                "r_s",
                "the access-point topology has no source-to-surface hop",
            )),
            (Model::VanetRisRelay, None) => {
                Err(Error::invalid("r_s", "required by the relay topology"))
            }
            (Model::VanetRisRelay, Some(r_s)) => positive("r_s", r_s),
            (Model::V2vRisAp, None) => Ok(()),
        }
    }

    fn distance(&self, link: Link) -> f64 {
        match link {
            Link::Destination => self.r_d,
            Link::Eavesdropper => self.r_e,
        }
    }

    /// Path gain of the source hop, `r_s^-beta`, or 1 without one.
    fn source_path_gain(&self) -> f64 {
        self.r_s.map_or(1.0, |r_s| r_s.powf(-self.beta))
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

/// Outage-formula constants for the relay topology.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SopMode {
    /// Moments of the actual triple-cascade distribution.
    #[default]
    Corrected,
    /// The constants exactly as they appear in the printed relay expression.
    #[serde(alias = "paper_literal")]
    PaperLiteral,
}

/// SNR per unit element gain: `P_s r_i^-beta / N_0`, times `r_s^-beta` for
/// the relay.
pub fn snr_scale(params: &SystemParams, link: Link) -> f64 {
    params.p_s * params.source_path_gain() * params.distance(link).powf(-params.beta) / params.n_0
}

/// Per-element MGF `E[exp(-s g)]` for the topology's gain distribution.
pub fn element_mgf(model: Model, s: f64) -> Result<f64> {
    match model {
        Model::V2vRisAp => Ok(mgf_double_rayleigh(s)),
        Model::VanetRisRelay => mgf_triple_cascade(s),
    }
}

fn element_mgf_complement(model: Model, s: f64) -> Result<f64> {
    match model {
        Model::V2vRisAp => Ok(mgf_complement_double_rayleigh(s)),
        Model::VanetRisRelay => mgf_complement_triple_cascade(s),
    }
}

/// MGF of the received SNR, `[M_element(z * scale)]^N`.
pub fn link_mgf(params: &SystemParams, link: Link, z: f64) -> Result<f64> {
    let m = element_mgf(params.model, z * snr_scale(params, link))?;
    Ok(m.powi(params.n_cells as i32))
}

/// Ergodic capacity `E[log2(1 + gamma)]` of one link, in bits/s/Hz.
pub fn avg_capacity(params: &SystemParams, link: Link, spec: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    let scale = snr_scale(params, link);
    let n = f64::from(params.n_cells);
    let mean = channels::moments(params.model.element_kind()).mean;
    let failure = RefCell::new(None);

    // 1 - M^N = -expm1(N ln(1 - c)) with c = 1 - M, accurate for small c.
    let integrand = |z: f64| match element_mgf_complement(params.model, z * scale) {
        Ok(c) => -(n * (-c).ln_1p()).exp_m1() / z * (-z).exp(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let integral = integrate_semi_infinite_removable(integrand, n * scale * mean, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((integral? / LN_2).max(0.0))
}

/// `(C_D, C_E)`.
pub fn capacities(params: &SystemParams, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    Ok((
        avg_capacity(params, Link::Destination, spec)?,
        avg_capacity(params, Link::Eavesdropper, spec)?,
    ))
}

/// Average secrecy capacity as the difference of the two ergodic
/// capacities. Negative when the eavesdropper is the stronger receiver.
pub fn asc_exact(params: &SystemParams, spec: &QuadratureSpec) -> Result<f64> {
    let (c_d, c_e) = capacities(params, spec)?;
    Ok(c_d - c_e)
}

/// [`asc_exact`] with the negative part removed.
pub fn asc_exact_clamped(params: &SystemParams, spec: &QuadratureSpec) -> Result<f64> {
    asc_exact(params, spec).map(|v| v.max(0.0))
}

/// Jensen bound `log2(1 + N E[g] scale)` on one link's ergodic capacity.
pub fn jensen_bound(params: &SystemParams, link: Link) -> f64 {
    let mean = channels::moments(params.model.element_kind()).mean;
    (f64::from(params.n_cells) * mean * snr_scale(params, link)).ln_1p() / LN_2
}

/// Closed-form secrecy capacity from the two Jensen bounds.
pub fn asc_approx(params: &SystemParams) -> f64 {
    jensen_bound(params, Link::Destination) - jensen_bound(params, Link::Eavesdropper)
}

fn sop_constants(model: Model, mode: SopMode) -> ChannelMoments {
    match (model, mode) {
        (Model::VanetRisRelay, SopMode::PaperLiteral) => {
            ChannelMoments::triple_cascade_as_printed()
        }
        _ => channels::moments(model.element_kind()),
    }
}

/// Secrecy outage probability `Pr[C_s < c_th]` under the Gaussian
/// approximation of the destination element sum. `c_th` must be positive.
pub fn sop(params: &SystemParams, c_th: f64, mode: SopMode) -> f64 {
    debug_assert!(c_th > 0.0);
    let nu = c_th.exp2();
    let n = f64::from(params.n_cells);
    let constants = sop_constants(params.model, mode);
    // r_E^-beta / r_D^-beta
    let ratio = (params.r_d / params.r_e).powf(params.beta);
    let noise_term = (nu - 1.0) / snr_scale(params, Link::Destination);
    let numer = noise_term + n * constants.mean * (nu * ratio - 1.0);
    let denom = (2.0 * n * constants.variance).sqrt();
    // 1/2 (1 + erf(u)) == 1/2 erfc(-u), without the cancellation for u << 0.
    (0.5 * erfc(-numer / denom)).clamp(0.0, 1.0)
}

/// All analytic metrics at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecrecyReport {
    pub c_d: f64,
    pub c_e: f64,
    pub asc_exact: f64,
    pub asc_approx: f64,
    pub sop_corrected: f64,
    pub sop_paper_literal: f64,
}

pub fn report(params: &SystemParams, c_th: f64, spec: &QuadratureSpec) -> Result<SecrecyReport> {
    if !(c_th > 0.0) {
        return Err(Error::invalid("c_th", "must be > 0"));
    }
    let (c_d, c_e) = capacities(params, spec)?;
    Ok(SecrecyReport {
        c_d,
        c_e,
        asc_exact: c_d - c_e,
        asc_approx: asc_approx(params),
        sop_corrected: sop(params, c_th, SopMode::Corrected),
        sop_paper_literal: sop(params, c_th, SopMode::PaperLiteral),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v2v() -> SystemParams {
        SystemParams::defaults(Model::V2vRisAp)
    }

    fn relay() -> SystemParams {
        SystemParams::defaults(Model::VanetRisRelay)
    }

    #[test]
    fn scale_values() {
        // 10 * 4^-2.7
        assert!((snr_scale(&v2v(), Link::Destination) - 0.236_830_713_517_249_6).abs() < 1e-14);
        let unit = SystemParams {
            p_s: 1.0,
            r_d: 1.0,
            r_e: 1.0,
            r_s: Some(1.0),
            ..relay()
        };
        assert_eq!(snr_scale(&unit, Link::Destination), 1.0);
        let factor = snr_scale(&relay(), Link::Eavesdropper)
            / snr_scale(
                &SystemParams {
                    model: Model::V2vRisAp,
                    r_s: None,
                    ..relay()
                },
                Link::Eavesdropper,
            );
        assert!((factor - 10f64.powf(-2.7)).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(v2v().validate().is_ok());
        assert!(relay().validate().is_ok());
        assert!(SystemParams {
            n_cells: 0,
            ..v2v()
        }
        .validate()
        .is_err());
        assert!(SystemParams { p_s: 0.0, ..v2v() }.validate().is_err());
        assert!(SystemParams {
            r_s: Some(3.0),
            ..v2v()
        }
        .validate()
        .is_err());
        assert!(SystemParams {
            r_s: None,
            ..relay()
        }
        .validate()
        .is_err());
        assert!(SystemParams {
            beta: f64::NAN,
            ..relay()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn link_mgf_structure() {
        let p = v2v();
        assert_eq!(link_mgf(&p, Link::Destination, 0.0).unwrap(), 1.0);
        let one = SystemParams { n_cells: 1, ..p };
        let z = 1.0 / snr_scale(&one, Link::Destination);
        assert!((link_mgf(&one, Link::Destination, z).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        let two = SystemParams { n_cells: 2, ..p };
        let m1 = link_mgf(&one, Link::Eavesdropper, 0.7).unwrap();
        let m2 = link_mgf(&two, Link::Eavesdropper, 0.7).unwrap();
        assert!((m2 - m1 * m1).abs() < 1e-15);
    }

    #[test]
    fn approx_matches_printed_closed_forms() {
        let p = v2v();
        let (pd, pe) = (p.r_d.powf(-p.beta), p.r_e.powf(-p.beta));
        let n = f64::from(p.n_cells);
        let printed =
            ((2.0 * p.n_0 + n * PI * p.p_s * pd) / (2.0 * p.n_0 + n * PI * p.p_s * pe)).log2();
        assert!((asc_approx(&p) - printed).abs() < 1e-13);
        // log2((1 + 8 pi * 0.2368307...) / (1 + 8 pi * 0.0364473...)) evaluated at 40 digits.
        assert!((asc_approx(&p) - 1.859_370_813_397_091_7).abs() < 1e-13);

        let p = relay();
        let ps = p.r_s.unwrap().powf(-p.beta);
        let (pd, pe) = (p.r_d.powf(-p.beta), p.r_e.powf(-p.beta));
        let k = 2.0 * 2f64.sqrt() * p.n_0;
        let c = n * p.p_s * PI.powf(1.5) * ps;
        let printed = ((k + c * pd) / (k + c * pe)).log2();
        assert!((asc_approx(&p) - printed).abs() < 1e-13);
    }

    #[test]
    fn symmetric_links_cancel() {
        let spec = QuadratureSpec::default();
        for model in [Model::V2vRisAp, Model::VanetRisRelay] {
            let p = SystemParams {
                r_e: 4.0,
                ..SystemParams::defaults(model)
            };
            assert_eq!(asc_exact(&p, &spec).unwrap(), 0.0);
            assert_eq!(asc_approx(&p), 0.0);
        }
    }

    #[test]
    fn swapping_distances_negates() {
        let spec = QuadratureSpec::default();
        let p = v2v();
        let swapped = SystemParams {
            r_d: p.r_e,
            r_e: p.r_d,
            ..p
        };
        let a = asc_exact(&p, &spec).unwrap();
        let b = asc_exact(&swapped, &spec).unwrap();
        assert!(a > 0.0);
        assert!((a + b).abs() < 1e-15);
        assert_eq!(asc_exact_clamped(&swapped, &spec).unwrap(), 0.0);
    }

    #[test]
    fn capacity_vanishes_at_zero_power() {
        let spec = QuadratureSpec::default();
        for model in [Model::V2vRisAp, Model::VanetRisRelay] {
            let p = SystemParams {
                p_s: 1e-12,
                ..SystemParams::defaults(model)
            };
            let c = avg_capacity(&p, Link::Destination, &spec).unwrap();
            assert!((0.0..1e-9).contains(&c), "{c}");
        }
    }

    #[test]
    fn capacity_below_jensen_bound() {
        let spec = QuadratureSpec::default();
        for p in [v2v(), relay()] {
            for link in [Link::Destination, Link::Eavesdropper] {
                let c = avg_capacity(&p, link, &spec).unwrap();
                assert!(c > 0.0 && c < jensen_bound(&p, link));
            }
        }
    }

    #[test]
    fn sop_midpoint_and_limits() {
        // Choose N_0 so the numerator vanishes: (nu - 1)/scale = N mean (1 - nu ratio).
        let mut p = v2v();
        let c_th = 1.0;
        let nu: f64 = 2.0;
        let ratio = (p.r_d / p.r_e).powf(p.beta);
        let target = 16.0 * std::f64::consts::FRAC_PI_2 * (1.0 - nu * ratio);
        // scale = p_s r_d^-beta / n_0 = (nu - 1) / target
        p.n_0 = p.p_s * p.r_d.powf(-p.beta) * target / (nu - 1.0);
        assert!((sop(&p, c_th, SopMode::Corrected) - 0.5).abs() < 1e-12);

        let far = SystemParams {
            r_e: 1e4,
            n_0: 1e-6,
            ..v2v()
        };
        assert!(sop(&far, 1.0, SopMode::Corrected) < 1e-6);
        let far = SystemParams { n_cells: 64, ..far };
        assert!(sop(&far, 1.0, SopMode::Corrected) < 1e-12);
        let v = v2v();
        assert_eq!(
            sop(&v, 1.0, SopMode::Corrected),
            sop(&v, 1.0, SopMode::PaperLiteral)
        );
    }

    #[test]
    fn relay_modes_differ() {
        let p = SystemParams {
            n_0: 1e-3,
            ..relay()
        };
        let a = sop(&p, 1.0, SopMode::Corrected);
        let b = sop(&p, 1.0, SopMode::PaperLiteral);
        assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        assert_ne!(a, b);
    }

    #[test]
    fn report_rejects_bad_threshold() {
        assert!(report(&v2v(), 0.0, &QuadratureSpec::default()).is_err());
        let r = report(&v2v(), 1.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.asc_exact, r.c_d - r.c_e);
        assert_eq!(r.sop_corrected, r.sop_paper_literal);
    }

    #[test]
    fn mode_parses_both_spellings() {
        let a: SopMode = serde_json::from_str("\"paper-literal\"").unwrap();
        let b: SopMode = serde_json::from_str("\"paper_literal\"").unwrap();
        assert_eq!(a, b);
    }
}
