//! Run configuration: one JSON document per run.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use risec_core::{McConfig, Model, SopMode, SystemParams};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::CliError;

/// Swept parameter of a one-dimensional sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    PS,
    #[serde(rename = "n_0")]
    N0,
    Beta,
    NCells,
    RD,
    RE,
    RS,
    CTh,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::PS => "p_s",
            SweepParam::N0 => "n_0",
            SweepParam::Beta => "beta",
            SweepParam::NCells => "n_cells",
            SweepParam::RD => "r_d",
            SweepParam::RE => "r_e",
            SweepParam::RS => "r_s",
            SweepParam::CTh => "c_th",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::config("sweep: start and stop must be finite"));
        }
        if !(self.start < self.stop) {
            return Err(CliError::config(format!(
                "sweep: start ({}) must be < stop ({})",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(CliError::config("sweep.steps: must be >= 2"));
        }
        if self.scale == Scale::Log && !(self.start > 0.0) {
            return Err(CliError::config("sweep: log scale requires start > 0"));
        }
        if self.param == SweepParam::NCells {
            for v in self.raw_values() {
                let rounded = v.round();
                if rounded < 1.0
                    || rounded > f64::from(u32::MAX)
                    || (v - rounded).abs() > 1e-6 * rounded
                {
                    return Err(CliError::config(format!(
                        "sweep: n_cells point {v} is not a positive integer"
                    )));
                }
            }
        }
        Ok(())
    }

    fn raw_values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }

    /// Sweep points in order; `n_cells` points are rounded to integers.
    pub fn values(&self) -> Vec<f64> {
        let mut values = self.raw_values();
        if self.param == SweepParam::NCells {
            values.iter_mut().for_each(|v| *v = v.round());
        }
        values
    }
}

/// Quantities a run can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    AscExact,
    AscApprox,
    SopCorrected,
    SopPaperLiteral,
    McAsc,
    McSop,
}

impl Output {
    pub fn is_mc(self) -> bool {
        matches!(self, Output::McAsc | Output::McSop)
    }
}

fn default_c_th() -> f64 {
    1.0
}

fn default_outputs() -> BTreeSet<Output> {
    [Output::AscExact, Output::AscApprox, Output::SopCorrected].into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(deserialize_with = "deserialize_base")]
    pub base: SystemParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Secrecy-rate threshold in bits/s/Hz.
    #[serde(default = "default_c_th")]
    pub c_th: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    #[serde(default = "default_outputs")]
    pub outputs: BTreeSet<Output>,
    /// Relay outage constants used when checking outage against simulation.
    #[serde(default)]
    pub sop_mode: SopMode,
}

/// `base` with every field but `model` optional.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseInput {
    model: Model,
    p_s: Option<f64>,
    n_0: Option<f64>,
    beta: Option<f64>,
    n_cells: Option<u32>,
    r_d: Option<f64>,
    r_e: Option<f64>,
    r_s: Option<f64>,
}

fn deserialize_base<'de, D: Deserializer<'de>>(d: D) -> Result<SystemParams, D::Error> {
    let input = BaseInput::deserialize(d)?;
    let defaults = SystemParams::defaults(input.model);
    Ok(SystemParams {
        model: input.model,
        p_s: input.p_s.unwrap_or(defaults.p_s),
        n_0: input.n_0.unwrap_or(defaults.n_0),
        beta: input.beta.unwrap_or(defaults.beta),
        n_cells: input.n_cells.unwrap_or(defaults.n_cells),
        r_d: input.r_d.unwrap_or(defaults.r_d),
        r_e: input.r_e.unwrap_or(defaults.r_e),
        r_s: input.r_s.or(defaults.r_s),
    })
}

impl RunConfig {
    /// Defaults for `model` with the analytic outputs and no simulation.
    pub fn new(model: Model) -> Self {
        Self {
            base: SystemParams::defaults(model),
            sweep: None,
            c_th: default_c_th(),
            mc: None,
            outputs: default_outputs(),
            sop_mode: SopMode::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.base
            .validate()
            .map_err(|e| CliError::config(format!("base: {e}")))?;
        if !(self.c_th > 0.0 && self.c_th.is_finite()) {
            return Err(CliError::config(format!(
                "c_th: must be finite and > 0, got {}",
                self.c_th
            )));
        }
        if self.outputs.is_empty() {
            return Err(CliError::config("outputs: at least one output is required"));
        }
        if self.mc.is_none() {
            if let Some(o) = self.outputs.iter().find(|o| o.is_mc()) {
                return Err(CliError::config(format!(
                    "outputs: {} requires an `mc` block",
                    serde_json::to_string(o).unwrap_or_default()
                )));
            }
        }
        if let Some(mc) = &self.mc {
            mc.validate()
                .map_err(|e| CliError::config(format!("mc: {e}")))?;
        }
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
            if sweep.param == SweepParam::RS && self.base.model != Model::VanetRisRelay {
                return Err(CliError::config(
                    "sweep: r_s can only be swept for the relay model",
                ));
            }
        }
        Ok(())
    }

    /// Replaces the seed and trial count, creating an `mc` block if needed.
    pub fn override_mc(&mut self, seed: Option<u64>, trials: Option<u64>) {
        if seed.is_none() && trials.is_none() {
            return;
        }
        let mc = self.mc.get_or_insert_with(McConfig::default);
        if let Some(seed) = seed {
            mc.seed = seed;
        }
        if let Some(trials) = trials {
            mc.trials = trials;
        }
    }

    /// Parameters and threshold at one sweep value.
    pub fn point(&self, value: f64) -> (SystemParams, f64) {
        let mut params = self.base;
        let mut c_th = self.c_th;
        if let Some(sweep) = &self.sweep {
            match sweep.param {
                SweepParam::PS => params.p_s = value,
                SweepParam::N0 => params.n_0 = value,
                SweepParam::Beta => params.beta = value,
                SweepParam::NCells => params.n_cells = value as u32,
                SweepParam::RD => params.r_d = value,
                SweepParam::RE => params.r_e = value,
                SweepParam::RS => params.r_s = Some(value),
                SweepParam::CTh => c_th = value,
            }
        }
        (params, c_th)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = RunConfig::from_json(r#"{"base": {"model": "vanet_ris_relay"}}"#).unwrap();
        assert_eq!(cfg, RunConfig::new(Model::VanetRisRelay));
        assert_eq!(cfg.base.r_s, Some(10.0));
    }

    #[test]
    fn model_is_required() {
        assert!(RunConfig::from_json(r#"{"base": {}}"#).is_err());
        assert!(RunConfig::from_json(r#"{}"#).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = RunConfig::from_json(r#"{"base": {"model": "v2v_ris_ap", "ps": 3}}"#);
        assert!(err.is_err());
    }

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig::new(Model::VanetRisRelay);
        cfg.base.p_s = 0.1 + 0.2;
        cfg.sweep = Some(SweepSpec {
            param: SweepParam::RS,
            start: 5.0,
            stop: 20.0,
            steps: 7,
            scale: Scale::Log,
        });
        cfg.mc = Some(McConfig {
            seed: u64::MAX,
            ..McConfig::default()
        });
        cfg.outputs.insert(Output::McSop);
        cfg.sop_mode = SopMode::PaperLiteral;
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn output_invariants() {
        let mut cfg = RunConfig::new(Model::V2vRisAp);
        cfg.outputs.clear();
        assert!(cfg.validate().is_err());
        cfg.outputs.insert(Output::McAsc);
        assert!(cfg.validate().is_err());
        cfg.override_mc(None, Some(100));
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn sweep_points() {
        let lin = SweepSpec {
            param: SweepParam::PS,
            start: 1.0,
            stop: 50.0,
            steps: 25,
            scale: Scale::Linear,
        };
        let v = lin.values();
        assert_eq!(v.len(), 25);
        assert_eq!((v[0], v[24]), (1.0, 50.0));
        assert!((v[1] - 3.041_666_666_666_666_5).abs() < 1e-12);

        let log = SweepSpec {
            param: SweepParam::NCells,
            start: 16.0,
            stop: 64.0,
            steps: 3,
            scale: Scale::Log,
        };
        assert!(log.validate().is_ok());
        assert_eq!(log.values(), vec![16.0, 32.0, 64.0]);
    }

    #[test]
    fn sweep_invariants() {
        let ok = SweepSpec {
            param: SweepParam::PS,
            start: 1.0,
            stop: 2.0,
            steps: 2,
            scale: Scale::Linear,
        };
        assert!(ok.validate().is_ok());
        assert!(SweepSpec { start: 2.0, ..ok }.validate().is_err());
        assert!(SweepSpec { steps: 1, ..ok }.validate().is_err());
        assert!(SweepSpec {
            start: 0.0,
            scale: Scale::Log,
            ..ok
        }
        .validate()
        .is_err());
        let cells = SweepSpec {
            param: SweepParam::NCells,
            start: 1.0,
            stop: 2.0,
            steps: 3,
            scale: Scale::Linear,
        };
        assert!(cells.validate().is_err());

        let mut cfg = RunConfig::new(Model::V2vRisAp);
        cfg.sweep = Some(SweepSpec {
            param: SweepParam::RS,
            ..ok
        });
        assert!(cfg.validate().is_err());
    }
}
