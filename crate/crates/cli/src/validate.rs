//! Analytic-versus-simulation validation.

use std::fmt;

use rayon::prelude::*;
use risec_core::channels::moments;
use risec_core::{
    asc_exact, mc_gain_sum_moments, simulate, sop, ChannelMoments, FadingKind, McEstimate, Model,
    QuadratureSpec, SampleMoments, SopMode,
};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed ASC gap in units of the simulation standard error.
    pub asc_std_errors: f64,
    /// Allowed absolute SOP gap.
    pub sop_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            asc_std_errors: 3.0,
            sop_abs: 0.02,
        }
    }
}

impl Tolerances {
    /// Fewest trials for which a binomial standard error is at most half the
    /// SOP tolerance regardless of the outage probability.
    pub fn min_conclusive_trials(&self) -> u64 {
        let n = (0.5 / (self.sop_abs / 2.0)).powi(2);
        n.ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Too few trials for the comparison to mean anything.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCheck {
    pub index: usize,
    /// Swept parameter value, if the config has a sweep.
    pub param: Option<f64>,
    pub asc_exact: f64,
    pub mc_asc: McEstimate,
    pub asc_verdict: Verdict,
    /// Analytic SOP in the configured mode.
    pub sop: f64,
    /// The other mode's analytic SOP, reported for the relay model.
    pub sop_other: Option<f64>,
    pub mc_sop: McEstimate,
    pub sop_verdict: Verdict,
}

/// Simulated moments of the relay element-gain sum against both candidate
/// constant pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentCheck {
    pub n_cells: u32,
    pub mc: SampleMoments,
    pub exact: ChannelMoments,
    pub as_printed: ChannelMoments,
}

impl MomentCheck {
    pub fn expected_variance(&self, m: &ChannelMoments) -> f64 {
        f64::from(self.n_cells) * m.variance
    }

    pub fn expected_mean(&self, m: &ChannelMoments) -> f64 {
        f64::from(self.n_cells) * m.mean
    }

    /// Distance of the simulated variance from `m`'s, in standard errors.
    pub fn variance_z(&self, m: &ChannelMoments) -> f64 {
        (self.mc.variance - self.expected_variance(m)) / self.mc.variance_std_error
    }

    pub fn mean_z(&self, m: &ChannelMoments) -> f64 {
        (self.mc.mean - self.expected_mean(m)) / self.mc.mean_std_error
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub model: Model,
    pub mode: SopMode,
    pub tolerances: Tolerances,
    pub param_name: Option<&'static str>,
    pub trials: u64,
    pub points: Vec<PointCheck>,
    pub moments: Option<MomentCheck>,
}

impl ValidationReport {
    pub fn verdict(&self) -> Verdict {
        let all = self
            .points
            .iter()
            .flat_map(|p| [p.asc_verdict, p.sop_verdict]);
        let mut verdict = Verdict::Pass;
        for v in all {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => verdict = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        verdict
    }
}

/// Runs the analytic and simulated estimators at every point of `cfg`.
pub fn validate(cfg: &RunConfig, tol: &Tolerances) -> Result<ValidationReport, CliError> {
    cfg.validate()?;
    let mc = cfg
        .mc
        .ok_or_else(|| CliError::config("validate: an `mc` block is required"))?;
    let conclusive = mc.trials >= tol.min_conclusive_trials();
    let values: Vec<Option<f64>> = match &cfg.sweep {
        Some(s) => s.values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let spec = QuadratureSpec::default();
    let other_mode = match cfg.sop_mode {
        SopMode::Corrected => SopMode::PaperLiteral,
        SopMode::PaperLiteral => SopMode::Corrected,
    };

    let results: Vec<Result<PointCheck, CliError>> = values
        .par_iter()
        .enumerate()
        .map(|(index, &value)| {
            let (params, c_th) = value.map_or((cfg.base, cfg.c_th), |v| cfg.point(v));
            let check = || -> Result<PointCheck, CliError> {
                params
                    .validate()
                    .map_err(|e| CliError::config(format!("base: {e}")))?;
                let exact =
                    asc_exact(&params, &spec).map_err(|e| CliError::metric("asc_exact", e))?;
                let run = simulate(&params, &mc, &[c_th]).map_err(|e| CliError::metric("mc", e))?;
                let sop_value = sop(&params, c_th, cfg.sop_mode);
                let mc_sop = run.sop[0];
                let judge = |ok: bool| match (ok, conclusive) {
                    (_, false) => Verdict::Inconclusive,
                    (true, true) => Verdict::Pass,
                    (false, true) => Verdict::Fail,
                };
                let asc_gap = (exact - run.difference.value).abs();
                Ok(PointCheck {
                    index,
                    param: value,
                    asc_exact: exact,
                    mc_asc: run.difference,
                    asc_verdict: judge(asc_gap <= tol.asc_std_errors * run.difference.std_error),
                    sop: sop_value,
                    sop_other: (params.model == Model::VanetRisRelay)
                        .then(|| sop(&params, c_th, other_mode)),
                    mc_sop,
                    sop_verdict: judge((sop_value - mc_sop.value).abs() <= tol.sop_abs),
                })
            };
            check().map_err(|e| match (value, &cfg.sweep) {
                (Some(value), Some(s)) => CliError::Row {
                    index,
                    param: s.param.name(),
                    value,
                    source: Box::new(e),
                },
                _ => e,
            })
        })
        .collect();
    let points = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let moment_check = if cfg.base.model == Model::VanetRisRelay {
        let n_cells = cfg.base.n_cells;
        let mc_moments = mc_gain_sum_moments(Model::VanetRisRelay, n_cells, &mc)
            .map_err(|e| CliError::metric("mc moments", e))?;
        Some(MomentCheck {
            n_cells,
            mc: mc_moments,
            exact: moments(FadingKind::TripleCascade),
            as_printed: ChannelMoments::triple_cascade_as_printed(),
        })
    } else {
        None
    };

    Ok(ValidationReport {
        model: cfg.base.model,
        mode: cfg.sop_mode,
        tolerances: *tol,
        param_name: cfg.sweep.map(|s| s.param.name()),
        trials: mc.trials,
        points,
        moments: moment_check,
    })
}

fn mode_name(mode: SopMode) -> &'static str {
    match mode {
        SopMode::Corrected => "corrected",
        SopMode::PaperLiteral => "paper-literal",
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "validation: model {:?}, sop mode {}, {} trials (asc within {} std errors, sop within {})",
            self.model,
            mode_name(self.mode),
            self.trials,
            self.tolerances.asc_std_errors,
            self.tolerances.sop_abs
        )?;
        if self.trials < self.tolerances.min_conclusive_trials() {
            writeln!(
                f,
                "warning: standard errors too large to conclude; at least {} trials needed",
                self.tolerances.min_conclusive_trials()
            )?;
        }
        for p in &self.points {
            let label = match (self.param_name, p.param) {
                (Some(name), Some(v)) => format!("point {} ({name} = {v})", p.index),
                _ => format!("point {}", p.index),
            };
            let asc_gap = p.asc_exact - p.mc_asc.value;
            writeln!(
                f,
                "{label}\n  asc  analytic {:.6}  mc {:.6} +- {:.2e}  gap {:+.2e} ({:+.2} se, rel {:+.2e})  {}",
                p.asc_exact,
                p.mc_asc.value,
                p.mc_asc.std_error,
                asc_gap,
                asc_gap / p.mc_asc.std_error,
                asc_gap / p.mc_asc.value.abs(),
                p.asc_verdict
            )?;
            let sop_gap = p.sop - p.mc_sop.value;
            writeln!(
                f,
                "  sop  analytic {:.6}  mc {:.6} +- {:.2e}  gap {:+.4}  {}",
                p.sop, p.mc_sop.value, p.mc_sop.std_error, sop_gap, p.sop_verdict
            )?;
            if let Some(other) = p.sop_other {
                let other_mode = match self.mode {
                    SopMode::Corrected => SopMode::PaperLiteral,
                    SopMode::PaperLiteral => SopMode::Corrected,
                };
                writeln!(
                    f,
                    "  sop  {} {:.6}  gap to mc {:+.4}",
                    mode_name(other_mode),
                    other,
                    other - p.mc_sop.value
                )?;
            }
        }
        if let Some(m) = &self.moments {
            writeln!(
                f,
                "element-gain sum, N = {}: mc mean {:.4} +- {:.2e}, variance {:.4} +- {:.2e}",
                m.n_cells, m.mc.mean, m.mc.mean_std_error, m.mc.variance, m.mc.variance_std_error
            )?;
            for (name, c) in [("exact", &m.exact), ("as printed", &m.as_printed)] {
                writeln!(
                    f,
                    "  {name:<10} mean {:.4} ({:+.1} se)  variance {:.4} ({:+.1} se)",
                    m.expected_mean(c),
                    m.mean_z(c),
                    m.expected_variance(c),
                    m.variance_z(c)
                )?;
            }
        }
        write!(f, "result: {}", self.verdict())
    }
}
