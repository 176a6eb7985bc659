//! Point evaluation and sweeps.

use std::fmt::Write as _;

use rayon::prelude::*;
use risec_core::{
    asc_approx, asc_exact, simulate, sop, McConfig, McEstimate, McRun, QuadratureSpec, SopMode,
    SystemParams,
};

use crate::config::{Output, RunConfig, SweepParam};
use crate::error::CliError;

/// Requested metrics at one parameter point. Unrequested entries are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointMetrics {
    pub asc_exact: Option<f64>,
    pub asc_approx: Option<f64>,
    pub sop_corrected: Option<f64>,
    pub sop_paper_literal: Option<f64>,
    /// Mean of the signed capacity difference.
    pub mc_asc: Option<McEstimate>,
    /// Mean of the capacity difference clipped at zero.
    pub mc_asc_positive: Option<McEstimate>,
    pub mc_sop: Option<McEstimate>,
}

/// One CSV column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    AscExact,
    AscApprox,
    SopCorrected,
    SopPaperLiteral,
    McAsc,
    McAscPositive,
    McSop,
    McAscStdError,
    McAscPositiveStdError,
    McSopStdError,
}

impl Column {
    pub fn header(self) -> &'static str {
        match self {
            Column::AscExact => "asc_exact",
            Column::AscApprox => "asc_approx",
            Column::SopCorrected => "sop_corrected",
            Column::SopPaperLiteral => "sop_paper_literal",
            Column::McAsc => "mc_asc",
            Column::McAscPositive => "mc_asc_positive",
            Column::McSop => "mc_sop",
            Column::McAscStdError => "mc_asc_std_error",
            Column::McAscPositiveStdError => "mc_asc_positive_std_error",
            Column::McSopStdError => "mc_sop_std_error",
        }
    }
}

/// Metric columns followed by the standard-error columns of the simulated ones.
pub fn columns(cfg: &RunConfig) -> Vec<Column> {
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for output in &cfg.outputs {
        match output {
            Output::AscExact => values.push(Column::AscExact),
            Output::AscApprox => values.push(Column::AscApprox),
            Output::SopCorrected => values.push(Column::SopCorrected),
            Output::SopPaperLiteral => values.push(Column::SopPaperLiteral),
            Output::McAsc => {
                values.extend([Column::McAsc, Column::McAscPositive]);
                errors.extend([Column::McAscStdError, Column::McAscPositiveStdError]);
            }
            Output::McSop => {
                values.push(Column::McSop);
                errors.push(Column::McSopStdError);
            }
        }
    }
    values.extend(errors);
    values
}

impl PointMetrics {
    pub fn get(&self, column: Column) -> Option<f64> {
        match column {
            Column::AscExact => self.asc_exact,
            Column::AscApprox => self.asc_approx,
            Column::SopCorrected => self.sop_corrected,
            Column::SopPaperLiteral => self.sop_paper_literal,
            Column::McAsc => self.mc_asc.map(|e| e.value),
            Column::McAscPositive => self.mc_asc_positive.map(|e| e.value),
            Column::McSop => self.mc_sop.map(|e| e.value),
            Column::McAscStdError => self.mc_asc.map(|e| e.std_error),
            Column::McAscPositiveStdError => self.mc_asc_positive.map(|e| e.std_error),
            Column::McSopStdError => self.mc_sop.map(|e| e.std_error),
        }
    }
}

fn wants(cfg: &RunConfig, output: Output) -> bool {
    cfg.outputs.contains(&output)
}

/// Evaluates the requested metrics at `params`. `mc_run`, when given, is a
/// simulation of these parameters whose first threshold is `c_th`.
fn evaluate(
    cfg: &RunConfig,
    params: &SystemParams,
    c_th: f64,
    mc_run: Option<McRun>,
) -> Result<PointMetrics, CliError> {
    params
        .validate()
        .map_err(|e| CliError::config(format!("base: {e}")))?;
    let mut m = PointMetrics::default();
    if wants(cfg, Output::AscExact) {
        let spec = QuadratureSpec::default();
        m.asc_exact = Some(asc_exact(params, &spec).map_err(|e| CliError::metric("asc_exact", e))?);
    }
    if wants(cfg, Output::AscApprox) {
        m.asc_approx = Some(asc_approx(params));
    }
    if wants(cfg, Output::SopCorrected) {
        m.sop_corrected = Some(sop(params, c_th, SopMode::Corrected));
    }
    if wants(cfg, Output::SopPaperLiteral) {
        m.sop_paper_literal = Some(sop(params, c_th, SopMode::PaperLiteral));
    }
    if wants(cfg, Output::McAsc) || wants(cfg, Output::McSop) {
        let run = match mc_run {
            Some(run) => run,
            None => run_mc(params, mc_config(cfg)?, &[c_th])?,
        };
        if wants(cfg, Output::McAsc) {
            m.mc_asc = Some(run.difference);
            m.mc_asc_positive = Some(run.positive_part);
        }
        if wants(cfg, Output::McSop) {
            m.mc_sop = Some(run.sop[0]);
        }
    }
    Ok(m)
}

fn mc_config(cfg: &RunConfig) -> Result<&McConfig, CliError> {
    cfg.mc
        .as_ref()
        .ok_or_else(|| CliError::config("mc: simulation outputs require an `mc` block"))
}

fn run_mc(params: &SystemParams, mc: &McConfig, thresholds: &[f64]) -> Result<McRun, CliError> {
    simulate(params, mc, thresholds).map_err(|e| CliError::metric("mc", e))
}

/// Evaluates every requested metric at the base point.
pub fn run_point(cfg: &RunConfig) -> Result<PointMetrics, CliError> {
    cfg.validate()?;
    if cfg.sweep.is_some() {
        return Err(CliError::config(
            "run_point: config has a sweep; use run_sweep",
        ));
    }
    evaluate(cfg, &cfg.base, cfg.c_th, None)
}

/// One evaluated sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metrics: PointMetrics,
}

/// Evaluates every sweep point, in sweep order. Points run in parallel;
/// results do not depend on the schedule.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let sweep = cfg
        .sweep
        .ok_or_else(|| CliError::config("run_sweep: config has no `sweep` block"))?;
    let values = sweep.values();
    let wants_mc = cfg.outputs.iter().any(|o| o.is_mc());

    // Threshold sweeps simulate the base point once and count outages at
    // every threshold from the same trials.
    let shared_run = if wants_mc && sweep.param == SweepParam::CTh {
        Some(run_mc(&cfg.base, mc_config(cfg)?, &values)?)
    } else {
        None
    };

    let results: Vec<Result<SweepRow, CliError>> = values
        .par_iter()
        .enumerate()
        .map(|(index, &value)| {
            let (params, c_th) = cfg.point(value);
            let mc_run = shared_run.as_ref().map(|run| McRun {
                sop: vec![run.sop[index]],
                ..run.clone()
            });
            evaluate(cfg, &params, c_th, mc_run)
                .map(|metrics| SweepRow { value, metrics })
                .map_err(|e| CliError::Row {
                    index,
                    param: sweep.param.name(),
                    value,
                    source: Box::new(e),
                })
        })
        .collect();
    // The first failing row in sweep order, whatever the schedule.
    results.into_iter().collect()
}

/// Round-trip formatting: 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with a header; the first column is the swept parameter, if any.
pub fn to_csv(cfg: &RunConfig, rows: &[(Option<f64>, &PointMetrics)]) -> String {
    let cols = columns(cfg);
    let mut out = String::new();
    let mut header: Vec<&str> = Vec::new();
    if let Some(sweep) = &cfg.sweep {
        header.push(sweep.param.name());
    }
    header.extend(cols.iter().map(|c| c.header()));
    out.push_str(&header.join(","));
    out.push('\n');
    for (param, metrics) in rows {
        let mut cells: Vec<String> = param.iter().map(|&v| format_number(v)).collect();
        cells.extend(
            cols.iter()
                .map(|&c| metrics.get(c).map(format_number).unwrap_or_default()),
        );
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn sweep_csv(cfg: &RunConfig, rows: &[SweepRow]) -> String {
    let rows: Vec<_> = rows.iter().map(|r| (Some(r.value), &r.metrics)).collect();
    to_csv(cfg, &rows)
}

pub fn point_csv(cfg: &RunConfig, metrics: &PointMetrics) -> String {
    to_csv(cfg, &[(None, metrics)])
}

/// Aligned plain-text table of a single point.
pub fn point_table(cfg: &RunConfig, metrics: &PointMetrics) -> String {
    let p = &cfg.base;
    let mut out = String::new();
    let _ = write!(
        out,
        "model {:?}  p_s {}  n_0 {}  beta {}  n_cells {}  r_d {}  r_e {}",
        p.model, p.p_s, p.n_0, p.beta, p.n_cells, p.r_d, p.r_e
    );
    if let Some(r_s) = p.r_s {
        let _ = write!(out, "  r_s {r_s}");
    }
    let _ = writeln!(out, "  c_th {}", cfg.c_th);
    if let Some(mc) = &cfg.mc {
        if cfg.outputs.iter().any(|o| o.is_mc()) {
            let _ = writeln!(out, "mc trials {}  seed {}", mc.trials, mc.seed);
        }
    }
    let _ = writeln!(out, "{:<20} {:>24} {:>14}", "metric", "value", "std_error");
    let row = |out: &mut String, name: &str, v: f64, se: Option<f64>| {
        let se = se.map(|s| format!("{s:.3e}")).unwrap_or_default();
        let _ = writeln!(out, "{name:<20} {v:>24.16} {se:>14}");
    };
    for (name, value) in [
        ("asc_exact", metrics.asc_exact),
        ("asc_approx", metrics.asc_approx),
        ("sop_corrected", metrics.sop_corrected),
        ("sop_paper_literal", metrics.sop_paper_literal),
    ] {
        if let Some(v) = value {
            row(&mut out, name, v, None);
        }
    }
    for (name, est) in [
        ("mc_asc", metrics.mc_asc),
        ("mc_asc_positive", metrics.mc_asc_positive),
        ("mc_sop", metrics.mc_sop),
    ] {
        if let Some(e) = est {
            row(&mut out, name, e.value, Some(e.std_error));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Scale, SweepSpec};
    use risec_core::Model;

    #[test]
    fn approx_at_defaults() {
        let mut cfg = RunConfig::new(Model::V2vRisAp);
        cfg.outputs = [Output::AscApprox].into();
        let m = run_point(&cfg).unwrap();
        assert!((m.asc_approx.unwrap() - 1.859_370_813_397_091_7).abs() < 1e-12);
        let csv = point_csv(&cfg, &m);
        assert_eq!(csv, "asc_approx\n1.8593708133970916e0\n");
    }

    #[test]
    fn column_layout() {
        let mut cfg = RunConfig::new(Model::V2vRisAp);
        cfg.outputs = [Output::McSop, Output::AscExact, Output::McAsc].into();
        cfg.mc = Some(McConfig::default());
        let headers: Vec<_> = columns(&cfg).iter().map(|c| c.header()).collect();
        assert_eq!(
            headers,
            [
                "asc_exact",
                "mc_asc",
                "mc_asc_positive",
                "mc_sop",
                "mc_asc_std_error",
                "mc_asc_positive_std_error",
                "mc_sop_std_error"
            ]
        );
    }

    #[test]
    fn threshold_sweep_shares_trials() {
        let mut cfg = RunConfig::new(Model::V2vRisAp);
        cfg.outputs = [Output::McSop].into();
        cfg.mc = Some(McConfig {
            trials: 4000,
            ..McConfig::default()
        });
        cfg.sweep = Some(SweepSpec {
            param: SweepParam::CTh,
            start: 0.5,
            stop: 2.5,
            steps: 5,
            scale: Scale::Linear,
        });
        let rows = run_sweep(&cfg).unwrap();
        for (row, &c_th) in rows.iter().zip(&[0.5, 1.0, 1.5, 2.0, 2.5]) {
            let mut point = cfg.clone();
            point.sweep = None;
            point.c_th = c_th;
            assert_eq!(row.metrics, run_point(&point).unwrap());
        }
    }

    #[test]
    fn failing_row_is_reported() {
        let mut cfg = RunConfig::new(Model::V2vRisAp);
        cfg.outputs = [Output::AscApprox].into();
        cfg.sweep = Some(SweepSpec {
            param: SweepParam::PS,
            start: -1.0,
            stop: 1.0,
            steps: 3,
            scale: Scale::Linear,
        });
        match run_sweep(&cfg) {
            Err(CliError::Row { index, .. }) => assert_eq!(index, 0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
