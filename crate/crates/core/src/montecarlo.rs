//! Direct simulation of both topologies, used as ground truth for the
//! analytic formulas.
//!
//! Every trial draws from its own substreams of the root seed, keyed by the
//! trial index and the role of the draw (source hop, destination hop,
//! eavesdropper hop). Trials are evaluated in parallel and folded into the
//! estimators sequentially in trial order, so results are bit-identical for
//! any batch size and any thread count.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{sample, sample_rayleigh, ChannelStream, FadingKind};
use crate::error::{Error, Result};
use crate::secrecy::{snr_scale, Link, Model, SystemParams};

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x2020_0611;
pub const DEFAULT_BATCH: usize = 1024;

/// Trials buffered between sequential reductions.
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Trials per parallel work item; has no effect on the results.
    pub batch: usize,
    /// Relay topology only: destination and eavesdropper see the same
    /// source-to-surface fading in a trial.
    pub shared_source_channel: bool,
    /// Diagnostic: the eavesdropper reuses the destination's small-scale
    /// fading draws, leaving only path loss to differ between the links.
    pub mirror_links: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            batch: DEFAULT_BATCH,
            shared_source_channel: true,
            mirror_links: false,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::invalid("trials", "must be >= 1"));
        }
        if self.batch < 1 {
            return Err(Error::invalid("batch", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Sample mean and variance of a scalar, with standard errors for both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleMoments {
    pub mean: f64,
    pub variance: f64,
    pub mean_std_error: f64,
    pub variance_std_error: f64,
    pub trials: u64,
}

/// Welford accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Running {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn estimate(&self) -> McEstimate {
        let std_error = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        McEstimate {
            value: self.mean,
            std_error,
            trials: self.n,
        }
    }
}

fn binomial(hits: u64, trials: u64) -> McEstimate {
    let p = hits as f64 / trials as f64;
    McEstimate {
        value: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    }
}

// Substream roles within a trial.
const SOURCE: u64 = 0;
const DESTINATION: u64 = 1;
const EAVESDROPPER: u64 = 2;
const EAVESDROPPER_SOURCE: u64 = 3;

fn substream(root: &ChannelStream, trial: u64, role: u64) -> ChannelStream {
    root.split(trial.wrapping_mul(4).wrapping_add(role))
}

/// Instantaneous `(gamma_D, gamma_E)` for one trial.
pub fn mc_snr_pair(
    params: &SystemParams,
    cfg: &McConfig,
    root: &ChannelStream,
    trial: u64,
) -> (f64, f64) {
    let (sum_d, sum_e) = gain_sums(params.model, params.n_cells, cfg, root, trial);
    (
        snr_scale(params, Link::Destination) * sum_d,
        snr_scale(params, Link::Eavesdropper) * sum_e,
    )
}

/// Element-gain sums `(sum_n g_D,n, sum_n g_E,n)` of one trial, including the
/// source-hop factor for the relay topology.
fn gain_sums(
    model: Model,
    n_cells: u32,
    cfg: &McConfig,
    root: &ChannelStream,
    trial: u64,
) -> (f64, f64) {
    let mut dest = substream(root, trial, DESTINATION);
    let eve_role = if cfg.mirror_links {
        DESTINATION
    } else {
        EAVESDROPPER
    };
    let mut eve = substream(root, trial, eve_role);
    let (mut sum_d, mut sum_e) = (0.0, 0.0);

    match model {
        Model::V2vRisAp => {
            for _ in 0..n_cells {
                sum_d += sample(FadingKind::DoubleRayleigh, &mut dest);
                sum_e += sample(FadingKind::DoubleRayleigh, &mut eve);
            }
        }
        Model::VanetRisRelay => {
            let mut source = substream(root, trial, SOURCE);
            let separate_source = !cfg.shared_source_channel && !cfg.mirror_links;
            let mut eve_source = substream(root, trial, EAVESDROPPER_SOURCE);
            for _ in 0..n_cells {
                let g_s = sample_rayleigh(&mut source);
                let g_s_eve = if separate_source {
                    sample_rayleigh(&mut eve_source)
                } else {
                    g_s
                };
                sum_d += g_s * sample(FadingKind::DoubleRayleigh, &mut dest);
                sum_e += g_s_eve * sample(FadingKind::DoubleRayleigh, &mut eve);
            }
        }
    }
    (sum_d, sum_e)
}

/// Evaluates `per_trial` for every trial index in parallel and hands the
/// results to `fold` in index order.
fn for_each_trial<T, F, G>(cfg: &McConfig, per_trial: F, mut fold: G)
where
    T: Send + Copy + Default,
    F: Fn(u64) -> T + Sync,
    G: FnMut(T),
{
    let mut buffer = vec![T::default(); CHUNK.min(cfg.trials as usize)];
    let mut start = 0u64;
    while start < cfg.trials {
        let len = CHUNK.min((cfg.trials - start) as usize);
        let slots = &mut buffer[..len];
        slots
            .par_chunks_mut(cfg.batch)
            .enumerate()
            .for_each(|(chunk_index, chunk)| {
                let base = start + (chunk_index * cfg.batch) as u64;
                for (offset, slot) in chunk.iter_mut().enumerate() {
                    *slot = per_trial(base + offset as u64);
                }
            });
        slots.iter().copied().for_each(&mut fold);
        start += len as u64;
    }
}

/// Secrecy-capacity estimates from one simulation pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRun {
    /// Mean of `log2(1 + gamma_D) - log2(1 + gamma_E)`.
    pub difference: McEstimate,
    /// Mean of `max(log2((1 + gamma_D) / (1 + gamma_E)), 0)`.
    pub positive_part: McEstimate,
    /// Outage estimate per requested threshold, in input order.
    pub sop: Vec<McEstimate>,
}

/// Simulates ASC (both estimators) and SOP at every threshold from the same
/// trials, so that comparisons across thresholds share random numbers.
pub fn simulate(params: &SystemParams, cfg: &McConfig, thresholds: &[f64]) -> Result<McRun> {
    params.validate()?;
    cfg.validate()?;
    if let Some(&bad) = thresholds.iter().find(|&&c| !(c > 0.0)) {
        return Err(Error::invalid("c_th", format!("must be > 0, got {bad}")));
    }
    let root = ChannelStream::new(cfg.seed);
    let mut difference = Running::default();
    let mut positive = Running::default();
    let mut outages = vec![0u64; thresholds.len()];

    for_each_trial(
        cfg,
        |trial| {
            let (gamma_d, gamma_e) = mc_snr_pair(params, cfg, &root, trial);
            (gamma_d.ln_1p() - gamma_e.ln_1p()) / LN_2
        },
        |diff: f64| {
            let secrecy = diff.max(0.0);
            difference.push(diff);
            positive.push(secrecy);
            for (count, &c_th) in outages.iter_mut().zip(thresholds) {
                if secrecy < c_th {
                    *count += 1;
                }
            }
        },
    );

    Ok(McRun {
        difference: difference.estimate(),
        positive_part: positive.estimate(),
        sop: outages
            .into_iter()
            .map(|hits| binomial(hits, cfg.trials))
            .collect(),
    })
}

/// `(difference, positive_part)` ASC estimators.
pub fn mc_asc(params: &SystemParams, cfg: &McConfig) -> Result<(McEstimate, McEstimate)> {
    let run = simulate(params, cfg, &[])?;
    Ok((run.difference, run.positive_part))
}

/// Fraction of trials whose secrecy capacity falls below `c_th`.
pub fn mc_sop(params: &SystemParams, c_th: f64, cfg: &McConfig) -> Result<McEstimate> {
    let run = simulate(params, cfg, &[c_th])?;
    Ok(run.sop[0])
}

/// Moments of the destination element-gain sum `sum_n g_n`, for checking the
/// per-element mean and variance constants.
pub fn mc_gain_sum_moments(model: Model, n_cells: u32, cfg: &McConfig) -> Result<SampleMoments> {
    cfg.validate()?;
    if n_cells < 1 {
        return Err(Error::invalid("n_cells", "must be >= 1"));
    }
    let root = ChannelStream::new(cfg.seed);
    let mut sums = Vec::with_capacity(cfg.trials as usize);
    for_each_trial(
        cfg,
        |trial| gain_sums(model, n_cells, cfg, &root, trial).0,
        |s| sums.push(s),
    );

    let n = sums.len() as f64;
    let mean = sums.iter().sum::<f64>() / n;
    let (m2, m4) = sums.iter().fold((0.0, 0.0), |(m2, m4), &x| {
        let d2 = (x - mean) * (x - mean);
        (m2 + d2, m4 + d2 * d2)
    });
    let denom = (n - 1.0).max(1.0);
    let variance = m2 / denom;
    let central4 = m4 / n;
    Ok(SampleMoments {
        mean,
        variance,
        mean_std_error: (variance / n).sqrt(),
        variance_std_error: ((central4 - variance * variance).max(0.0) / n).sqrt(),
        trials: cfg.trials,
    })
}
