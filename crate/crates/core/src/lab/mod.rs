//! Seeded Monte Carlo checks of laws of large numbers and central limit
//! theorems.
//!
//! Every simulator takes a [`SimConfig`] and returns a [`SimReport`] with one
//! row per sample size. Replication `r` always draws from its own ChaCha
//! stream `r` under the configured seed, so a report does not depend on the
//! order replications run in, and raising the replication count leaves the
//! earlier replications untouched. Within a replication the sample for a
//! smaller `n` is a prefix of the sample for a larger one.

mod edf;
mod feller;
mod kde;
mod means;

pub use edf::{
    dkw_bound, dkw_check, gc_sup_distance, EmpiricalCdf, Exponential, ReferenceDistribution, StdNormal, Uniform01,
};
pub use feller::{
    exp_spacings_stat, exp_spacings_moments, pareto_from_uniform, pareto_sim, spacings_sim,
    st_petersburg_game_reward, st_petersburg_level, st_petersburg_sim, st_petersburg_value,
    truncated_mean_stat, SpacingWeights, TruncatedMean, TruncationModel,
};
pub use kde::{kde, kde_clt_check, BandwidthRule, Kernel};
pub use means::{boosting_bound, boosting_sim, dependent_mean_sim, majority_vote_sim, weighted_mean};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// The generator behind every simulator.
pub type SimRng = ChaCha8Rng;

/// The random stream of replication `replication` under `seed`.
pub fn replication_rng(seed: u64, replication: usize) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub seed: u64,
    pub replications: usize,
    /// Strictly increasing.
    pub sample_sizes: Vec<usize>,
    /// Deviation threshold used for the deviation probabilities.
    pub epsilon: f64,
}

impl SimConfig {
    pub fn new(seed: u64, replications: usize, sample_sizes: Vec<usize>, epsilon: f64) -> Result<Self> {
        let cfg = Self {
            seed,
            replications,
            sample_sizes,
            epsilon,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidInput("replications must be at least 1".into()));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::InvalidInput("sample size grid is empty".into()));
        }
        if self.sample_sizes[0] == 0 || self.sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "sample sizes must be positive and strictly increasing: {:?}",
                self.sample_sizes
            )));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidInput(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        Ok(())
    }

    pub fn max_sample_size(&self) -> usize {
        *self.sample_sizes.last().expect("validated grid is nonempty")
    }

    pub(crate) fn require_min_size(&self, min: usize, what: &str) -> Result<()> {
        if self.sample_sizes[0] < min {
            return Err(Error::InvalidInput(format!("{what} needs sample sizes of at least {min}")));
        }
        Ok(())
    }
}

/// Summary of one sample size across replications.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub sample_size: usize,
    pub mean: f64,
    pub median: f64,
    /// Fraction of replications whose statistic deviates from the target by more than epsilon.
    pub deviation_prob: f64,
    /// The bound the deviation probability is compared with, when there is one.
    pub bound: Option<f64>,
    /// Simulator-specific quantities.
    pub extras: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub simulator: String,
    /// What the statistic converges to, when that is a fixed number.
    pub target: Option<f64>,
    pub config: SimConfig,
    pub rows: Vec<SimRow>,
    /// Run-level counters and constants.
    pub notes: BTreeMap<String, f64>,
}

pub const CSV_HEADER: &str = "sample_size,mean,median,deviation_prob,bound";

impl SimReport {
    fn new(simulator: &str, target: Option<f64>, config: &SimConfig) -> Self {
        Self {
            simulator: simulator.to_string(),
            target,
            config: config.clone(),
            rows: Vec::with_capacity(config.sample_sizes.len()),
            notes: BTreeMap::new(),
        }
    }

    /// CSV with columns `sample_size,mean,median,deviation_prob,bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let bound = r.bound.map(|b| b.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.sample_size, r.mean, r.median, r.deviation_prob, bound);
        }
        out
    }

    pub fn row(&self, sample_size: usize) -> Option<&SimRow> {
        self.rows.iter().find(|r| r.sample_size == sample_size)
    }
}

/// Runs `f(rng, replication)` for every replication, in parallel, and returns
/// the results in replication order.
pub(crate) fn replicate<T, F>(cfg: &SimConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SimRng, usize) -> T + Sync,
{
    (0..cfg.replications)
        .into_par_iter()
        .map(|r| f(&mut replication_rng(cfg.seed, r), r))
        .collect()
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Unbiased sample variance.
pub(crate) fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() as f64 - 1.0)
}

pub(crate) fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}

/// Summary row for the values of one statistic across replications.
pub(crate) fn summarize(sample_size: usize, values: &[f64], target: f64, epsilon: f64, bound: Option<f64>) -> SimRow {
    let exceed = values.iter().filter(|v| (*v - target).abs() > epsilon).count();
    SimRow {
        sample_size,
        mean: mean(values),
        median: median(values),
        deviation_prob: exceed as f64 / values.len() as f64,
        bound,
        extras: BTreeMap::new(),
    }
}

/// Column `k` of a replication-by-grid table.
pub(crate) fn column(table: &[Vec<f64>], k: usize) -> Vec<f64> {
    table.iter().map(|row| row[k]).collect()
}
