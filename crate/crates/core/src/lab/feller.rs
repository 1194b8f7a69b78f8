//! Weak laws for heavy-tailed and non-identically weighted sums: truncated
//! centering, the St. Petersburg game, Pareto sums and weighted exponential
//! order statistics.

use rand::{Rng, RngCore};
use rand_distr::{Exp1, OpenClosed01};
use serde::Serialize;

use super::{column, replicate, summarize, SimConfig, SimReport, SimRng};
use crate::error::{Error, Result};

/// Distributions with a closed-form truncated mean `E[X 1(|X| <= v)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TruncationModel {
    /// `P(X = 2^k) = 2^-k` for `k >= 1`.
    StPetersburg,
    /// `P(X > x) = 1 / x` for `x > 1`.
    Pareto,
}

impl TruncationModel {
    /// `E[X 1(|X| <= v)]`.
    pub fn truncated_mean(&self, v: f64) -> f64 {
        match self {
            // Each level 2^k <= v contributes 2^k * 2^-k = 1.
            TruncationModel::StPetersburg => (1..=63)
                .take_while(|&k| 2f64.powi(k) <= v)
                .map(|k| 2f64.powi(k) * 2f64.powi(-k))
                .sum(),
            TruncationModel::Pareto => {
                if v > 1.0 {
                    v.ln()
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedMean {
    /// `S_n`, the plain sum.
    pub sum: f64,
    /// `B_n`, the centering.
    pub centering: f64,
    /// `(S_n - B_n) / v_n`.
    pub normalized: f64,
}

/// Centers the sum of `samples` by the truncated mean at level `v_n`.
///
/// With a model, `B_n = n E[X 1(|X| <= v_n)]` is exact; without one it is the
/// plug-in `sum_i x_i 1(|x_i| <= v_n)`.
pub fn truncated_mean_stat(samples: &[f64], v_n: f64, model: Option<TruncationModel>) -> Result<TruncatedMean> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("truncated mean of an empty sample".into()));
    }
    if !(v_n > 0.0) {
        return Err(Error::InvalidInput(format!("truncation level must be positive, got {v_n}")));
    }
    let sum: f64 = samples.iter().sum();
    let centering = match model {
        Some(m) => samples.len() as f64 * m.truncated_mean(v_n),
        None => samples.iter().filter(|x| x.abs() <= v_n).sum(),
    };
    Ok(TruncatedMean {
        sum,
        centering,
        normalized: (sum - centering) / v_n,
    })
}

const ST_PETERSBURG_MAX_LEVEL: u32 = 63;

/// Draws the level `k >= 1` with `P(k) = 2^-k`, capped at 63.
///
/// Returns the level and whether the cap was hit.
pub fn st_petersburg_level<R: RngCore>(rng: &mut R) -> (u32, bool) {
    let level = rng.next_u64().trailing_zeros() + 1;
    if level > ST_PETERSBURG_MAX_LEVEL {
        (ST_PETERSBURG_MAX_LEVEL, true)
    } else {
        (level, false)
    }
}

/// The payoff `2^k` at level `k`, distributed as `P(X = 2^k) = 2^-k`.
pub fn st_petersburg_value(level: u32) -> u64 {
    1u64 << level
}

/// The game's reward `2^(n-1)` when the first head shows on toss `n`.
///
/// This is half of [`st_petersburg_value`] at the same level, so its fair
/// stake is `(n log2 n) / 2`.
pub fn st_petersburg_game_reward(tosses: u32) -> u64 {
    1u64 << (tosses - 1)
}

/// `S_n / (n log2 n)` for sums of St. Petersburg payoffs, target 1.
pub fn st_petersburg_sim(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    cfg.require_min_size(2, "the St. Petersburg normalization")?;
    let runs = replicate(cfg, |rng, _| {
        let mut sum: u128 = 0;
        let mut caps = 0u64;
        let mut ratios = Vec::with_capacity(cfg.sample_sizes.len());
        let mut drawn = 0;
        for &n in &cfg.sample_sizes {
            for _ in drawn..n {
                let (level, capped) = st_petersburg_level(rng);
                sum += u128::from(st_petersburg_value(level));
                caps += u64::from(capped);
            }
            drawn = n;
            let nf = n as f64;
            ratios.push(sum as f64 / (nf * nf.log2()));
        }
        (ratios, caps)
    });
    let table: Vec<Vec<f64>> = runs.iter().map(|(r, _)| r.clone()).collect();
    let cap_hits: u64 = runs.iter().map(|(_, c)| c).sum();

    let mut report = SimReport::new("stpetersburg", Some(1.0), cfg);
    report.notes.insert("cap_hits".into(), cap_hits as f64);
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let nf = n as f64;
        let fee = nf * nf.log2();
        let mut row = summarize(n, &column(&table, k), 1.0, cfg.epsilon, None);
        // n P(X > v_n) = n 2^-floor(log2 v_n)
        row.extras.insert("tail_condition".into(), nf * 2f64.powi(-(fee.log2().floor() as i32)));
        report.rows.push(row);
    }
    Ok(report)
}

/// Inverse-transform draw `1 / u` of a Pareto variable with shape 1.
pub fn pareto_from_uniform(u: f64) -> f64 {
    1.0 / u
}

/// `S_n / (n ln n)` for sums of shape-1 Pareto variables, target 1.
pub fn pareto_sim(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    cfg.require_min_size(3, "the Pareto normalization")?;
    let table = replicate(cfg, |rng, _| {
        let mut sum = 0.0;
        let mut drawn = 0;
        cfg.sample_sizes
            .iter()
            .map(|&n| {
                for _ in drawn..n {
                    let u: f64 = rng.sample(OpenClosed01);
                    sum += pareto_from_uniform(u);
                }
                drawn = n;
                let nf = n as f64;
                sum / (nf * nf.ln())
            })
            .collect::<Vec<_>>()
    });
    let mut report = SimReport::new("pareto", Some(1.0), cfg);
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let mut row = summarize(n, &column(&table, k), 1.0, cfg.epsilon, None);
        // n P(X > n ln n) = 1 / ln n
        row.extras.insert("tail_condition".into(), 1.0 / (n as f64).ln());
        report.rows.push(row);
    }
    Ok(report)
}

/// Weights `a_1..a_n` for the order-statistic sum `sum_i a_i X_(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpacingWeights {
    /// `a_i = 1`: the plain sum.
    Ones,
    /// `a_i = i / n`.
    Rank,
}

impl SpacingWeights {
    pub fn weights(&self, n: usize) -> Vec<f64> {
        match self {
            SpacingWeights::Ones => vec![1.0; n],
            SpacingWeights::Rank => (1..=n).map(|i| i as f64 / n as f64).collect(),
        }
    }
}

/// Exact mean and variance of `T_n = sum_i a_i X_(i)` for a standard
/// exponential sample.
///
/// Writing `X_(k) = sum_{j<=k} Y_j / (n - j + 1)` with iid standard
/// exponential `Y_j` gives `T_n = sum_j A_j Y_j / (n - j + 1)` with tail sums
/// `A_j = sum_{i>=j} a_i`.
pub fn exp_spacings_moments(a: &[f64]) -> (f64, f64) {
    let n = a.len();
    let mut tail = 0.0;
    let mut mean = 0.0;
    let mut var = 0.0;
    for j in (0..n).rev() {
        tail += a[j];
        let c = tail / (n - j) as f64;
        mean += c;
        var += c * c;
    }
    (mean, var)
}

/// `(T_n, E T_n)` for weights `a` and an exponential sample (sorted internally).
pub fn exp_spacings_stat(a: &[f64], samples: &[f64]) -> Result<(f64, f64)> {
    if a.len() != samples.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: samples.len(),
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let t = a.iter().zip(&sorted).map(|(w, x)| w * x).sum();
    Ok((t, exp_spacings_moments(a).0))
}

fn exp_sample(rng: &mut SimRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect()
}

/// Weighted sums of exponential order statistics, centered by their exact mean.
///
/// The statistic is `(T_n - E T_n) / v_n` with `v_n = sqrt(n ln n)`; the bound
/// column is the Chebyshev bound `var(T_n) / (eps v_n)^2`.
pub fn spacings_sim(weights: SpacingWeights, cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    cfg.require_min_size(2, "the spacings normalization")?;
    let table = replicate(cfg, |rng, _| {
        let sample = exp_sample(rng, cfg.max_sample_size());
        cfg.sample_sizes
            .iter()
            .map(|&n| {
                let (t, et) = exp_spacings_stat(&weights.weights(n), &sample[..n]).expect("lengths match");
                (t - et) / (n as f64 * (n as f64).ln()).sqrt()
            })
            .collect::<Vec<_>>()
    });
    let mut report = SimReport::new("spacings", Some(0.0), cfg);
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let (mean, var) = exp_spacings_moments(&weights.weights(n));
        let v2 = n as f64 * (n as f64).ln();
        let bound = var / (cfg.epsilon * cfg.epsilon * v2);
        let mut row = summarize(n, &column(&table, k), 0.0, cfg.epsilon, Some(bound));
        row.extras.insert("expected_sum".into(), mean);
        row.extras.insert("variance".into(), var);
        report.rows.push(row);
    }
    Ok(report)
}
