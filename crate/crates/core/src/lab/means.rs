use rand::Rng;
use rand_distr::StandardNormal;

use super::{column, replicate, summarize, SimConfig, SimReport, SimRow};
use crate::error::{Error, Result};

/// Precision-weighted average `sum_i w_i x_i / sum_i w_i` with `w_i = 1 / var_i`.
pub fn weighted_mean(samples: &[f64], variances: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("weighted mean of an empty sample".into()));
    }
    if samples.len() != variances.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            found: variances.len(),
        });
    }
    if let Some(v) = variances.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput(format!("variances must be positive, got {v}")));
    }
    let (num, den) = samples
        .iter()
        .zip(variances)
        .fold((0.0, 0.0), |(num, den), (x, v)| (num + x / v, den + 1.0 / v));
    Ok(num / den)
}

/// Sample means of a stationary Gaussian AR(1) sequence with unit variance
/// and autocorrelation `rho^k`.
///
/// The bound column holds the Chebyshev bound `2 / (n eps^2) sum_{k<n} rho^k`;
/// the `iid_chebyshev` extra holds `1 / (n eps^2)`.
pub fn dependent_mean_sim(rho: f64, cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidInput(format!("autocorrelation {rho} outside [0, 1)")));
    }
    let innovation_sd = (1.0 - rho * rho).sqrt();
    let table = replicate(cfg, |rng, _| {
        let mut x: f64 = rng.sample(StandardNormal);
        let mut sum = 0.0;
        let mut out = Vec::with_capacity(cfg.sample_sizes.len());
        let mut next = cfg.sample_sizes.iter().peekable();
        for t in 1..=cfg.max_sample_size() {
            if t > 1 {
                let e: f64 = rng.sample(StandardNormal);
                x = rho * x + innovation_sd * e;
            }
            sum += x;
            if next.peek() == Some(&&t) {
                out.push(sum / t as f64);
                next.next();
            }
        }
        out
    });

    let mut report = SimReport::new("dependent", Some(0.0), cfg);
    report.notes.insert("rho".into(), rho);
    let eps2 = cfg.epsilon * cfg.epsilon;
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let nf = n as f64;
        // sum_{k<n} rho^k, with rho = 0 contributing only the k = 0 term.
        let rho_sum = if rho == 0.0 { 1.0 } else { (1.0 - rho.powi(n as i32)) / (1.0 - rho) };
        let bound = 2.0 / (nf * eps2) * rho_sum;
        let mut row = summarize(n, &column(&table, k), 0.0, cfg.epsilon, Some(bound));
        row.extras.insert("iid_chebyshev".into(), 1.0 / (nf * eps2));
        report.rows.push(row);
    }
    Ok(report)
}

fn check_vote_margin(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidInput(format!("vote margin {delta} outside (0, 0.5)")));
    }
    Ok(())
}

/// Smallest `n` with `n >= ln(1 / eps) / (2 delta^2)`: that many independent
/// votes, each correct with probability `1/2 + delta`, give a correct
/// majority with probability at least `1 - eps`.
pub fn boosting_bound(delta: f64, eps: f64) -> Result<u64> {
    check_vote_margin(delta)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("failure probability {eps} outside (0, 1)")));
    }
    Ok(((1.0 / eps).ln() / (2.0 * delta * delta)).ceil() as u64)
}

/// Whether a strict majority of `n` votes is correct. Ties fail.
fn majority_correct<R: Rng>(rng: &mut R, n: usize, p: f64) -> bool {
    let correct = (0..n).filter(|_| rng.random::<f64>() < p).count();
    2 * correct > n
}

/// Fraction of replications in which a strict majority of `n` votes, each
/// correct with probability `1/2 + delta`, is correct.
pub fn majority_vote_sim(delta: f64, n: usize, cfg: &SimConfig) -> Result<f64> {
    check_vote_margin(delta)?;
    if n == 0 {
        return Err(Error::InvalidInput("majority vote needs at least one vote".into()));
    }
    if cfg.replications == 0 {
        return Err(Error::InvalidInput("replications must be at least 1".into()));
    }
    let hits = replicate(cfg, |rng, _| majority_correct(rng, n, 0.5 + delta));
    Ok(hits.iter().filter(|&&h| h).count() as f64 / cfg.replications as f64)
}

/// Majority-vote success rates over the sample size grid.
///
/// `mean` is the success rate, `deviation_prob` the failure rate, and the
/// bound column the Hoeffding bound `exp(-2 n delta^2)` on the failure rate.
/// Each grid point uses its own votes.
pub fn boosting_sim(delta: f64, cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    check_vote_margin(delta)?;
    let p = 0.5 + delta;
    let table = replicate(cfg, |rng, _| {
        cfg.sample_sizes
            .iter()
            .map(|&n| if majority_correct(rng, n, p) { 1.0 } else { 0.0 })
            .collect::<Vec<_>>()
    });
    let mut report = SimReport::new("boosting", Some(1.0), cfg);
    report.notes.insert("delta".into(), delta);
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let wins = column(&table, k);
        let rate = super::mean(&wins);
        report.rows.push(SimRow {
            sample_size: n,
            mean: rate,
            median: super::median(&wins),
            deviation_prob: 1.0 - rate,
            bound: Some((-2.0 * n as f64 * delta * delta).exp()),
            extras: Default::default(),
        });
    }
    Ok(report)
}
