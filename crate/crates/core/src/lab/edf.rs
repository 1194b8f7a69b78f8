//! Empirical distribution functions, the Kolmogorov-Smirnov sup distance and
//! Monte Carlo checks of the Dvoretzky-Kiefer-Wolfowitz inequality.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use super::{column, replicate, summarize, SimConfig, SimReport, SimRng};
use crate::error::{Error, Result};

/// A continuous reference law: CDF, density and sampler.
pub trait ReferenceDistribution: Sync {
    fn name(&self) -> &'static str;
    fn cdf(&self, x: f64) -> f64;
    fn pdf(&self, x: f64) -> f64;
    fn sample(&self, rng: &mut SimRng) -> f64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Uniform01;

impl ReferenceDistribution for Uniform01 {
    fn name(&self) -> &'static str {
        "uniform"
    }
    fn cdf(&self, x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }
    fn pdf(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            1.0
        } else {
            0.0
        }
    }
    fn sample(&self, rng: &mut SimRng) -> f64 {
        rng.random()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StdNormal;

impl ReferenceDistribution for StdNormal {
    fn name(&self) -> &'static str {
        "normal"
    }
    fn cdf(&self, x: f64) -> f64 {
        Normal::standard().cdf(x)
    }
    fn pdf(&self, x: f64) -> f64 {
        Normal::standard().pdf(x)
    }
    fn sample(&self, rng: &mut SimRng) -> f64 {
        rng.sample(StandardNormal)
    }
}

/// Exponential with mean 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exponential;

impl ReferenceDistribution for Exponential {
    fn name(&self) -> &'static str {
        "exponential"
    }
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-x).exp_m1()
        }
    }
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            (-x).exp()
        }
    }
    fn sample(&self, rng: &mut SimRng) -> f64 {
        rng.sample(Exp1)
    }
}

/// Right-continuous step function `F_n(x) = #{i : x_i <= x} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("empirical CDF of an empty sample".into()));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("samples must be finite".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Left limit `F_n(x-) = #{i : x_i < x} / n`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.len() as f64
    }

    /// Distinct jump locations and the level just after each.
    pub fn steps(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.len() as f64;
        let mut points = Vec::new();
        let mut levels = Vec::new();
        for (i, &x) in self.sorted.iter().enumerate() {
            if self.sorted.get(i + 1) != Some(&x) {
                points.push(x);
                levels.push((i + 1) as f64 / n);
            }
        }
        (points, levels)
    }

    /// `sup_x |F_n(x) - F(x)|` for a continuous `F`, taken over both sides of every jump.
    pub fn sup_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.len() as f64;
        let mut d = 0.0f64;
        let mut i = 0;
        while i < self.sorted.len() {
            let x = self.sorted[i];
            let mut j = i + 1;
            while j < self.sorted.len() && self.sorted[j] == x {
                j += 1;
            }
            let f = cdf(x);
            d = d.max((j as f64 / n - f).abs()).max((i as f64 / n - f).abs());
            i = j;
        }
        d
    }
}

/// Kolmogorov-Smirnov distance between the sample's EDF and `cdf`.
pub fn gc_sup_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    Ok(EmpiricalCdf::new(samples)?.sup_distance(cdf))
}

/// `2 exp(-2 n eps^2)`.
pub fn dkw_bound(n: usize, eps: f64) -> f64 {
    2.0 * (-2.0 * n as f64 * eps * eps).exp()
}

/// Monte Carlo check of `P(sup |F_n - F| > eps) <= 2 exp(-2 n eps^2)`.
///
/// Rows summarize the sup distance; `deviation_prob` is the exceedance rate
/// and `bound` the DKW bound. The `mc_tolerance` extra is three binomial
/// standard errors at the bound and `violation` is 1 when the exceedance rate
/// is above `bound + mc_tolerance`.
pub fn dkw_check(cfg: &SimConfig, dist: &dyn ReferenceDistribution) -> Result<SimReport> {
    cfg.validate()?;
    let table = replicate(cfg, |rng, _| {
        let sample: Vec<f64> = (0..cfg.max_sample_size()).map(|_| dist.sample(rng)).collect();
        cfg.sample_sizes
            .iter()
            .map(|&n| {
                EmpiricalCdf::new(&sample[..n])
                    .expect("sampled values are finite")
                    .sup_distance(|x| dist.cdf(x))
            })
            .collect::<Vec<_>>()
    });
    let reps = cfg.replications as f64;
    let mut report = SimReport::new("dkw", Some(0.0), cfg);
    let mut violations = 0;
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let bound = dkw_bound(n, cfg.epsilon);
        let b = bound.min(1.0);
        let tol = 3.0 * (b * (1.0 - b) / reps).sqrt();
        let mut row = summarize(n, &column(&table, k), 0.0, cfg.epsilon, Some(bound));
        let violated = row.deviation_prob > bound + tol;
        violations += usize::from(violated);
        row.extras.insert("mc_tolerance".into(), tol);
        row.extras.insert("violation".into(), f64::from(u8::from(violated)));
        report.rows.push(row);
    }
    report.notes.insert("violations".into(), violations as f64);
    Ok(report)
}
