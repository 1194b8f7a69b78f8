use serde::Serialize;

use super::{correlation, mean, median, replicate, variance, ReferenceDistribution, SimConfig, SimReport, SimRow};
use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kernel {
    Gaussian,
    /// `3/4 (1 - u^2)` on `[-1, 1]`.
    Epanechnikov,
}

impl Kernel {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => INV_SQRT_2PI * (-0.5 * u * u).exp(),
            Kernel::Epanechnikov => {
                if u.abs() <= 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
        }
    }

    /// `int K(u)^2 du`.
    pub fn square_integral(&self) -> f64 {
        match self {
            Kernel::Gaussian => 0.5 / std::f64::consts::PI.sqrt(),
            Kernel::Epanechnikov => 0.6,
        }
    }
}

/// `f(x) = 1 / (n b) sum_i K((x - x_i) / b)` at every point.
pub fn kde(samples: &[f64], bandwidth: f64, kernel: Kernel, points: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("density estimate from an empty sample".into()));
    }
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidInput(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let scale = 1.0 / (samples.len() as f64 * bandwidth);
    Ok(points
        .iter()
        .map(|&x| scale * samples.iter().map(|&xi| kernel.eval((x - xi) / bandwidth)).sum::<f64>())
        .collect())
}

/// Bandwidth `b_n = factor * scale * n^(-1/5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandwidthRule {
    pub factor: f64,
    /// Multiply by the sample standard deviation (normal reference rule) or by 1.
    pub use_sample_sd: bool,
}

impl Default for BandwidthRule {
    /// `1.06 * sd * n^(-1/5)`.
    fn default() -> Self {
        Self {
            factor: 1.06,
            use_sample_sd: true,
        }
    }
}

impl BandwidthRule {
    pub fn fixed(factor: f64) -> Self {
        Self {
            factor,
            use_sample_sd: false,
        }
    }

    pub fn bandwidth(&self, samples: &[f64]) -> f64 {
        let n = samples.len() as f64;
        let scale = if self.use_sample_sd && samples.len() > 1 {
            variance(samples).sqrt()
        } else {
            1.0
        };
        self.factor * scale * n.powf(-0.2)
    }
}

/// Monte Carlo check of the joint asymptotic normality of a kernel density
/// estimate at several points.
///
/// For each sample size, the replications give `sqrt(n b_n) f(x_j)` at every
/// point. Rows report, for the first point, the mean and median of that
/// scaled estimate, the rate of `|f(x_0) - f_true(x_0)| > eps`, and as
/// `bound` the limiting variance `f_true(x_0) int K^2`. Extras hold, per point
/// `j`, the empirical variance `scaled_var_j`, its limit `target_var_j` and
/// their ratio `var_ratio_j`, plus the correlation `corr_0_j` with the first
/// point and the average `bandwidth`.
pub fn kde_clt_check(
    dist: &dyn ReferenceDistribution,
    points: &[f64],
    cfg: &SimConfig,
    rule: BandwidthRule,
    kernel: Kernel,
) -> Result<SimReport> {
    cfg.validate()?;
    cfg.require_min_size(2, "a kernel density estimate")?;
    if points.is_empty() {
        return Err(Error::InvalidInput("no evaluation points".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("evaluation points must be distinct".into()));
    }
    if !(rule.factor > 0.0) {
        return Err(Error::InvalidInput("bandwidth factor must be positive".into()));
    }

    // [replication][size] -> (bandwidth, estimates at each point)
    let table = replicate(cfg, |rng, _| {
        let sample: Vec<f64> = (0..cfg.max_sample_size()).map(|_| dist.sample(rng)).collect();
        cfg.sample_sizes
            .iter()
            .map(|&n| {
                let s = &sample[..n];
                let b = rule.bandwidth(s);
                (b, kde(s, b, kernel, points).expect("validated inputs"))
            })
            .collect::<Vec<_>>()
    });

    let k2 = kernel.square_integral();
    let mut report = SimReport::new("kde-clt", None, cfg);
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let bandwidths: Vec<f64> = table.iter().map(|r| r[k].0).collect();
        let scaled: Vec<Vec<f64>> = (0..points.len())
            .map(|j| table.iter().map(|r| (n as f64 * r[k].0).sqrt() * r[k].1[j]).collect())
            .collect();
        let f0 = dist.pdf(points[0]);
        let exceed = table.iter().filter(|r| (r[k].1[0] - f0).abs() > cfg.epsilon).count();
        let mut row = SimRow {
            sample_size: n,
            mean: mean(&scaled[0]),
            median: median(&scaled[0]),
            deviation_prob: exceed as f64 / cfg.replications as f64,
            bound: Some(f0 * k2),
            extras: Default::default(),
        };
        row.extras.insert("bandwidth".into(), mean(&bandwidths));
        for (j, &x) in points.iter().enumerate() {
            let target = dist.pdf(x) * k2;
            let v = if cfg.replications > 1 { variance(&scaled[j]) } else { f64::NAN };
            row.extras.insert(format!("scaled_var_{j}"), v);
            row.extras.insert(format!("target_var_{j}"), target);
            row.extras.insert(format!("var_ratio_{j}"), v / target);
            if j > 0 && cfg.replications > 1 {
                row.extras.insert(format!("corr_0_{j}"), correlation(&scaled[0], &scaled[j]));
            }
        }
        report.rows.push(row);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{replication_rng, StdNormal};

    #[test]
    fn gaussian_single_sample_at_center() {
        let f = kde(&[0.0], 1.0, Kernel::Gaussian, &[0.0]).unwrap();
        let phi0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((f[0] - phi0).abs() < 1e-15);
        assert!((f[0] - 0.39894).abs() < 1e-5);
    }

    #[test]
    fn epanechnikov_support() {
        let f = kde(&[0.0, 1.0], 0.5, Kernel::Epanechnikov, &[1.6, -0.6, 0.5]).unwrap();
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1], 0.0);
        assert_eq!(f[2], 0.0);
        let f = kde(&[0.0], 0.5, Kernel::Epanechnikov, &[0.25]).unwrap();
        assert!((f[0] - 0.75 * 0.75 / 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(kde(&[], 1.0, Kernel::Gaussian, &[0.0]).is_err());
        assert!(kde(&[1.0], 0.0, Kernel::Gaussian, &[0.0]).is_err());
        assert!(kde(&[1.0], -1.0, Kernel::Gaussian, &[0.0]).is_err());
    }

    #[test]
    fn scaling_identity() {
        let mut rng = replication_rng(5, 0);
        let xs: Vec<f64> = (0..10).map(|_| StdNormal.sample(&mut rng)).collect();
        let pts = [-1.0, 0.0, 0.3, 2.0];
        let doubled: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let pts2: Vec<f64> = pts.iter().map(|x| 2.0 * x).collect();
        for kernel in [Kernel::Gaussian, Kernel::Epanechnikov] {
            let a = kde(&xs, 0.4, kernel, &pts).unwrap();
            let b = kde(&doubled, 0.8, kernel, &pts2).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((v - u / 2.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn integrates_to_one() {
        let mut rng = replication_rng(6, 0);
        let xs: Vec<f64> = (0..50).map(|_| StdNormal.sample(&mut rng)).collect();
        let b = 0.3;
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 6.0 * b;
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 6.0 * b;
        let m = 20_000;
        let h = (hi - lo) / m as f64;
        let grid: Vec<f64> = (0..=m).map(|k| lo + k as f64 * h).collect();
        let f = kde(&xs, b, Kernel::Gaussian, &grid).unwrap();
        let integral = h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[m]));
        assert!((integral - 1.0).abs() < 1e-3, "{integral}");
    }

    #[test]
    fn square_integrals_by_quadrature() {
        for kernel in [Kernel::Gaussian, Kernel::Epanechnikov] {
            let m = 200_000;
            let h = 20.0 / m as f64;
            let q: f64 = (0..=m).map(|k| kernel.eval(-10.0 + k as f64 * h).powi(2)).sum::<f64>() * h;
            assert!((q - kernel.square_integral()).abs() < 1e-6, "{kernel:?}");
        }
    }

    #[test]
    fn normal_reference_bandwidth() {
        let rule = BandwidthRule::default();
        let xs = [-1.0, 1.0];
        // sd = sqrt(2)
        assert!((rule.bandwidth(&xs) - 1.06 * 2f64.sqrt() * 2f64.powf(-0.2)).abs() < 1e-15);
        assert_eq!(BandwidthRule::fixed(0.5).bandwidth(&[0.0; 32]), 0.25);
    }

    #[test]
    fn clt_check_rejects_duplicate_points() {
        let cfg = SimConfig::new(1, 10, vec![100], 0.1).unwrap();
        assert!(kde_clt_check(&StdNormal, &[0.0, 0.0], &cfg, BandwidthRule::default(), Kernel::Gaussian).is_err());
    }
}
