//! Score, Hessian and Fisher information of a fixed-design GLM, the
//! maximum-likelihood fit by Fisher scoring, and Wald intervals.
//!
//! Observation `i` has covariate vector `z_i` (column `i` of the `p x n`
//! design) and response `y_i`. With `s_i = theta' z_i` and `eta_i = r(s_i)`:
//!
//! ```text
//! U(theta)  = sum_i z_i r'(s_i) [y_i - K'(eta_i)]
//! H1(theta) = sum_i z_i z_i' K''(eta_i) r'(s_i)^2        (Fisher information)
//! H2(theta) = sum_i z_i z_i' [y_i - K'(eta_i)] r''(s_i)
//! H(theta)  = -H1(theta) + H2(theta)
//! ```

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::expfam::{Family, Link};

/// A `p x n` design matrix whose columns are the covariate vectors, together
/// with the `n` responses.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedDesign {
    z: DMatrix<f64>,
    y: DVector<f64>,
}

impl FixedDesign {
    /// Requires `n >= p >= 1` and finite entries.
    pub fn new(z: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        let (p, n) = z.shape();
        if p == 0 {
            return Err(Error::InvalidInput("design needs at least one covariate row".into()));
        }
        if n < p {
            return Err(Error::InvalidInput(format!(
                "design has {n} observations but {p} parameters"
            )));
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y.len(),
            });
        }
        if z.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("design and responses must be finite".into()));
        }
        Ok(Self { z, y })
    }

    /// Builds the design from per-observation covariate vectors (each of length `p`).
    pub fn from_observations(rows: &[Vec<f64>], y: &[f64]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: bad.len(),
            });
        }
        let z = DMatrix::from_fn(p, n, |j, i| rows[i][j]);
        Self::new(z, DVector::from_column_slice(y))
    }

    /// The `p x n` design matrix.
    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn n_params(&self) -> usize {
        self.z.nrows()
    }

    pub fn n_obs(&self) -> usize {
        self.z.ncols()
    }

    /// The design restricted to its first `n` observations.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n > self.n_obs() {
            return Err(Error::InvalidInput(format!(
                "prefix of length {n} requested from {} observations",
                self.n_obs()
            )));
        }
        Self::new(self.z.columns(0, n).into_owned(), self.y.rows(0, n).into_owned())
    }

    /// Checks every response lies in the support of `family`.
    pub fn check_responses(&self, family: Family) -> Result<()> {
        match self.y.iter().position(|&v| !family.supports(v)) {
            None => Ok(()),
            Some(i) => Err(Error::InvalidInput(format!(
                "response {} at observation {} is not valid for the {} family",
                self.y[i],
                i + 1,
                family.name()
            ))),
        }
    }

    /// Index of the first design row that is identically one, if any.
    pub fn intercept_row(&self) -> Option<usize> {
        (0..self.n_params()).find(|&j| self.z.row(j).iter().all(|&v| v == 1.0))
    }

    /// `Z Z'`.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.z * self.z.transpose()
    }
}

/// Per-observation quantities at one linear predictor.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointEval {
    pub natural: f64,
    pub link_first: f64,
    pub link_second: f64,
    pub mean: f64,
    pub variance: f64,
}

pub(crate) fn eval_point(s: f64, family: Family, link: Link) -> Result<PointEval> {
    let r = link.eval(s)?;
    if !(r.first > 0.0) {
        return Err(Error::Domain(format!(
            "link is not strictly increasing at {s} (r' = {})",
            r.first
        )));
    }
    if !family.natural_domain().contains(r.value) {
        return Err(Error::Domain(format!(
            "natural parameter {} outside the {} domain",
            r.value,
            family.name()
        )));
    }
    let c = family.cumulant(r.value)?;
    if !(c.value.is_finite() && c.mean.is_finite() && c.variance.is_finite()) {
        return Err(Error::Domain(format!(
            "cumulant of the {} family overflows at {}",
            family.name(),
            r.value
        )));
    }
    Ok(PointEval {
        natural: r.value,
        link_first: r.first,
        link_second: r.second,
        mean: c.mean,
        variance: c.variance,
    })
}

fn check_theta(theta: &DVector<f64>, design: &FixedDesign) -> Result<()> {
    if theta.len() != design.n_params() {
        return Err(Error::DimensionMismatch {
            expected: design.n_params(),
            found: theta.len(),
        });
    }
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("parameter vector must be finite".into()));
    }
    Ok(())
}

/// Everything one pass over the observations produces.
#[derive(Debug, Clone)]
struct Accumulated {
    loglik: f64,
    score: DVector<f64>,
    h1: DMatrix<f64>,
    h2: DMatrix<f64>,
    /// `max_j sum_i |z_ij r'_i| (|y_i| + |K'_i|)`, the size of the terms the score sums.
    score_magnitude: f64,
}

fn accumulate(
    theta: &DVector<f64>,
    design: &FixedDesign,
    family: Family,
    link: Link,
) -> Result<Accumulated> {
    check_theta(theta, design)?;
    let p = design.n_params();
    let predictor = design.z.tr_mul(theta);
    let mut acc = Accumulated {
        loglik: 0.0,
        score: DVector::zeros(p),
        h1: DMatrix::zeros(p, p),
        h2: DMatrix::zeros(p, p),
        score_magnitude: 0.0,
    };
    let mut magnitude = vec![0.0; p];
    for (i, &s) in predictor.iter().enumerate() {
        let pt = eval_point(s, family, link)?;
        let y = design.y[i];
        let z = design.z.column(i);
        let resid = y - pt.mean;
        acc.loglik += family.log_kernel(y, pt.natural)?;
        acc.score.axpy(pt.link_first * resid, &z, 1.0);
        acc.h1
            .ger(pt.variance * pt.link_first * pt.link_first, &z, &z, 1.0);
        if pt.link_second != 0.0 {
            acc.h2.ger(resid * pt.link_second, &z, &z, 1.0);
        }
        let size = pt.link_first.abs() * (y.abs() + pt.mean.abs());
        for (m, zj) in magnitude.iter_mut().zip(z.iter()) {
            *m += zj.abs() * size;
        }
    }
    acc.score_magnitude = magnitude.into_iter().fold(0.0, f64::max);
    Ok(acc)
}

/// Log-likelihood up to the additive constant `sum_i log h(y_i)`.
pub fn log_likelihood(
    theta: &DVector<f64>,
    design: &FixedDesign,
    family: Family,
    link: Link,
) -> Result<f64> {
    check_theta(theta, design)?;
    let predictor = design.z.tr_mul(theta);
    predictor
        .iter()
        .zip(design.y.iter())
        .try_fold(0.0, |acc, (&s, &y)| {
            let pt = eval_point(s, family, link)?;
            Ok(acc + family.log_kernel(y, pt.natural)?)
        })
}

/// The score vector `U(theta)`.
pub fn score(
    theta: &DVector<f64>,
    design: &FixedDesign,
    family: Family,
    link: Link,
) -> Result<DVector<f64>> {
    Ok(accumulate(theta, design, family, link)?.score)
}

/// The Hessian of the log-likelihood and its two components.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianParts {
    /// `-h1 + h2`.
    pub full: DMatrix<f64>,
    pub h1: DMatrix<f64>,
    pub h2: DMatrix<f64>,
}

pub fn hessian(
    theta: &DVector<f64>,
    design: &FixedDesign,
    family: Family,
    link: Link,
) -> Result<HessianParts> {
    let acc = accumulate(theta, design, family, link)?;
    Ok(HessianParts {
        full: &acc.h2 - &acc.h1,
        h1: acc.h1,
        h2: acc.h2,
    })
}

/// Fisher information `sum_i z_i z_i' K''(r(s_i)) r'(s_i)^2`.
pub fn information(
    theta: &DVector<f64>,
    design: &FixedDesign,
    family: Family,
    link: Link,
) -> Result<DMatrix<f64>> {
    Ok(accumulate(theta, design, family, link)?.h1)
}

/// Starting point of the scoring iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    Zero,
    /// Zero, except that an all-ones design row starts at `r^{-1}(K'^{-1}(mean(y)))`.
    #[default]
    InterceptAtTransformedMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Tolerance on the max-norm of the score.
    pub grad_tol: f64,
    /// Tolerance on the max-norm of the scoring step, relative to `1 + max|theta|`.
    pub step_tol: f64,
    pub step_halving_max: usize,
    pub init: Init,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            grad_tol: 1e-10,
            step_tol: 1e-6,
            step_halving_max: 30,
            init: Init::default(),
        }
    }
}

impl FitOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0) || !(self.step_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub theta_hat: DVector<f64>,
    /// Fisher information at `theta_hat`.
    pub information: DMatrix<f64>,
    /// Inverse of `information`; NaN-filled if it could not be inverted.
    pub covariance: DMatrix<f64>,
    pub converged: bool,
    /// Number of scoring steps taken.
    pub iterations: usize,
    pub final_grad_norm: f64,
    /// The score tolerance actually applied: `grad_tol`, or the rounding floor
    /// of the score when that is larger.
    pub grad_tol_used: f64,
    /// Log-likelihood (up to a constant) at the start and after every step.
    pub loglik_trace: Vec<f64>,
}

impl FitResult {
    pub fn std_errors(&self) -> DVector<f64> {
        self.covariance.diagonal().map(f64::sqrt)
    }

    /// `Ok(self)` when converged, [`Error::NotConverged`] otherwise.
    pub fn require_converged(&self) -> Result<&Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                grad_norm: self.final_grad_norm,
            })
        }
    }
}

fn initial_theta(design: &FixedDesign, family: Family, link: Link, init: Init) -> Result<DVector<f64>> {
    let mut theta = DVector::zeros(design.n_params());
    if init == Init::InterceptAtTransformedMean {
        if let Some(j) = design.intercept_row() {
            let n = design.n_obs() as f64;
            let total = design.y.sum();
            let mean = match family {
                Family::Poisson if total <= 0.0 => (total + 0.5) / n,
                Family::Bernoulli if total <= 0.0 || total >= n => (total + 0.5) / (n + 1.0),
                _ => total / n,
            };
            theta[j] = link.inverse(family.natural_from_mean(mean)?)?;
        }
    }
    Ok(theta)
}

/// Scores this close to zero, relative to the size of their terms, are
/// indistinguishable from rounding.
const SCORE_ROUNDING: f64 = 8.0 * f64::EPSILON;

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

/// Maximum-likelihood fit by Fisher scoring with step halving.
///
/// Each step solves `I(theta) delta = U(theta)` through a Cholesky factor of
/// the information and halves `delta` until the log-likelihood does not
/// decrease. The fit is declared converged once `max|U| <= grad_tol` and the
/// scoring step itself is negligible; the second test separates a genuine
/// optimum from the vanishing score of a fit running off to infinity, as
/// happens with separated binary data.
///
/// With large responses the score cannot be computed to within `grad_tol`:
/// `exp(eta)` alone carries a relative error near `1e-15`. The tolerance is
/// then raised to `8 eps` times the largest sum of absolute score terms, and
/// the value applied is returned as `grad_tol_used`. For moderate data this
/// floor sits far below the default `grad_tol`.
///
/// Running out of iterations is not an error: the result comes back with
/// `converged == false` and the full likelihood trace.
pub fn fit_mle(design: &FixedDesign, family: Family, link: Link, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    design.check_responses(family)?;

    let mut theta = initial_theta(design, family, link, opts.init)?;
    let mut acc = accumulate(&theta, design, family, link)
        .map_err(|_| Error::DomainEscape { iteration: 0 })?;
    let mut trace = vec![acc.loglik];
    let mut iterations = 0;
    let mut converged = false;
    let mut grad_tol_used;

    loop {
        let chol = Cholesky::new(acc.h1.clone())
            .ok_or(Error::SingularInformation { iteration: iterations })?;
        let step = chol.solve(&acc.score);
        if !step.iter().all(|v| v.is_finite()) {
            return Err(Error::SingularInformation { iteration: iterations });
        }
        let grad_norm = max_abs(&acc.score);
        grad_tol_used = opts.grad_tol.max(SCORE_ROUNDING * acc.score_magnitude);
        if grad_norm <= grad_tol_used && max_abs(&step) <= opts.step_tol * (1.0 + max_abs(&theta)) {
            converged = true;
            break;
        }
        if iterations == opts.max_iterations {
            break;
        }

        let mut scale = 1.0;
        let mut accepted = None;
        let mut domain_failure = false;
        for _ in 0..=opts.step_halving_max {
            let candidate = &theta + &step * scale;
            match accumulate(&candidate, design, family, link) {
                Ok(next) if next.loglik.is_finite() => {
                    domain_failure = false;
                    let slack = 4.0 * f64::EPSILON * acc.loglik.abs();
                    if next.loglik >= acc.loglik - slack {
                        accepted = Some((candidate, next));
                        break;
                    }
                }
                _ => domain_failure = true,
            }
            scale *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((candidate, next)) => {
                theta = candidate;
                acc = next;
                trace.push(acc.loglik);
            }
            None if domain_failure => return Err(Error::DomainEscape { iteration: iterations }),
            // No halving improves the likelihood: numerically at the optimum.
            None => break,
        }
    }

    let final_grad_norm = max_abs(&acc.score);
    let mut information = acc.h1;
    symmetrize(&mut information);
    let covariance = match Cholesky::new(information.clone()) {
        Some(chol) => {
            let mut cov = chol.inverse();
            symmetrize(&mut cov);
            cov
        }
        None if converged => return Err(Error::SingularInformation { iteration: iterations }),
        None => DMatrix::from_element(design.n_params(), design.n_params(), f64::NAN),
    };

    Ok(FitResult {
        theta_hat: theta,
        information,
        covariance,
        converged,
        iterations,
        final_grad_norm,
        grad_tol_used,
        loglik_trace: trace,
    })
}

/// A two-sided confidence interval for one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaldInterval {
    pub lower: f64,
    pub upper: f64,
}

impl WaldInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Standard normal quantile function.
pub fn normal_quantile(prob: f64) -> Result<f64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(Error::Domain(format!("probability {prob} outside (0, 1)")));
    }
    Ok(Normal::standard().inverse_cdf(prob))
}

/// `theta_j +/- z_{(1 + level)/2} * sqrt(cov[j, j])` for every coefficient.
pub fn wald_intervals(fit: &FitResult, level: f64) -> Result<Vec<WaldInterval>> {
    fit.require_converged()?;
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidInput(format!("confidence level {level} outside (0, 1)")));
    }
    let z = normal_quantile(0.5 * (1.0 + level))?;
    Ok(fit
        .theta_hat
        .iter()
        .zip(fit.covariance.diagonal().iter())
        .map(|(&est, &var)| {
            let half = z * var.sqrt();
            WaldInterval {
                lower: est - half,
                upper: est + half,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intercept_only(y: &[f64]) -> FixedDesign {
        FixedDesign::new(DMatrix::from_element(1, y.len(), 1.0), DVector::from_column_slice(y)).unwrap()
    }

    fn fitted(theta: &[f64], cov: &[f64], p: usize) -> FitResult {
        FitResult {
            theta_hat: DVector::from_column_slice(theta),
            information: DMatrix::identity(p, p),
            covariance: DMatrix::from_column_slice(p, p, cov),
            converged: true,
            iterations: 1,
            final_grad_norm: 0.0,
            grad_tol_used: 1e-10,
            loglik_trace: vec![],
        }
    }

    #[test]
    fn large_counts_converge_at_the_rounding_floor() {
        // Responses near 1e7 against covariates near 100: the score cannot get below ~1e-7.
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![1.0, -60.0 - 2.5 * i as f64]).collect();
        let y: Vec<f64> = rows.iter().map(|r| (12.0 - 0.03 * r[1]).exp().round()).collect();
        let d = FixedDesign::from_observations(&rows, &y).unwrap();
        let fit = fit_mle(&d, Family::Poisson, Link::Canonical, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.grad_tol_used > 1e-10);
        assert!(fit.final_grad_norm <= fit.grad_tol_used);
        assert!((fit.theta_hat[1] + 0.03).abs() < 1e-6);

        let small = fit_mle(&intercept_only(&[1.0, 2.0, 3.0]), Family::Poisson, Link::Canonical, &FitOptions::default()).unwrap();
        assert_eq!(small.grad_tol_used, 1e-10);
    }

    #[test]
    fn design_validation() {
        let z = DMatrix::from_element(2, 1, 1.0);
        assert!(FixedDesign::new(z, DVector::from_element(1, 1.0)).is_err());
        let z = DMatrix::from_element(1, 2, 1.0);
        assert!(matches!(
            FixedDesign::new(z.clone(), DVector::from_element(3, 1.0)),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut bad = z;
        bad[(0, 1)] = f64::NAN;
        assert!(FixedDesign::new(bad, DVector::from_element(2, 1.0)).is_err());
    }

    #[test]
    fn score_examples() {
        let f = Family::Poisson;
        let l = Link::Canonical;
        let u = score(&DVector::from_element(1, 2f64.ln()), &intercept_only(&[2.0, 2.0, 2.0]), f, l).unwrap();
        assert!(u[0].abs() < 1e-14);
        let u = score(&DVector::zeros(1), &intercept_only(&[0.0, 0.0]), f, l).unwrap();
        assert_eq!(u[0], -2.0);
        let u = score(&DVector::zeros(1), &intercept_only(&[1.0]), f, l).unwrap();
        assert_eq!(u[0], 0.0);
    }

    #[test]
    fn hessian_examples() {
        let h = hessian(&DVector::zeros(1), &intercept_only(&[4.0, 0.0, 1.0]), Family::Poisson, Link::Canonical)
            .unwrap();
        assert_eq!(h.h1[(0, 0)], 3.0);
        assert_eq!(h.h2[(0, 0)], 0.0);
        assert_eq!(h.full[(0, 0)], -3.0);

        let d = FixedDesign::from_observations(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[3.0, 1.0]).unwrap();
        let h = hessian(&DVector::zeros(2), &d, Family::Poisson, Link::Canonical).unwrap();
        assert_eq!(h.h1, DMatrix::identity(2, 2));
    }

    #[test]
    fn gaussian_hessian_is_gram() {
        let d = FixedDesign::from_observations(
            &[vec![1.0, 0.3], vec![1.0, -1.2], vec![1.0, 2.0]],
            &[0.1, 0.2, -0.5],
        )
        .unwrap();
        let theta = DVector::from_column_slice(&[0.7, -0.4]);
        let h = hessian(&theta, &d, Family::GaussianUnitVar, Link::Canonical).unwrap();
        assert!((h.h1 - d.gram()).abs().max() < 1e-14);
        assert_eq!(h.h2, DMatrix::zeros(2, 2));
    }

    #[test]
    fn information_examples() {
        let i = information(&DVector::zeros(1), &intercept_only(&[1.0, 2.0, 5.0]), Family::Poisson, Link::Canonical)
            .unwrap();
        assert_eq!(i[(0, 0)], 3.0);
        let d = FixedDesign::from_observations(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[0.0, 0.0]).unwrap();
        let one = d.prefix(2).unwrap();
        let i = information(&DVector::zeros(2), &one, Family::Poisson, Link::Canonical).unwrap();
        assert_eq!(i, DMatrix::from_element(2, 2, 2.0));
    }

    #[test]
    fn single_point_information_is_outer_product() {
        // n = 1 < p = 2 is not a valid design, so evaluate the term directly.
        let z = DVector::from_column_slice(&[1.0, 1.0]);
        let mut m = DMatrix::zeros(2, 2);
        let pt = eval_point(0.0, Family::Poisson, Link::Canonical).unwrap();
        m.ger(pt.variance, &z, &z, 1.0);
        assert_eq!(m, DMatrix::from_element(2, 2, 1.0));
    }

    #[test]
    fn domain_escape_in_score() {
        let d = intercept_only(&[1.0]);
        let err = score(&DVector::from_element(1, 800.0), &d, Family::Poisson, Link::Canonical).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn init_guards_zero_mean() {
        let d = intercept_only(&[0.0, 0.0, 0.0, 0.0]);
        let t = initial_theta(&d, Family::Poisson, Link::Canonical, Init::InterceptAtTransformedMean).unwrap();
        assert!((t[0] - (0.5f64 / 4.0).ln()).abs() < 1e-15);
        let t = initial_theta(&d, Family::Poisson, Link::Canonical, Init::Zero).unwrap();
        assert_eq!(t[0], 0.0);
    }

    #[test]
    fn rejects_invalid_responses() {
        let d = intercept_only(&[1.5, 2.0]);
        assert!(matches!(
            fit_mle(&d, Family::Poisson, Link::Canonical, &FitOptions::default()),
            Err(Error::InvalidInput(_))
        ));
        let d = intercept_only(&[2.0, 0.0]);
        assert!(fit_mle(&d, Family::Bernoulli, Link::Canonical, &FitOptions::default()).is_err());
    }

    #[test]
    fn rank_deficient_design_is_singular() {
        let d = FixedDesign::from_observations(
            &[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]],
            &[1.0, 0.0, 3.0],
        )
        .unwrap();
        assert!(matches!(
            fit_mle(&d, Family::Poisson, Link::Canonical, &FitOptions::default()),
            Err(Error::SingularInformation { iteration: 0 })
        ));
    }

    #[test]
    fn wald_examples() {
        let iv = wald_intervals(&fitted(&[0.0, 0.0], &[1.0, 0.0, 0.0, 1.0], 2), 0.95).unwrap();
        for w in &iv {
            assert!((w.upper - 1.959964).abs() < 1e-6);
            assert!((w.lower + 1.959964).abs() < 1e-6);
        }
        let iv = wald_intervals(&fitted(&[5.0], &[4.0], 1), 0.95).unwrap();
        assert!((iv[0].lower - (5.0 - 1.959964 * 2.0)).abs() < 1e-5);
        assert!((iv[0].upper - (5.0 + 1.959964 * 2.0)).abs() < 1e-5);

        let iv = wald_intervals(&fitted(&[5.0], &[4.0], 1), 1e-12).unwrap();
        assert!((iv[0].upper - iv[0].lower) < 1e-10);
    }

    #[test]
    fn wald_rejects_bad_input() {
        let mut f = fitted(&[0.0], &[1.0], 1);
        assert!(wald_intervals(&f, 0.0).is_err());
        assert!(wald_intervals(&f, 1.0).is_err());
        f.converged = false;
        assert!(matches!(wald_intervals(&f, 0.95), Err(Error::NotConverged { .. })));
    }
}
