//! Fits and derivatives checked against independent oracles: golden-section
//! maximization of a hand-written log-likelihood, least squares, finite
//! differences and bisection on a quadrature normal CDF.

use fdglm::diagnostics::leverages;
use fdglm::lab::replication_rng;
use fdglm::{
    condition_report, fit_mle, growth_curve, hessian, information, log_likelihood, normal_quantile, score,
    wald_intervals, Error, Family, FitOptions, FixedDesign, Link,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

const CANON: Link = Link::Canonical;

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-11 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

/// Poisson log-likelihood written out directly, without the library.
fn poisson_loglik(rows: &[Vec<f64>], y: &[f64], theta: &[f64]) -> f64 {
    rows.iter()
        .zip(y)
        .map(|(z, &yi)| {
            let eta: f64 = z.iter().zip(theta).map(|(a, b)| a * b).sum();
            yi * eta - eta.exp()
        })
        .sum()
}

fn intercept_only(y: &[f64]) -> FixedDesign {
    FixedDesign::new(DMatrix::from_element(1, y.len(), 1.0), DVector::from_column_slice(y)).unwrap()
}

#[test]
fn intercept_only_poisson_is_log_mean() {
    let y = [1.0, 2.0, 3.0];
    let rows = vec![vec![1.0]; 3];
    let oracle = golden_max(|t| poisson_loglik(&rows, &y, &[t]), -10.0, 10.0);
    assert!((oracle - 2f64.ln()).abs() < 1e-8);

    let fit = fit_mle(&intercept_only(&y), Family::Poisson, CANON, &FitOptions::default()).unwrap();
    assert!(fit.converged);
    assert!((fit.theta_hat[0] - 2f64.ln()).abs() < 1e-10);
    assert!((fit.theta_hat[0] - oracle).abs() < 1e-6);
}

#[test]
fn two_dimensional_fit_matches_nested_golden_section() {
    let rows = vec![
        vec![1.0, -1.0],
        vec![1.0, -0.5],
        vec![1.0, 0.0],
        vec![1.0, 0.4],
        vec![1.0, 1.1],
        vec![1.0, 1.5],
    ];
    let y = [0.0, 1.0, 1.0, 3.0, 2.0, 6.0];
    let profile = |t1: f64| {
        let t0 = golden_max(|t0| poisson_loglik(&rows, &y, &[t0, t1]), -10.0, 10.0);
        (t0, poisson_loglik(&rows, &y, &[t0, t1]))
    };
    let t1 = golden_max(|t1| profile(t1).1, -10.0, 10.0);
    let t0 = profile(t1).0;

    let design = FixedDesign::from_observations(&rows, &y).unwrap();
    let fit = fit_mle(&design, Family::Poisson, CANON, &FitOptions::default()).unwrap();
    assert!((fit.theta_hat[0] - t0).abs() < 1e-6, "{} vs {t0}", fit.theta_hat[0]);
    assert!((fit.theta_hat[1] - t1).abs() < 1e-6, "{} vs {t1}", fit.theta_hat[1]);
}

#[test]
fn one_dimensional_bernoulli_matches_golden_section() {
    let rows: Vec<Vec<f64>> = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0].iter().map(|&x| vec![x]).collect();
    let y = [0.0, 1.0, 0.0, 1.0, 0.0, 1.0];
    let ll = |t: f64| -> f64 {
        rows.iter()
            .zip(&y)
            .map(|(z, &yi)| {
                let eta = z[0] * t;
                yi * eta - (1.0 + eta.exp()).ln()
            })
            .sum()
    };
    let oracle = golden_max(ll, -10.0, 10.0);
    let fit = fit_mle(
        &FixedDesign::from_observations(&rows, &y).unwrap(),
        Family::Bernoulli,
        CANON,
        &FitOptions::default(),
    )
    .unwrap();
    assert!((fit.theta_hat[0] - oracle).abs() < 1e-6);
}

#[test]
fn gaussian_fit_is_least_squares_in_one_step() {
    let rows = vec![
        vec![1.0, 0.2, -1.0],
        vec![1.0, 1.4, 0.3],
        vec![1.0, -0.7, 2.0],
        vec![1.0, 2.2, 0.9],
        vec![1.0, -1.5, -0.4],
        vec![1.0, 0.1, 1.7],
    ];
    let y = [0.3, 2.1, -0.8, 3.5, -1.9, 1.2];
    let design = FixedDesign::from_observations(&rows, &y).unwrap();

    // Oracle: least squares through the SVD of Z'.
    let x = design.z().transpose();
    let ls = x.svd(true, true).solve(&DVector::from_column_slice(&y), 1e-14).unwrap();
    let fit = fit_mle(&design, Family::GaussianUnitVar, CANON, &FitOptions::default()).unwrap();
    assert!(fit.converged);
    assert_eq!(fit.iterations, 1);
    assert!((&fit.theta_hat - &ls).amax() < 1e-10);
}

#[test]
fn separated_bernoulli_does_not_converge() {
    let rows: Vec<Vec<f64>> = [-2.0, -1.0, 1.0, 2.0].iter().map(|&x| vec![x]).collect();
    let y = [0.0, 0.0, 1.0, 1.0];
    let design = FixedDesign::from_observations(&rows, &y).unwrap();
    let fit = fit_mle(&design, Family::Bernoulli, CANON, &FitOptions::default()).unwrap();
    assert!(!fit.converged);
    assert_eq!(fit.iterations, 50);
    assert!(fit.loglik_trace.windows(2).all(|w| w[1] > w[0]), "{:?}", fit.loglik_trace);
    assert!(matches!(wald_intervals(&fit, 0.95), Err(Error::NotConverged { .. })));
    assert!(fit.require_converged().is_err());
}

#[test]
fn converged_fit_invariants() {
    let mut rng = replication_rng(77, 0);
    let n = 60;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![1.0, rng.random_range(-1.0..1.0), rng.random_range(0.0..2.0)])
        .collect();
    let y: Vec<f64> = (0..n).map(|_| rng.random_range(0..8) as f64).collect();
    let design = FixedDesign::from_observations(&rows, &y).unwrap();
    let opts = FitOptions::default();
    let fit = fit_mle(&design, Family::Poisson, CANON, &opts).unwrap();
    assert!(fit.converged);
    let u = score(&fit.theta_hat, &design, Family::Poisson, CANON).unwrap();
    assert!(u.amax() <= opts.grad_tol);
    assert!(fit.final_grad_norm <= opts.grad_tol);
    assert_eq!(fit.grad_tol_used, opts.grad_tol);
    let info = information(&fit.theta_hat, &design, Family::Poisson, CANON).unwrap();
    assert!((&info - &fit.information).amax() <= 1e-12 * info.amax());
    let prod = &fit.covariance * &fit.information;
    assert!((prod - DMatrix::identity(3, 3)).amax() < 1e-8);
    assert!(fit.information.clone().cholesky().is_some());
    assert!(fit.loglik_trace.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0].abs()));
}

#[test]
fn rescaling_a_covariate_rescales_its_coefficient() {
    let mut rng = replication_rng(78, 0);
    let n = 40;
    let rows: Vec<Vec<f64>> = (0..n).map(|_| vec![1.0, rng.random_range(-1.0..1.0)]).collect();
    let y: Vec<f64> = (0..n).map(|_| rng.random_range(0..5) as f64).collect();
    let base = fit_mle(
        &FixedDesign::from_observations(&rows, &y).unwrap(),
        Family::Poisson,
        CANON,
        &FitOptions::default(),
    )
    .unwrap();
    for c in [0.01, 3.0, 250.0] {
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0], c * r[1]]).collect();
        let fit = fit_mle(
            &FixedDesign::from_observations(&scaled, &y).unwrap(),
            Family::Poisson,
            CANON,
            &FitOptions::default(),
        )
        .unwrap();
        let expected = base.theta_hat[1] / c;
        assert!(((fit.theta_hat[1] - expected) / expected).abs() < 1e-8, "c = {c}");
        assert!(((fit.theta_hat[0] - base.theta_hat[0]) / base.theta_hat[0]).abs() < 1e-8);
    }
}

fn rel_err(approx: &DVector<f64>, exact: &DVector<f64>) -> f64 {
    (approx - exact).amax() / exact.amax().max(1.0)
}

fn fd_score(theta: &DVector<f64>, d: &FixedDesign, h: f64) -> DVector<f64> {
    DVector::from_iterator(
        theta.len(),
        (0..theta.len()).map(|j| {
            let mut up = theta.clone();
            let mut dn = theta.clone();
            up[j] += h;
            dn[j] -= h;
            (log_likelihood(&up, d, Family::Poisson, CANON).unwrap()
                - log_likelihood(&dn, d, Family::Poisson, CANON).unwrap())
                / (2.0 * h)
        }),
    )
}

fn fd_hessian_col(theta: &DVector<f64>, d: &FixedDesign, j: usize, h: f64) -> DVector<f64> {
    let mut up = theta.clone();
    let mut dn = theta.clone();
    up[j] += h;
    dn[j] -= h;
    (score(&up, d, Family::Poisson, CANON).unwrap() - score(&dn, d, Family::Poisson, CANON).unwrap()) / (2.0 * h)
}

fn design_strategy() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
    (1usize..=3).prop_flat_map(|p| {
        (p..=20).prop_flat_map(move |n| {
            (
                prop::collection::vec(prop::collection::vec(-1.0f64..1.0, p), n),
                prop::collection::vec(0u32..10, n).prop_map(|v| v.into_iter().map(f64::from).collect()),
                prop::collection::vec(-0.5f64..0.5, p),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivatives_match_finite_differences((rows, y, theta) in design_strategy()) {
        let d = FixedDesign::from_observations(&rows, &y).unwrap();
        let theta = DVector::from_vec(theta);
        let u = score(&theta, &d, Family::Poisson, CANON).unwrap();
        prop_assert!(rel_err(&fd_score(&theta, &d, 1e-5), &u) <= 1e-5);
        let h = hessian(&theta, &d, Family::Poisson, CANON).unwrap();
        for j in 0..theta.len() {
            let col = h.full.column(j).into_owned();
            prop_assert!(rel_err(&fd_hessian_col(&theta, &d, j, 1e-5), &col) <= 1e-4);
        }
        // Canonical link: H2 vanishes and the information is -H.
        prop_assert!(h.h2.iter().all(|&v| v == 0.0));
        prop_assert_eq!(&h.h1, &(-&h.full));
        prop_assert_eq!(information(&theta, &d, Family::Poisson, CANON).unwrap(), h.h1);
    }
}

#[test]
fn normal_quantile_matches_quadrature_bisection() {
    // Phi(x) = 1/2 + int_0^x phi by composite Simpson, independent of any erf code.
    fn phi_cdf(x: f64) -> f64 {
        let m = 2000;
        let h = x / m as f64;
        let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = pdf(0.0) + pdf(x);
        for k in 1..m {
            s += pdf(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        0.5 + s * h / 3.0
    }
    for p in [0.5, 0.6, 0.9, 0.95, 0.975, 0.995, 0.9999] {
        let (mut lo, mut hi) = (-10.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if phi_cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = normal_quantile(p).unwrap();
        assert!((q - lo).abs() < 1e-8, "p = {p}: {q} vs {lo}");
        assert!((normal_quantile(1.0 - p).unwrap() + q).abs() < 1e-12);
    }
    assert!((normal_quantile(0.975).unwrap() - 1.959964).abs() < 1e-6);
    assert!(normal_quantile(0.0).is_err());
    assert!(normal_quantile(1.0).is_err());
}

#[test]
fn leverage_sums_equal_dimension() {
    let mut rng = replication_rng(90, 0);
    for (n, p) in [(5, 1), (12, 2), (40, 3), (100, 4)] {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let mut r = vec![1.0];
                r.extend((1..p).map(|_| rng.random_range(-2.0..2.0)));
                r
            })
            .collect();
        let d = FixedDesign::from_observations(&rows, &vec![1.0; n]).unwrap();
        let theta = DVector::from_fn(p, |j, _| 0.1 * j as f64);
        let r = condition_report(&d, Family::Poisson, CANON, &theta).unwrap();
        let pf = p as f64;
        assert!((r.leverage_sum.unwrap() - pf).abs() / pf <= 1e-8);
        // Unit Poisson weights at theta = 0 make the two leverages coincide.
        let r0 = condition_report(&d, Family::Poisson, CANON, &DVector::zeros(p)).unwrap();
        assert!((r0.info_leverage_sum.unwrap() - pf).abs() / pf <= 1e-8);
        assert!((leverages(&d).unwrap().sum() - pf).abs() / pf <= 1e-8);
        // I(theta0) >= min weight * Z Z' in the Loewner order, so the same holds for lambda_min.
        assert!(r.info_lambda_min >= r.lambda_min_zzt * r.min_info_weight * (1.0 - 1e-12));
        assert_eq!(r.positive_definite, r.lambda_min_zzt > 0.0);
    }
}

#[test]
fn nested_growth_is_monotone() {
    let mut rng = replication_rng(91, 0);
    let rows: Vec<Vec<f64>> = (0..200).map(|_| vec![1.0, rng.random_range(0.0..1.0)]).collect();
    let d = FixedDesign::from_observations(&rows, &vec![0.0; 200]).unwrap();
    let designs = fdglm::diagnostics::nested_designs(&d, &[50, 100, 200]).unwrap();
    let reports = growth_curve(&designs, Family::Poisson, CANON, &DVector::zeros(2)).unwrap();
    assert!(reports.windows(2).all(|w| w[1].lambda_min_zzt > w[0].lambda_min_zzt));

    let constant: Vec<FixedDesign> = [5, 10, 20]
        .iter()
        .map(|&n| intercept_only(&vec![0.0; n]))
        .collect();
    let reports = growth_curve(&constant, Family::Poisson, CANON, &DVector::zeros(1)).unwrap();
    for (r, n) in reports.iter().zip([5.0, 10.0, 20.0]) {
        assert!((r.max_leverage.unwrap() - 1.0 / n).abs() < 1e-12);
    }
}
