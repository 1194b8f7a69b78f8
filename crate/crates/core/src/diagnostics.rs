//! Computable regularity diagnostics for a fixed design.
//!
//! The asymptotic normality of the MLE in a fixed-design GLM rests on the
//! design information growing without bound while no single design point
//! dominates, and on the link staying in a compact part of the natural
//! domain. This module reports the finite-`n` versions of those quantities:
//! the smallest eigenvalue of `Z Z'` and of the Fisher information, the
//! largest leverage `z_i' (Z Z')^{-1} z_i` and `z_i' I^{-1} z_i`, and the
//! ranges of `r`, `r'` and `r''` over the design.
//!
//! Conditions that are statements about probability limits (local
//! continuity of the standardized Hessian, its convergence to the identity,
//! asymptotic normality of the standardized score) cannot be checked from a
//! finite sample and are listed in [`ConditionReport::not_checked`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expfam::{Family, Link};
use crate::glm::{eval_point, information, FixedDesign};

/// Condition number above which a symmetric matrix is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

pub const NOT_CHECKED: [&str; 3] = [
    "local_hessian_continuity",
    "standardized_hessian_limit",
    "score_asymptotic_normality",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub n_obs: usize,
    pub n_params: usize,
    /// Smallest eigenvalue of `Z Z'`; zero when the design is numerically singular.
    pub lambda_min_zzt: f64,
    pub lambda_max_zzt: f64,
    /// `max_i z_i' (Z Z')^{-1} z_i`, absent when `Z Z'` is singular.
    pub max_leverage: Option<f64>,
    pub leverage_sum: Option<f64>,
    /// Smallest eigenvalue of the Fisher information at `theta0`.
    pub info_lambda_min: f64,
    /// Largest `z_i' I(theta0)^{-1} z_i`.
    pub max_info_leverage: Option<f64>,
    pub info_leverage_sum: Option<f64>,
    /// `(min, max)` of `r'(theta0' z_i)`.
    pub link_deriv_range: (f64, f64),
    /// `max_i |r''(theta0' z_i)|`.
    pub link_second_max: f64,
    /// `(min, max)` of `r(theta0' z_i)`.
    pub natural_param_range: (f64, f64),
    /// `min_i K''(r(s_i)) r'(s_i)^2`, the weight bounding the information below.
    pub min_info_weight: f64,
    /// Whether `Z Z'` is numerically positive definite.
    pub positive_definite: bool,
    pub info_positive_definite: bool,
    pub not_checked: Vec<&'static str>,
}

struct Spectrum {
    min: f64,
    max: f64,
    positive_definite: bool,
    inverse: Option<DMatrix<f64>>,
}

fn spectrum(m: &DMatrix<f64>) -> Spectrum {
    let eig = SymmetricEigen::new(m.clone());
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    let positive_definite = min > 0.0 && max / min <= SINGULAR_CONDITION;
    let inverse = positive_definite.then(|| {
        let inv_vals = eig.eigenvalues.map(f64::recip);
        &eig.eigenvectors * DMatrix::from_diagonal(&inv_vals) * eig.eigenvectors.transpose()
    });
    Spectrum {
        min: if positive_definite { min } else { 0.0 },
        max,
        positive_definite,
        inverse,
    }
}

/// `z_i' M z_i` for every column.
fn quadratic_forms(z: &DMatrix<f64>, m: &DMatrix<f64>) -> DVector<f64> {
    let mz = m * z;
    DVector::from_iterator(
        z.ncols(),
        z.column_iter().zip(mz.column_iter()).map(|(a, b)| a.dot(&b)),
    )
}

/// Per-observation leverages `z_i' (Z Z')^{-1} z_i`, or `None` for a singular design.
pub fn leverages(design: &FixedDesign) -> Option<DVector<f64>> {
    spectrum(&design.gram())
        .inverse
        .map(|inv| quadratic_forms(design.z(), &inv))
}

pub fn condition_report(
    design: &FixedDesign,
    family: Family,
    link: Link,
    theta0: &DVector<f64>,
) -> Result<ConditionReport> {
    if theta0.len() != design.n_params() {
        return Err(Error::DimensionMismatch {
            expected: design.n_params(),
            found: theta0.len(),
        });
    }
    let gram = spectrum(&design.gram());
    let lev = gram.inverse.as_ref().map(|inv| quadratic_forms(design.z(), inv));

    let info = information(theta0, design, family, link)?;
    let info_spec = spectrum(&info);
    let info_lev = info_spec
        .inverse
        .as_ref()
        .map(|inv| quadratic_forms(design.z(), inv));

    let mut deriv = (f64::INFINITY, f64::NEG_INFINITY);
    let mut natural = (f64::INFINITY, f64::NEG_INFINITY);
    let mut second_max = 0.0f64;
    let mut min_weight = f64::INFINITY;
    for s in design.z().tr_mul(theta0).iter() {
        let pt = eval_point(*s, family, link)?;
        deriv = (deriv.0.min(pt.link_first), deriv.1.max(pt.link_first));
        natural = (natural.0.min(pt.natural), natural.1.max(pt.natural));
        second_max = second_max.max(pt.link_second.abs());
        min_weight = min_weight.min(pt.variance * pt.link_first * pt.link_first);
    }

    Ok(ConditionReport {
        n_obs: design.n_obs(),
        n_params: design.n_params(),
        lambda_min_zzt: gram.min,
        lambda_max_zzt: gram.max,
        max_leverage: lev.as_ref().map(|l| l.max()),
        leverage_sum: lev.as_ref().map(|l| l.sum()),
        info_lambda_min: info_spec.min,
        max_info_leverage: info_lev.as_ref().map(|l| l.max()),
        info_leverage_sum: info_lev.as_ref().map(|l| l.sum()),
        link_deriv_range: deriv,
        link_second_max: second_max,
        natural_param_range: natural,
        min_info_weight: min_weight,
        positive_definite: gram.positive_definite,
        info_positive_definite: info_spec.positive_definite,
        not_checked: NOT_CHECKED.to_vec(),
    })
}

/// One report per design, for designs sharing the same parameter dimension.
pub fn growth_curve(
    designs: &[FixedDesign],
    family: Family,
    link: Link,
    theta0: &DVector<f64>,
) -> Result<Vec<ConditionReport>> {
    let p = designs.first().map_or(theta0.len(), FixedDesign::n_params);
    designs
        .iter()
        .map(|d| {
            if d.n_params() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: d.n_params(),
                });
            }
            condition_report(d, family, link, theta0)
        })
        .collect()
}

/// Prefixes of `design` with the given numbers of observations.
pub fn nested_designs(design: &FixedDesign, sizes: &[usize]) -> Result<Vec<FixedDesign>> {
    sizes.iter().map(|&n| design.prefix(n)).collect()
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

impl ConditionReport {
    /// Flat `name=value` text, one entry per line.
    pub fn to_key_value(&self) -> String {
        let lines = [
            ("n_obs", self.n_obs.to_string()),
            ("n_params", self.n_params.to_string()),
            ("lambda_min_zzt", self.lambda_min_zzt.to_string()),
            ("lambda_max_zzt", self.lambda_max_zzt.to_string()),
            ("max_leverage", opt(self.max_leverage)),
            ("leverage_sum", opt(self.leverage_sum)),
            ("info_lambda_min", self.info_lambda_min.to_string()),
            ("max_info_leverage", opt(self.max_info_leverage)),
            ("info_leverage_sum", opt(self.info_leverage_sum)),
            ("link_deriv_min", self.link_deriv_range.0.to_string()),
            ("link_deriv_max", self.link_deriv_range.1.to_string()),
            ("link_second_max", self.link_second_max.to_string()),
            ("natural_param_min", self.natural_param_range.0.to_string()),
            ("natural_param_max", self.natural_param_range.1.to_string()),
            ("min_info_weight", self.min_info_weight.to_string()),
            ("positive_definite", self.positive_definite.to_string()),
            ("info_positive_definite", self.info_positive_definite.to_string()),
            ("not_checked", self.not_checked.join(",")),
        ];
        lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}
