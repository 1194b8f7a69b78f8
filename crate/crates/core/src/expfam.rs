//! One-parameter canonical exponential families and link functions.
//!
//! A family is described by its cumulant function `K`, so that the log-density
//! of a response `y` at natural parameter `eta` is `eta * y - K(eta)` plus a
//! carrier term that depends on `y` alone. The carrier never enters a score,
//! Hessian or likelihood difference, so it is not represented here.
//!
//! A link maps the linear predictor `s = theta' z` to the natural parameter
//! `eta = r(s)`. The GLM code consumes `r`, `r'` and `r''`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// An open interval of the real line, possibly unbounded on either side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpenInterval {
    pub lower: f64,
    pub upper: f64,
}

impl OpenInterval {
    pub const REAL_LINE: OpenInterval = OpenInterval {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }
}

/// `K(eta)` together with its first two derivatives, i.e. the cumulant, the
/// mean and the variance of the family at `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulant {
    pub value: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `K(eta) = exp(eta)`.
    Poisson,
    /// `K(eta) = log(1 + exp(eta))`.
    Bernoulli,
    /// Normal with unit variance, `K(eta) = eta^2 / 2`.
    GaussianUnitVar,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Poisson => "poisson",
            Family::Bernoulli => "bernoulli",
            Family::GaussianUnitVar => "gaussian",
        }
    }

    /// All three shipped families have the whole real line as natural domain.
    pub fn natural_domain(&self) -> OpenInterval {
        OpenInterval::REAL_LINE
    }

    /// Evaluates `(K, K', K'')` at `eta`.
    ///
    /// The Bernoulli branch stays finite and strictly positive in variance for
    /// `|eta|` up to about 700. Poisson overflows to infinity past
    /// `eta ~ 709.78`; callers treat a non-finite result as leaving the domain.
    pub fn cumulant(&self, eta: f64) -> Result<Cumulant> {
        ensure_finite("natural parameter", eta)?;
        Ok(match self {
            Family::Poisson => {
                let e = eta.exp();
                Cumulant {
                    value: e,
                    mean: e,
                    variance: e,
                }
            }
            Family::Bernoulli => {
                // exp(-|eta|) never overflows.
                let t = (-eta.abs()).exp();
                let value = if eta > 0.0 {
                    eta + t.ln_1p()
                } else {
                    t.ln_1p()
                };
                let p = if eta >= 0.0 { 1.0 / (1.0 + t) } else { t / (1.0 + t) };
                Cumulant {
                    value,
                    mean: p,
                    variance: t / ((1.0 + t) * (1.0 + t)),
                }
            }
            Family::GaussianUnitVar => Cumulant {
                value: 0.5 * eta * eta,
                mean: eta,
                variance: 1.0,
            },
        })
    }

    /// `y * eta - K(eta)`, the part of the log-density that depends on `eta`.
    ///
    /// For Bernoulli responses this is `-log(1 + exp(-eta))` or
    /// `-log(1 + exp(eta))`, which keeps full relative precision when the fit
    /// drifts towards separation.
    pub fn log_kernel(&self, y: f64, eta: f64) -> Result<f64> {
        match self {
            Family::Bernoulli if y == 0.0 || y == 1.0 => {
                let s = if y == 1.0 { -eta } else { eta };
                ensure_finite("natural parameter", s)?;
                Ok(-softplus(s))
            }
            _ => {
                let c = self.cumulant(eta)?;
                Ok(y * eta - c.value)
            }
        }
    }

    /// Inverse of the mean map `K'`: the natural parameter whose mean is `mu`.
    pub fn natural_from_mean(&self, mu: f64) -> Result<f64> {
        ensure_finite("mean", mu)?;
        match self {
            Family::Poisson if mu > 0.0 => Ok(mu.ln()),
            Family::Bernoulli if mu > 0.0 && mu < 1.0 => Ok((mu / (1.0 - mu)).ln()),
            Family::GaussianUnitVar => Ok(mu),
            _ => Err(Error::Domain(format!(
                "mean {mu} is outside the mean space of the {} family",
                self.name()
            ))),
        }
    }

    /// Whether `y` lies in the support of the family.
    pub fn supports(&self, y: f64) -> bool {
        match self {
            Family::Poisson => y.is_finite() && y >= 0.0 && y.fract() == 0.0,
            Family::Bernoulli => y == 0.0 || y == 1.0,
            Family::GaussianUnitVar => y.is_finite(),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poisson" => Ok(Family::Poisson),
            "bernoulli" | "binomial" | "logistic" => Ok(Family::Bernoulli),
            "gaussian" | "normal" => Ok(Family::GaussianUnitVar),
            other => Err(Error::InvalidInput(format!("unknown family `{other}`"))),
        }
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `r(s)` and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkEval {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// Map from linear predictor to natural parameter.
///
/// Only the canonical link ships, but the GLM core consumes `r''` everywhere,
/// so adding a curved link only requires a new variant here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    /// `r(s) = s`.
    #[default]
    Canonical,
}

impl Link {
    pub fn name(&self) -> &'static str {
        match self {
            Link::Canonical => "canonical",
        }
    }

    pub fn eval(&self, s: f64) -> Result<LinkEval> {
        ensure_finite("linear predictor", s)?;
        Ok(match self {
            Link::Canonical => LinkEval {
                value: s,
                first: 1.0,
                second: 0.0,
            },
        })
    }

    /// `r^{-1}(eta)`.
    pub fn inverse(&self, eta: f64) -> Result<f64> {
        ensure_finite("natural parameter", eta)?;
        Ok(match self {
            Link::Canonical => eta,
        })
    }
}

impl std::str::FromStr for Link {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "canonical" => Ok(Link::Canonical),
            other => Err(Error::InvalidInput(format!("unknown link `{other}`"))),
        }
    }
}
