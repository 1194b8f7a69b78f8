//! Maximum-likelihood estimation with Wald inference for one-parameter
//! canonical exponential-family GLMs under fixed designs.
//!
//! * [`expfam`]: cumulant functions and links.
//! * [`glm`]: score, Hessian, Fisher information, Fisher scoring and Wald intervals.
//! * [`diagnostics`]: design eigenvalues, leverages and link ranges.
//! * [`lab`]: seeded Monte Carlo checks of the limit theorems behind consistency
//!   and asymptotic normality.
//!
//! ```
//! use fdglm::{fit_mle, wald_intervals, Family, FitOptions, FixedDesign, Link};
//!
//! let design = FixedDesign::from_observations(&[vec![1.0], vec![1.0], vec![1.0]], &[1.0, 2.0, 3.0])?;
//! let fit = fit_mle(&design, Family::Poisson, Link::Canonical, &FitOptions::default())?;
//! assert!((fit.theta_hat[0] - 2f64.ln()).abs() < 1e-10);
//! let ci = wald_intervals(&fit, 0.95)?;
//! assert!(ci[0].contains(2f64.ln()));
//! # Ok::<(), fdglm::Error>(())
//! ```

pub mod diagnostics;
mod error;
pub mod expfam;
pub mod glm;
pub mod lab;

pub use diagnostics::{condition_report, growth_curve, ConditionReport};
pub use error::{Error, Result};
pub use expfam::{Cumulant, Family, Link, LinkEval};
pub use glm::{
    fit_mle, hessian, information, log_likelihood, normal_quantile, score, wald_intervals, FitOptions,
    FitResult, FixedDesign, HessianParts, Init, WaldInterval,
};

// Compile and run the guide's code listings as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    mod fitting {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/laws.md")]
    mod laws {}
    #[doc = include_str!("../../../book/src/edf.md")]
    mod edf {}
    #[doc = include_str!("../../../book/src/kde.md")]
    mod kde {}
}
