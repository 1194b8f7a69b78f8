use std::io::Write;
use std::path::Path;

use fdglm::lab::{
    boosting_bound, boosting_sim, dependent_mean_sim, dkw_check, kde_clt_check, pareto_sim, spacings_sim,
    st_petersburg_sim, BandwidthRule, Exponential, Kernel, ReferenceDistribution, SimConfig, SimReport,
    SpacingWeights, StdNormal, Uniform01,
};
use fdglm::{condition_report, fit_mle, wald_intervals, FitOptions, FitResult};
use nalgebra::DVector;

use crate::args::{
    DataArgs, DiagnoseArgs, Dist, FitArgs, KernelArg, OutputArgs, ReportFormat, SimArgs, SimFormat, Simulator,
    Weights,
};
use crate::dataset::{load_csv, DataError, DatasetSpec, LoadedData};
use crate::report::{FitReport, ModelInfo};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] fdglm::Error),
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(fdglm::Error::NotConverged { .. } | fdglm::Error::DomainEscape { .. }) => {
                EXIT_NOT_CONVERGED
            }
            _ => EXIT_INPUT,
        }
    }
}

fn dataset_spec(args: &DataArgs) -> DatasetSpec {
    DatasetSpec {
        path: args.data.clone(),
        response_column: args.response.clone(),
        covariate_columns: args.covariates.clone(),
        add_intercept: !args.no_intercept,
        na_policy: args.na_policy,
    }
}

fn load(args: &DataArgs) -> Result<LoadedData, CliError> {
    let data = load_csv(&dataset_spec(args))?;
    data.design.check_responses(args.family)?;
    Ok(data)
}

fn fit(args: &DataArgs, data: &LoadedData) -> Result<FitResult, CliError> {
    let opts = FitOptions {
        max_iterations: args.max_iter,
        ..FitOptions::default()
    };
    Ok(fit_mle(&data.design, args.family, args.link, &opts)?)
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let result = match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    };
    result.map_err(|source| CliError::Output {
        path: path.map_or_else(|| "stdout".into(), |p| p.display().to_string()),
        source,
    })
}

pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(CliError::Usage(format!("--level must lie in (0, 1), got {}", args.level)));
    }
    let d = &args.data;
    let data = load(d)?;
    let result = fit(d, &data)?;
    let intervals = if result.converged {
        Some(wald_intervals(&result, args.level)?)
    } else {
        None
    };
    let diagnostics = condition_report(&data.design, d.family, d.link, &result.theta_hat)?;
    let model = ModelInfo {
        family: d.family,
        link: d.link,
        response: d.response.clone(),
        data: d.data.display().to_string(),
        n_obs: data.design.n_obs(),
        rows_dropped: data.rows_dropped,
        level: args.level,
    };
    let report = FitReport::new(model, &data.parameter_names, &result, intervals, diagnostics);
    write_fit_report(&report, &args.output, out)?;
    if result.converged {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(
            err,
            "error: fit did not converge after {} iterations (max |score| {:e}); the MLE may not exist",
            result.iterations, result.final_grad_norm
        );
        Ok(EXIT_NOT_CONVERGED)
    }
}

fn write_fit_report(report: &FitReport, o: &OutputArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match o.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Table => report.to_table(usize::from(o.precision)),
    };
    emit(o.output.as_deref(), &text, out)
}

pub fn cmd_diagnose(args: &DiagnoseArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let d = &args.data;
    let data = load(d)?;
    let p = data.design.n_params();
    let theta0 = match &args.theta0 {
        Some(t) if t.len() != p => {
            return Err(CliError::Usage(format!("--theta0 has {} entries, the design has {p} parameters", t.len())))
        }
        Some(t) => DVector::from_column_slice(t),
        None => match fit(d, &data) {
            Ok(r) if r.converged => r.theta_hat,
            Ok(_) => {
                let _ = writeln!(err, "note: fit did not converge; diagnosing at theta0 = 0");
                DVector::zeros(p)
            }
            Err(e) => {
                let _ = writeln!(err, "note: fit failed ({e}); diagnosing at theta0 = 0");
                DVector::zeros(p)
            }
        },
    };
    let report = condition_report(&data.design, d.family, d.link, &theta0)?;
    if !report.positive_definite {
        let _ = writeln!(err, "warning: Z Z' is singular; the parameters are not identified");
    }
    if let Some(lev) = report.max_info_leverage.filter(|&l| l > 0.5) {
        let _ = writeln!(err, "warning: a single observation dominates the information (leverage {lev:.4})");
    }
    let text = match args.output.format {
        ReportFormat::Json => serde_json::to_string_pretty(&report).expect("report is serializable") + "\n",
        ReportFormat::Table => report.to_key_value(),
    };
    emit(args.output.output.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}

fn default_grid(sim: Simulator) -> Vec<usize> {
    match sim {
        Simulator::Stpetersburg | Simulator::Pareto => vec![1_000, 10_000, 100_000],
        Simulator::Spacings => vec![10, 100, 1_000],
        Simulator::Gc | Simulator::Dkw | Simulator::Dependent => vec![100, 1_000, 10_000],
        Simulator::KdeClt => vec![1_000, 10_000],
        Simulator::Boosting => vec![],
    }
}

fn default_eps(sim: Simulator) -> f64 {
    match sim {
        Simulator::Stpetersburg | Simulator::Pareto | Simulator::Spacings => 0.5,
        Simulator::Gc => 0.03,
        Simulator::Dkw | Simulator::Dependent => 0.1,
        Simulator::Boosting | Simulator::KdeClt => 0.05,
    }
}

fn reference(dist: Dist) -> &'static dyn ReferenceDistribution {
    match dist {
        Dist::Uniform => &Uniform01,
        Dist::Normal => &StdNormal,
        Dist::Exponential => &Exponential,
    }
}

pub fn cmd_sim(args: &SimArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let sim = args.simulator;
    let eps = args.eps.unwrap_or(default_eps(sim));
    let mut grid = match (&args.n_grid, args.n) {
        (Some(g), _) => g.clone(),
        (None, Some(n)) => vec![n],
        (None, None) => default_grid(sim),
    };
    if sim == Simulator::Boosting && grid.is_empty() {
        let n = boosting_bound(args.delta, eps)?;
        let _ = writeln!(err, "required votes for delta = {}, eps = {eps}: {n}", args.delta);
        grid = vec![usize::try_from(n).map_err(|_| CliError::Usage(format!("required n = {n} is too large")))?];
    }
    let cfg = SimConfig::new(args.seed, args.reps, grid, eps)?;
    let report: SimReport = match sim {
        Simulator::Stpetersburg => st_petersburg_sim(&cfg)?,
        Simulator::Pareto => pareto_sim(&cfg)?,
        Simulator::Spacings => {
            let w = match args.weights {
                Weights::Ones => SpacingWeights::Ones,
                Weights::Rank => SpacingWeights::Rank,
            };
            spacings_sim(w, &cfg)?
        }
        Simulator::Boosting => boosting_sim(args.delta, &cfg)?,
        Simulator::Gc | Simulator::Dkw => {
            let mut r = dkw_check(&cfg, reference(args.dist.unwrap_or(Dist::Uniform)))?;
            if sim == Simulator::Gc {
                r.simulator = "gc".into();
            }
            r
        }
        Simulator::KdeClt => {
            let rule = args.bandwidth_factor.map(BandwidthRule::fixed).unwrap_or_default();
            let kernel = match args.kernel {
                KernelArg::Gaussian => Kernel::Gaussian,
                KernelArg::Epanechnikov => Kernel::Epanechnikov,
            };
            kde_clt_check(reference(args.dist.unwrap_or(Dist::Normal)), &args.points, &cfg, rule, kernel)?
        }
        Simulator::Dependent => dependent_mean_sim(args.rho, &cfg)?,
    };
    if let Some(caps) = report.notes.get("cap_hits").filter(|&&c| c > 0.0) {
        let _ = writeln!(err, "note: {caps} draws hit the level cap");
    }
    let text = match args.format {
        SimFormat::Csv => report.to_csv(),
        SimFormat::Json => serde_json::to_string_pretty(&report).expect("report is serializable") + "\n",
    };
    emit(args.output.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}
