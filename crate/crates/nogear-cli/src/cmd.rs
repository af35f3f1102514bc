//! Subcommand implementations.

use std::path::{Path, PathBuf};

use clap::Args;

use nogear_core::diagnostics::{diagnose, DiagnosticsReport};
use nogear_core::estimate::{fit_cml, FitOptions};
use nogear_core::harness::{
    run_coverage_experiment, run_forecast_experiment, CoverageConfig, ExperimentConfig,
};
use nogear_core::inar::{InarFamily, InarModel};
use nogear_core::markov::ForecastDistribution;
use nogear_core::model::ModelParams;
use nogear_core::rng::RngSpec;
use nogear_core::CountSeries;

use crate::csvio;
use crate::schema::{
    parse_family, AcfPointJson, CoverageConfigFile, CoverageDocument, DiagnoseDocument,
    EvaluateConfig, EvaluateDocument, FitDocument, FitJson, ForecastDocument,
    ForecastHorizonJson, HppJson, LjungBoxJson, ModelSpec, RunManifest,
};
use crate::CliError;

fn write_json<T: serde::Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::usage(format!("serialization failed: {e}")))?;
    text.push('\n');
    csvio::write_file(path, &text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| CliError::input(format!("cannot parse {}: {e}", path.display())))
}

fn path_str(path: &Option<PathBuf>) -> Vec<String> {
    path.iter().map(|p| p.display().to_string()).collect()
}

// ---------------------------------------------------------------- simulate

/// Simulate a series from any supported model.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model family: nogear, nginar, ginar, or pinar.
    #[arg(long)]
    pub model: String,
    /// NoGeAR alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// NoGeAR beta.
    #[arg(long)]
    pub beta: Option<f64>,
    /// NoGeAR theta.
    #[arg(long)]
    pub theta: Option<f64>,
    /// NGINAR thinning parameter.
    #[arg(long = "alpha-ng")]
    pub alpha_ng: Option<f64>,
    /// NGINAR stationary mean.
    #[arg(long)]
    pub mu: Option<f64>,
    /// GINAR geometric parameter.
    #[arg(long)]
    pub p: Option<f64>,
    /// GINAR/PINAR binomial thinning probability.
    #[arg(long = "alpha-thin")]
    pub alpha_thin: Option<f64>,
    /// PINAR rate (stationary mean unless --lambda-innovation-mean).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Interpret --lambda as the innovation mean instead.
    #[arg(long, default_value_t = false)]
    pub lambda_innovation_mean: bool,
    /// Number of observations to emit.
    #[arg(long)]
    pub n: usize,
    /// RNG seed.
    #[arg(long)]
    pub seed: u64,
    /// RNG stream index.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Steps discarded before recording.
    #[arg(long = "burn-in", default_value_t = 0)]
    pub burn_in: usize,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn require(flag: &str, value: Option<f64>) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required for this model")))
}

impl SimulateArgs {
    fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let spec = match self.model.to_ascii_lowercase().as_str() {
            "nogear" => ModelSpec::Nogear {
                alpha: require("alpha", self.alpha)?,
                beta: require("beta", self.beta)?,
                theta: require("theta", self.theta)?,
            },
            "nginar" => ModelSpec::Nginar {
                alpha_ng: require("alpha-ng", self.alpha_ng)?,
                mu: require("mu", self.mu)?,
            },
            "ginar" => ModelSpec::Ginar {
                p: require("p", self.p)?,
                alpha_thin: require("alpha-thin", self.alpha_thin)?,
            },
            "pinar" => ModelSpec::Pinar {
                lambda: require("lambda", self.lambda)?,
                alpha_thin: require("alpha-thin", self.alpha_thin)?,
                lambda_is_innovation_mean: self.lambda_innovation_mean,
            },
            other => {
                return Err(CliError::usage(format!(
                    "unknown model `{other}` (expected nogear, nginar, ginar, or pinar)"
                )))
            }
        };
        Ok(spec)
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1".to_string()));
    }
    let model = args.model_spec()?.build()?;
    let series = model.simulate(args.n, RngSpec::new(args.seed, args.stream), args.burn_in);
    let csv = csvio::series_to_csv(&series);
    let summary = format!(
        "model={} n={} seed={} stream={} mean={:.4} variance={:.4} lag1_acf={:.4}",
        model.family().label(),
        series.len(),
        args.seed,
        args.stream,
        series.mean(),
        series.variance(),
        series.lag1_autocorrelation()
    );
    match &args.out {
        Some(path) => {
            csvio::write_file(path, &csv)?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => {
            print!("{csv}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

// --------------------------------------------------------------------- fit

/// Fit one family (or all of them) to a series by conditional maximum
/// likelihood.
#[derive(Debug, Args)]
pub struct FitArgs {
    /// Family to fit: nogear, nginar, ginar, pinar, or all.
    #[arg(long, default_value = "nogear")]
    pub model: String,
    /// Input series CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Output JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random restarts.
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    /// Simplex iteration cap.
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    /// Convergence tolerance on the objective spread.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

pub fn fit(args: &FitArgs) -> Result<(), CliError> {
    let series = csvio::read_series(&args.input)?;
    if series.len() < 20 {
        eprintln!(
            "warning: only {} observations; estimates will be unstable",
            series.len()
        );
    }
    let families: Vec<InarFamily> = if args.model.eq_ignore_ascii_case("all") {
        vec![InarFamily::NoGear, InarFamily::Nginar, InarFamily::Ginar, InarFamily::Pinar]
    } else {
        vec![parse_family(&args.model).ok_or_else(|| {
            CliError::usage(format!("unknown model `{}`", args.model))
        })?]
    };
    let opts = FitOptions {
        restarts: args.restarts,
        max_iter: args.max_iter,
        tol: args.tol,
        initial: None,
    };
    let mut fits: Vec<FitJson> = Vec::new();
    for family in families {
        let fit = fit_cml(family, &series, &opts)?;
        fits.push(FitJson::from_result(&fit));
    }
    fits.sort_by(|a, b| a.aic.partial_cmp(&b.aic).unwrap());

    println!("{:<10} {:>12} {:>10} {:>10} {:>10}  converged", "family", "loglik", "AIC", "BIC", "AICc");
    for f in &fits {
        println!(
            "{:<10} {:>12.4} {:>10.2} {:>10.2} {:>10}  {}",
            f.label,
            f.loglik,
            f.aic,
            f.bic,
            f.aicc.map_or("n/a".to_string(), |v| format!("{v:.2}")),
            if f.converged { "yes" } else { "no" }
        );
    }

    if let Some(out) = &args.out {
        let doc = FitDocument {
            manifest: RunManifest::capture("fit", &path_str(&args.out)),
            fits,
        };
        write_json(out, &doc)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

// ---------------------------------------------------------------- forecast

/// Coherent forecasts and HPP intervals from a fitted model.
#[derive(Debug, Args)]
pub struct ForecastArgs {
    /// Fit JSON produced by `fit` (the AIC-best entry is used).
    #[arg(long)]
    pub fit: PathBuf,
    /// Input series CSV; its last observation is the forecast origin.
    #[arg(long)]
    pub input: PathBuf,
    /// Horizons, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub horizons: Vec<usize>,
    /// Miscoverage level of the HPP interval.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Truncation bound of the forecast matrix.
    #[arg(long = "m-trunc", default_value_t = 200)]
    pub m_trunc: usize,
    /// Override the forecast origin.
    #[arg(long)]
    pub origin: Option<usize>,
    /// Output JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn trim_probs(fd: &ForecastDistribution, keep_at_least: usize) -> Vec<f64> {
    let mut end = fd.probs.len();
    let mut tail = 0.0;
    while end > keep_at_least + 1 {
        tail += fd.probs[end - 1];
        if tail >= 1e-12 {
            break;
        }
        end -= 1;
    }
    fd.probs[..end].to_vec()
}

pub fn forecast(args: &ForecastArgs) -> Result<(), CliError> {
    if args.horizons.is_empty() || args.horizons.contains(&0) {
        return Err(CliError::usage("horizons must be >= 1".to_string()));
    }
    if args.delta <= 0.0 || args.delta >= 1.0 {
        return Err(CliError::usage("--delta must lie in (0, 1)".to_string()));
    }
    let doc: FitDocument = read_json(&args.fit)?;
    let best = doc
        .fits
        .first()
        .ok_or_else(|| CliError::input("fit file holds no fits".to_string()))?;
    let model = best.model.build()?;
    let series = csvio::read_series(&args.input)?;
    let origin = args.origin.unwrap_or(*series.values.last().unwrap() as usize);
    let matrix = model.kernel().matrix(args.m_trunc)?;

    let mut horizons = Vec::new();
    println!(
        "origin={origin} model={} delta={}",
        model.family().label(),
        args.delta
    );
    println!(
        "{:>2} {:>9} {:>8} {:>7} {:>5}  {:<14} {:>9}",
        "h", "mean", "rounded", "median", "mode", "hpp", "coverage"
    );
    for &h in &args.horizons {
        let fd = matrix.h_step_distribution(origin, h)?;
        let pf = fd.point_forecasts();
        let hpp = fd.hpp_interval(args.delta);
        println!(
            "{:>2} {:>9.4} {:>8} {:>7} {:>5}  {:<14} {:>9.4}",
            h,
            pf.mean,
            pf.mean_rounded,
            pf.median,
            pf.mode,
            format!("{{{},...,{}}}", hpp.lower, hpp.upper),
            hpp.achieved_coverage
        );
        let keep = pf.median.max(pf.mode).max(hpp.upper);
        horizons.push(ForecastHorizonJson {
            horizon: h,
            mean: pf.mean,
            mean_rounded: pf.mean_rounded,
            median: pf.median,
            mode: pf.mode,
            hpp: HppJson {
                lower: hpp.lower,
                upper: hpp.upper,
                achieved_coverage: hpp.achieved_coverage,
                set_coverage: hpp.set_coverage,
                delta: hpp.delta,
            },
            probs: trim_probs(&fd, keep),
        });
    }

    if let Some(out) = &args.out {
        let doc = ForecastDocument {
            manifest: RunManifest::capture("forecast", &path_str(&args.out)),
            model: best.model,
            origin,
            m_trunc: args.m_trunc,
            horizons,
        };
        write_json(out, &doc)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

// ---------------------------------------------------------------- evaluate

/// Run a forecast-accuracy experiment from a config file.
#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Experiment config JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Report JSON path.
    #[arg(long = "out-json")]
    pub out_json: Option<PathBuf>,
    /// Flat CSV path (one row per family x horizon).
    #[arg(long = "out-csv")]
    pub out_csv: Option<PathBuf>,
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let config: EvaluateConfig = read_json(&args.config)?;
    let generator = config.generator.build()?;
    let fitted_families: Vec<InarFamily> = config
        .fitted_families
        .iter()
        .map(|name| {
            parse_family(name)
                .ok_or_else(|| CliError::usage(format!("unknown family `{name}` in config")))
        })
        .collect::<Result<_, _>>()?;
    let cfg = ExperimentConfig {
        generator,
        fitted_families,
        n_total: config.n_total,
        train_frac: config.train_frac,
        horizons: config.horizons.clone(),
        replications: config.replications,
        base_seed: RngSpec::new(config.seed, config.stream),
        m_trunc: config.m_trunc,
        fit_options: config.fit.to_options(),
    };
    let report = run_forecast_experiment(&cfg)?;

    println!(
        "{:<10} {:>2} {:>9} {:>9} {:>9} {:>9} {:>9} {:>5}",
        "family", "h", "prmse", "pmad", "ptp_mean", "ptp_med", "ptp_mode", "reps"
    );
    for cell in &report.cells {
        println!(
            "{:<10} {:>2} {:>9.4} {:>9.4} {:>9.2} {:>9.2} {:>9.2} {:>5}",
            cell.family.label(),
            cell.horizon,
            cell.prmse,
            cell.pmad,
            cell.ptp_mean,
            cell.ptp_median,
            cell.ptp_mode,
            cell.replications_used
        );
    }
    if report.failed_fits > 0 || report.skipped_points > 0 {
        println!(
            "failed_fits={} skipped_points={}",
            report.failed_fits, report.skipped_points
        );
    }

    let mut outputs = path_str(&args.out_json);
    outputs.extend(path_str(&args.out_csv));
    let doc = EvaluateDocument::from_report(
        RunManifest::capture("evaluate", &outputs),
        config,
        &report,
    );
    if let Some(path) = &args.out_json {
        write_json(path, &doc)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.out_csv {
        let rows: Vec<Vec<String>> = doc
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.family.clone(),
                    c.horizon.to_string(),
                    format!("{:.6}", c.prmse),
                    format!("{:.6}", c.pmad),
                    format!("{:.4}", c.ptp_mean),
                    format!("{:.4}", c.ptp_median),
                    format!("{:.4}", c.ptp_mode),
                    c.replications_used.to_string(),
                ]
            })
            .collect();
        let csv = csvio::table_to_csv(
            "family,horizon,prmse,pmad,ptp_mean,ptp_median,ptp_mode,replications_used",
            &rows,
        );
        csvio::write_file(path, &csv)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------- coverage

/// Run an HPP-interval coverage experiment from a config file.
#[derive(Debug, Args)]
pub struct CoverageArgs {
    /// Coverage config JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Report JSON path.
    #[arg(long = "out-json")]
    pub out_json: Option<PathBuf>,
    /// Flat CSV path (one row per set x n x horizon).
    #[arg(long = "out-csv")]
    pub out_csv: Option<PathBuf>,
}

pub fn coverage(args: &CoverageArgs) -> Result<(), CliError> {
    let config: CoverageConfigFile = read_json(&args.config)?;
    if config.param_sets.is_empty() {
        return Err(CliError::usage("param_sets must be non-empty".to_string()));
    }
    let cells_per_set = (config.n_list.len() * config.horizons.len()) as u64;
    let mut outputs = path_str(&args.out_json);
    outputs.extend(path_str(&args.out_csv));
    let mut doc = CoverageDocument {
        manifest: RunManifest::capture("coverage", &outputs),
        config: config.clone(),
        cells: Vec::new(),
    };
    println!(
        "{:>6} {:>6} {:>6} {:>6} {:>2} {:>9} {:>6} {:>6}",
        "alpha", "beta", "theta", "n", "h", "coverage", "used", "fail"
    );
    for (set_idx, triple) in config.param_sets.iter().enumerate() {
        let params = ModelParams::new(triple.alpha, triple.beta, triple.theta)?;
        let cfg = CoverageConfig {
            params,
            n_list: config.n_list.clone(),
            horizons: config.horizons.clone(),
            delta: config.delta,
            replications: config.replications,
            base_seed: RngSpec::new(
                config.seed,
                config.stream + set_idx as u64 * cells_per_set * config.replications as u64,
            ),
            m_trunc: config.m_trunc,
            fit: config.fit,
            fit_options: config.fit_options.to_options(),
        };
        let report = run_coverage_experiment(&cfg)?;
        for cell in &report.cells {
            println!(
                "{:>6} {:>6} {:>6} {:>6} {:>2} {:>9.4} {:>6} {:>6}",
                triple.alpha,
                triple.beta,
                triple.theta,
                cell.n,
                cell.horizon,
                cell.coverage,
                cell.replications_used,
                cell.failed
            );
        }
        doc.append_report(*triple, &report);
    }
    if let Some(path) = &args.out_json {
        write_json(path, &doc)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.out_csv {
        let rows: Vec<Vec<String>> = doc
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.alpha.to_string(),
                    c.beta.to_string(),
                    c.theta.to_string(),
                    c.n.to_string(),
                    c.horizon.to_string(),
                    format!("{:.6}", c.coverage),
                    c.replications_used.to_string(),
                    c.failed.to_string(),
                ]
            })
            .collect();
        let csv = csvio::table_to_csv(
            "alpha,beta,theta,n,horizon,coverage,replications_used,failed",
            &rows,
        );
        csvio::write_file(path, &csv)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------- diagnose

/// Residual, PIT, and jumps diagnostics for a fitted model.
#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// Fit JSON produced by `fit` (the AIC-best entry is used).
    #[arg(long)]
    pub fit: PathBuf,
    /// Input series CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Number of PIT histogram bins.
    #[arg(long = "pit-bins", default_value_t = 10)]
    pub pit_bins: usize,
    /// Largest residual ACF lag.
    #[arg(long = "max-lag", default_value_t = 20)]
    pub max_lag: usize,
    /// Ljung-Box pooled lag counts, comma separated.
    #[arg(long = "lb-lags", value_delimiter = ',', default_value = "2,3,4,8,12")]
    pub lb_lags: Vec<usize>,
    /// Report JSON path.
    #[arg(long = "out-json")]
    pub out_json: Option<PathBuf>,
    /// Prefix for plot-ready CSVs (writes `{prefix}_pit.csv`,
    /// `{prefix}_acf.csv`, `{prefix}_jumps.csv`, `{prefix}_residuals.csv`).
    #[arg(long = "out-csv-prefix")]
    pub out_csv_prefix: Option<PathBuf>,
}

fn run_diagnostics(
    model: &InarModel,
    series: &CountSeries,
    args: &DiagnoseArgs,
) -> Result<DiagnosticsReport, CliError> {
    // NoGeAR and NGINAR route through the closed-form moments; the binomial
    // thinning families use their kernels.
    let report = match model {
        InarModel::NoGear(p) => diagnose(p, series, args.pit_bins, args.max_lag, &args.lb_lags),
        InarModel::Nginar { mapped, .. } => {
            diagnose(mapped, series, args.pit_bins, args.max_lag, &args.lb_lags)
        }
        other => diagnose(&other.kernel(), series, args.pit_bins, args.max_lag, &args.lb_lags),
    }?;
    Ok(report)
}

pub fn diagnose_cmd(args: &DiagnoseArgs) -> Result<(), CliError> {
    if args.pit_bins < 2 {
        return Err(CliError::usage("--pit-bins must be at least 2".to_string()));
    }
    let doc: FitDocument = read_json(&args.fit)?;
    let best = doc
        .fits
        .first()
        .ok_or_else(|| CliError::input("fit file holds no fits".to_string()))?;
    let model = best.model.build()?;
    let series = csvio::read_series(&args.input)?;
    if series.len() < 3 {
        return Err(CliError::degenerate("series too short for diagnostics".to_string()));
    }
    let report = run_diagnostics(&model, &series, args)?;

    let n = report.residuals.len() as f64;
    let residual_mean = report.residuals.iter().sum::<f64>() / n;
    let residual_variance = report
        .residuals
        .iter()
        .map(|r| (r - residual_mean) * (r - residual_mean))
        .sum::<f64>()
        / n;

    println!("model={}", model.family().label());
    println!("residual mean={residual_mean:.4} variance={residual_variance:.4}");
    println!(
        "pit bins: [{}]",
        report
            .pit_bins
            .iter()
            .map(|b| format!("{b:.3}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "jumps: sigma={:.4} violations={}/{}",
        report.jumps.sigma_j,
        report.jumps.violations.len(),
        report.jumps.jumps.len()
    );
    for lb in &report.ljung_box {
        println!(
            "ljung-box m={:<2} Q={:<8.3} p={:.4}",
            lb.lags, lb.statistic, lb.p_value
        );
    }

    let mut outputs = path_str(&args.out_json);
    if let Some(prefix) = &args.out_csv_prefix {
        for suffix in ["pit", "acf", "jumps", "residuals"] {
            outputs.push(format!("{}_{suffix}.csv", prefix.display()));
        }
    }
    if let Some(path) = &args.out_json {
        let json = DiagnoseDocument {
            manifest: RunManifest::capture("diagnose", &outputs),
            model: best.model,
            residual_mean,
            residual_variance,
            pit_bins: report.pit_bins.clone(),
            acf: report
                .residual_acf
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| AcfPointJson { lag: i + 1, value: v })
                .collect(),
            acf_conf_bound: report.residual_acf.conf_bound,
            jumps_sigma: report.jumps.sigma_j,
            jump_limits: report.jumps.limits,
            jump_violations: report.jumps.violations.clone(),
            ljung_box: report
                .ljung_box
                .iter()
                .map(|lb| LjungBoxJson {
                    lags: lb.lags,
                    statistic: lb.statistic,
                    p_value: lb.p_value,
                })
                .collect(),
            ljung_box_df_correction: false,
        };
        write_json(path, &json)?;
        println!("wrote {}", path.display());
    }
    if let Some(prefix) = &args.out_csv_prefix {
        let bins = args.pit_bins as f64;
        let pit_rows: Vec<Vec<String>> = report
            .pit_bins
            .iter()
            .enumerate()
            .map(|(b, &mass)| {
                vec![
                    format!("{:.6}", b as f64 / bins),
                    format!("{:.6}", (b + 1) as f64 / bins),
                    format!("{mass:.8}"),
                ]
            })
            .collect();
        write_prefixed(prefix, "pit", "bin_lower,bin_upper,mass", &pit_rows)?;

        let acf_rows: Vec<Vec<String>> = report
            .residual_acf
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                vec![
                    (i + 1).to_string(),
                    format!("{v:.8}"),
                    format!("{:.8}", report.residual_acf.conf_bound),
                ]
            })
            .collect();
        write_prefixed(prefix, "acf", "lag,value,conf_bound", &acf_rows)?;

        let jump_rows: Vec<Vec<String>> = report
            .jumps
            .jumps
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                vec![
                    (i + 1).to_string(),
                    j.to_string(),
                    report.jumps.violations.contains(&i).to_string(),
                ]
            })
            .collect();
        write_prefixed(prefix, "jumps", "t,jump,violation", &jump_rows)?;

        let resid_rows: Vec<Vec<String>> = report
            .residuals
            .iter()
            .enumerate()
            .map(|(i, &r)| vec![(i + 1).to_string(), format!("{r:.8}")])
            .collect();
        write_prefixed(prefix, "residuals", "t,residual", &resid_rows)?;
    }
    Ok(())
}

fn write_prefixed(
    prefix: &Path,
    suffix: &str,
    header: &str,
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let path = PathBuf::from(format!("{}_{suffix}.csv", prefix.display()));
    csvio::write_file(&path, &csvio::table_to_csv(header, rows))?;
    println!("wrote {}", path.display());
    Ok(())
}
