//! JSON schemas for configs, fits, forecasts, and reports.
//!
//! Every output document embeds a [`RunManifest`] echoing the exact command
//! and configuration that produced it, so any file can be regenerated
//! byte-for-byte.

use serde::{Deserialize, Serialize};

use nogear_core::estimate::{FitOptions, FitResult, FittedParams};
use nogear_core::harness::{AccuracyReport, CoverageReport};
use nogear_core::inar::{InarFamily, InarModel};

/// Provenance block embedded in every JSON output.
///
/// Holds everything needed to re-run the command exactly; deliberately
/// carries no timestamps or host paths so identical invocations produce
/// byte-identical files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand that produced the file.
    pub command: String,
    /// Argument vector as invoked (without the binary path).
    pub argv: Vec<String>,
    /// Crate version.
    pub version: String,
    /// Output paths written alongside this document.
    pub outputs: Vec<String>,
}

impl RunManifest {
    /// Capture the current invocation.
    pub fn capture(command: &str, outputs: &[String]) -> Self {
        Self {
            command: command.to_string(),
            argv: std::env::args().skip(1).collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: outputs.to_vec(),
        }
    }
}

/// Family-tagged model parameters, the wire form of every model in configs
/// and fit files.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelSpec {
    /// NoGeAR(1) triple.
    Nogear {
        alpha: f64,
        beta: f64,
        theta: f64,
    },
    /// NGINAR(1) pair.
    Nginar {
        alpha_ng: f64,
        mu: f64,
    },
    /// GINAR(1) pair.
    Ginar {
        p: f64,
        alpha_thin: f64,
    },
    /// PINAR(1) pair plus lambda convention.
    Pinar {
        lambda: f64,
        alpha_thin: f64,
        #[serde(default)]
        lambda_is_innovation_mean: bool,
    },
}

impl ModelSpec {
    /// Validate into a model.
    pub fn build(&self) -> nogear_core::Result<InarModel> {
        match *self {
            ModelSpec::Nogear { alpha, beta, theta } => InarModel::nogear(alpha, beta, theta),
            ModelSpec::Nginar { alpha_ng, mu } => InarModel::nginar(alpha_ng, mu),
            ModelSpec::Ginar { p, alpha_thin } => InarModel::ginar(p, alpha_thin),
            ModelSpec::Pinar { lambda, alpha_thin, lambda_is_innovation_mean } => {
                Ok(InarModel::Pinar(nogear_core::inar::PinarParams::with_convention(
                    lambda,
                    alpha_thin,
                    lambda_is_innovation_mean,
                )?))
            }
        }
    }

    /// Wire form of fitted parameters.
    pub fn from_fitted(params: &FittedParams) -> Self {
        match *params {
            FittedParams::NoGear { alpha, beta, theta } => {
                ModelSpec::Nogear { alpha, beta, theta }
            }
            FittedParams::Nginar { alpha_ng, mu } => ModelSpec::Nginar { alpha_ng, mu },
            FittedParams::Ginar { p, alpha_thin } => ModelSpec::Ginar { p, alpha_thin },
            FittedParams::Pinar { lambda, alpha_thin } => {
                ModelSpec::Pinar { lambda, alpha_thin, lambda_is_innovation_mean: false }
            }
        }
    }
}

/// Parse a family name as used on the command line.
pub fn parse_family(name: &str) -> Option<InarFamily> {
    match name.to_ascii_lowercase().as_str() {
        "nogear" => Some(InarFamily::NoGear),
        "nginar" => Some(InarFamily::Nginar),
        "ginar" => Some(InarFamily::Ginar),
        "pinar" => Some(InarFamily::Pinar),
        _ => None,
    }
}

/// Family name in config files.
pub fn family_name(family: InarFamily) -> &'static str {
    match family {
        InarFamily::NoGear => "nogear",
        InarFamily::Nginar => "nginar",
        InarFamily::Ginar => "ginar",
        InarFamily::Pinar => "pinar",
    }
}

/// Estimation options subset accepted in config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitOptionsSpec {
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_restarts() -> usize {
    5
}
fn default_max_iter() -> usize {
    2000
}
fn default_tol() -> f64 {
    1e-8
}

impl Default for FitOptionsSpec {
    fn default() -> Self {
        Self { restarts: 5, max_iter: 2000, tol: 1e-8 }
    }
}

impl FitOptionsSpec {
    pub fn to_options(&self) -> FitOptions {
        FitOptions {
            restarts: self.restarts,
            max_iter: self.max_iter,
            tol: self.tol,
            initial: None,
        }
    }
}

/// Config file for `evaluate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluateConfig {
    /// Data-generating model.
    pub generator: ModelSpec,
    /// Families fitted per replication.
    pub fitted_families: Vec<String>,
    /// Simulated length per replication.
    pub n_total: usize,
    /// Training fraction.
    #[serde(default = "default_train_frac")]
    pub train_frac: f64,
    /// Horizons scored on the test window.
    #[serde(default = "default_horizons")]
    pub horizons: Vec<usize>,
    /// Number of replications.
    pub replications: usize,
    /// Base seed.
    pub seed: u64,
    /// Base stream offset.
    #[serde(default)]
    pub stream: u64,
    /// Truncation bound for forecast matrices.
    #[serde(default = "default_m_trunc")]
    pub m_trunc: usize,
    /// Estimation options.
    #[serde(default)]
    pub fit: FitOptionsSpec,
}

fn default_train_frac() -> f64 {
    0.7
}
fn default_horizons() -> Vec<usize> {
    vec![1, 2]
}
fn default_m_trunc() -> usize {
    200
}

/// One NoGeAR parameter set inside a coverage config.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NogearTriple {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

/// Config file for `coverage`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageConfigFile {
    /// Parameter sets to sweep.
    pub param_sets: Vec<NogearTriple>,
    /// Training lengths.
    pub n_list: Vec<usize>,
    /// Horizons.
    #[serde(default = "default_horizons")]
    pub horizons: Vec<usize>,
    /// Nominal miscoverage.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Replications per cell.
    pub replications: usize,
    /// Base seed.
    pub seed: u64,
    /// Base stream offset.
    #[serde(default)]
    pub stream: u64,
    /// Truncation bound.
    #[serde(default = "default_m_trunc")]
    pub m_trunc: usize,
    /// Refit per replication (false = intervals from the true parameters).
    #[serde(default = "default_true")]
    pub fit: bool,
    /// Estimation options for fit mode.
    #[serde(default)]
    pub fit_options: FitOptionsSpec,
}

fn default_delta() -> f64 {
    0.05
}
fn default_true() -> bool {
    true
}

/// Fit result in wire form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitJson {
    /// Fitted model (family tag plus parameters).
    pub model: ModelSpec,
    /// Human-readable family label.
    pub label: String,
    /// Maximized conditional log-likelihood.
    pub loglik: f64,
    /// Parameter count.
    pub k: usize,
    /// Conditional terms used (n - 1).
    pub n_eff: usize,
    pub aic: f64,
    pub bic: f64,
    /// Undefined when `n_eff <= k + 1`.
    pub aicc: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl FitJson {
    pub fn from_result(fit: &FitResult) -> Self {
        Self {
            model: ModelSpec::from_fitted(&fit.params),
            label: fit.family.label().to_string(),
            loglik: fit.loglik,
            k: fit.k,
            n_eff: fit.n_eff,
            aic: fit.aic,
            bic: fit.bic,
            aicc: fit.aicc,
            converged: fit.converged,
            iterations: fit.iterations,
        }
    }
}

/// `fit` output document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDocument {
    pub manifest: RunManifest,
    /// Fits sorted by AIC (a single entry unless `--model all`).
    pub fits: Vec<FitJson>,
}

/// HPP interval in wire form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HppJson {
    pub lower: usize,
    pub upper: usize,
    pub achieved_coverage: f64,
    pub set_coverage: f64,
    pub delta: f64,
}

/// One horizon of a forecast document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastHorizonJson {
    pub horizon: usize,
    pub mean: f64,
    pub mean_rounded: usize,
    pub median: usize,
    pub mode: usize,
    pub hpp: HppJson,
    /// Forecast pmf over 0..probs.len(), trimmed of a trailing tail whose
    /// total mass is below 1e-12.
    pub probs: Vec<f64>,
}

/// `forecast` output document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastDocument {
    pub manifest: RunManifest,
    pub model: ModelSpec,
    /// Conditioning state (last observation unless overridden).
    pub origin: usize,
    pub m_trunc: usize,
    pub horizons: Vec<ForecastHorizonJson>,
}

/// One accuracy cell in wire form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AccuracyCellJson {
    pub family: String,
    pub horizon: usize,
    pub prmse: f64,
    pub pmad: f64,
    pub ptp_mean: f64,
    pub ptp_median: f64,
    pub ptp_mode: f64,
    pub replications_used: usize,
}

/// `evaluate` output document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluateDocument {
    pub manifest: RunManifest,
    pub config: EvaluateConfig,
    pub cells: Vec<AccuracyCellJson>,
    pub failed_fits: usize,
    pub skipped_points: usize,
}

impl EvaluateDocument {
    pub fn from_report(
        manifest: RunManifest,
        config: EvaluateConfig,
        report: &AccuracyReport,
    ) -> Self {
        let cells = report
            .cells
            .iter()
            .map(|c| AccuracyCellJson {
                family: family_name(c.family).to_string(),
                horizon: c.horizon,
                prmse: c.prmse,
                pmad: c.pmad,
                ptp_mean: c.ptp_mean,
                ptp_median: c.ptp_median,
                ptp_mode: c.ptp_mode,
                replications_used: c.replications_used,
            })
            .collect();
        Self {
            manifest,
            config,
            cells,
            failed_fits: report.failed_fits,
            skipped_points: report.skipped_points,
        }
    }
}

/// One coverage cell in wire form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageCellJson {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub n: usize,
    pub horizon: usize,
    pub coverage: f64,
    pub replications_used: usize,
    pub failed: usize,
}

/// `coverage` output document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageDocument {
    pub manifest: RunManifest,
    pub config: CoverageConfigFile,
    pub cells: Vec<CoverageCellJson>,
}

impl CoverageDocument {
    pub fn append_report(&mut self, triple: NogearTriple, report: &CoverageReport) {
        for cell in &report.cells {
            self.cells.push(CoverageCellJson {
                alpha: triple.alpha,
                beta: triple.beta,
                theta: triple.theta,
                n: cell.n,
                horizon: cell.horizon,
                coverage: cell.coverage,
                replications_used: cell.replications_used,
                failed: cell.failed,
            });
        }
    }
}

/// `diagnose` output document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnoseDocument {
    pub manifest: RunManifest,
    pub model: ModelSpec,
    /// Mean of the Pearson residuals.
    pub residual_mean: f64,
    /// Variance of the Pearson residuals.
    pub residual_variance: f64,
    pub pit_bins: Vec<f64>,
    pub acf: Vec<AcfPointJson>,
    pub acf_conf_bound: f64,
    pub jumps_sigma: f64,
    pub jump_limits: (f64, f64),
    pub jump_violations: Vec<usize>,
    pub ljung_box: Vec<LjungBoxJson>,
    /// Degrees-of-freedom convention: the chi-square df equals the pooled
    /// lag count with no correction for estimated parameters.
    pub ljung_box_df_correction: bool,
}

/// One residual autocorrelation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcfPointJson {
    pub lag: usize,
    pub value: f64,
}

/// One Ljung-Box test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LjungBoxJson {
    pub lags: usize,
    pub statistic: f64,
    pub p_value: f64,
}
