//! Seeded Monte Carlo experiments: forecast-accuracy comparisons across
//! model families and empirical coverage of HPP intervals.
//!
//! Replications are independent streams derived from one base seed, metrics
//! are computed per replication over the test window and then averaged, and
//! aggregation is order-independent, so reports are reproducible and safe
//! to parallelize externally.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::{fit_cml, FitOptions};
use crate::inar::{InarFamily, InarModel};
use crate::markov::{PointForecasts, TransitionMatrix};
use crate::math;
use crate::model::ModelParams;
use crate::rng::RngSpec;
use crate::series::CountSeries;

/// Configuration of a forecast-accuracy experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Data-generating model.
    pub generator: InarModel,
    /// Families fitted to each simulated training set.
    pub fitted_families: Vec<InarFamily>,
    /// Total simulated length (train + test).
    pub n_total: usize,
    /// Fraction of the series used for fitting.
    pub train_frac: f64,
    /// Forecast horizons evaluated on the test window.
    pub horizons: Vec<usize>,
    /// Number of replications.
    pub replications: usize,
    /// Base seed; replication `r` uses stream `base.stream + r`.
    pub base_seed: RngSpec,
    /// Truncation bound for forecast matrices.
    pub m_trunc: usize,
    /// Estimation options.
    pub fit_options: FitOptions,
}

impl ExperimentConfig {
    fn train_len(&self) -> usize {
        math::round_half_up(self.train_frac * self.n_total as f64) as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.train_frac > 0.0 && self.train_frac < 1.0) {
            return Err(Error::InvalidConfig("train_frac must lie in (0, 1)".into()));
        }
        if self.horizons.is_empty() || self.horizons.contains(&0) {
            return Err(Error::InvalidConfig("horizons must be non-empty and >= 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be >= 1".into()));
        }
        if self.fitted_families.is_empty() {
            return Err(Error::InvalidConfig("fitted_families must be non-empty".into()));
        }
        if self.m_trunc < 1 {
            return Err(Error::InvalidConfig("m_trunc must be >= 1".into()));
        }
        let train = self.train_len();
        let max_h = *self.horizons.iter().max().unwrap();
        if train < 2 || train >= self.n_total {
            return Err(Error::InvalidConfig("train split leaves no test data".into()));
        }
        if train < max_h {
            return Err(Error::InvalidConfig(
                "training window shorter than the largest horizon".into(),
            ));
        }
        Ok(())
    }
}

/// Accuracy metrics for one (family, horizon) cell, averaged over
/// replications.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyCell {
    /// Fitted family.
    pub family: InarFamily,
    /// Forecast horizon.
    pub horizon: usize,
    /// Average prediction root mean squared error (rounded-mean forecasts).
    pub prmse: f64,
    /// Average prediction mean absolute deviation (median forecasts).
    pub pmad: f64,
    /// Average percentage of exact hits by the rounded-mean forecast.
    pub ptp_mean: f64,
    /// Average percentage of exact hits by the median forecast.
    pub ptp_median: f64,
    /// Average percentage of exact hits by the mode forecast.
    pub ptp_mode: f64,
    /// Replications that contributed to this cell.
    pub replications_used: usize,
}

/// Aggregated accuracy report.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    /// One cell per (fitted family, horizon).
    pub cells: Vec<AccuracyCell>,
    /// Replication-family fits that failed and were excluded.
    pub failed_fits: usize,
    /// Forecast points skipped because the origin exceeded the truncation.
    pub skipped_points: usize,
    /// Total replications attempted.
    pub replications: usize,
}

impl AccuracyReport {
    /// Look up a cell by family and horizon.
    pub fn cell(&self, family: InarFamily, horizon: usize) -> Option<&AccuracyCell> {
        self.cells.iter().find(|c| c.family == family && c.horizon == horizon)
    }
}

/// Metrics from a single replication for one (family, horizon) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationMetrics {
    /// Fitted family.
    pub family: InarFamily,
    /// Forecast horizon.
    pub horizon: usize,
    /// Per-replication PRMSE over the test window.
    pub prmse: f64,
    /// Per-replication PMAD over the test window.
    pub pmad: f64,
    /// Exact-hit percentage of rounded-mean forecasts.
    pub ptp_mean: f64,
    /// Exact-hit percentage of median forecasts.
    pub ptp_median: f64,
    /// Exact-hit percentage of mode forecasts.
    pub ptp_mode: f64,
}

/// Prediction root mean squared error between actuals and (integer) point
/// forecasts.
pub fn prmse(actuals: &[u32], forecasts: &[u32]) -> Result<f64> {
    check_lengths(actuals, forecasts)?;
    let n = actuals.len() as f64;
    let sum: f64 = actuals
        .iter()
        .zip(forecasts)
        .map(|(&a, &f)| {
            let d = a as f64 - f as f64;
            d * d
        })
        .sum();
    Ok(math::sqrt(sum / n))
}

/// Prediction mean absolute deviation.
pub fn pmad(actuals: &[u32], forecasts: &[u32]) -> Result<f64> {
    check_lengths(actuals, forecasts)?;
    let n = actuals.len() as f64;
    let sum: f64 =
        actuals.iter().zip(forecasts).map(|(&a, &f)| (a as f64 - f as f64).abs()).sum();
    Ok(sum / n)
}

/// Percentage of exact predictions.
pub fn ptp(actuals: &[u32], forecasts: &[u32]) -> Result<f64> {
    check_lengths(actuals, forecasts)?;
    let hits = actuals.iter().zip(forecasts).filter(|(a, f)| a == f).count();
    Ok(100.0 * hits as f64 / actuals.len() as f64)
}

fn check_lengths(a: &[u32], b: &[u32]) -> Result<()> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(())
}

/// Outcome of one replication of the forecast experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    /// Metrics for every (family, horizon) whose fit succeeded.
    pub metrics: Vec<ReplicationMetrics>,
    /// Families whose fit (or matrix construction) failed here.
    pub failed_fits: usize,
    /// Forecast points skipped for out-of-range origins.
    pub skipped_points: usize,
}

/// Run a single replication: simulate, split, fit every family, forecast
/// the test window from observed origins, and score.
pub fn run_replication(cfg: &ExperimentConfig, replication: usize) -> Result<ReplicationOutcome> {
    cfg.validate()?;
    let spec = cfg.base_seed.with_stream(cfg.base_seed.stream + replication as u64);
    let series = cfg.generator.simulate(cfg.n_total, spec, 0);
    let train_len = cfg.train_len();
    let train = CountSeries::new(series.values[..train_len].to_vec(), "train");

    let mut metrics = Vec::new();
    let mut failed_fits = 0;
    let mut skipped_points = 0;

    for &family in &cfg.fitted_families {
        let fitted = match fit_cml(family, &train, &cfg.fit_options) {
            Ok(fit) => fit,
            Err(_) => {
                failed_fits += 1;
                continue;
            }
        };
        let model = match fitted.params.model() {
            Ok(m) => m,
            Err(_) => {
                failed_fits += 1;
                continue;
            }
        };
        let matrix = match model.kernel().matrix(cfg.m_trunc) {
            Ok(tm) => tm,
            Err(_) => {
                failed_fits += 1;
                continue;
            }
        };

        for &h in &cfg.horizons {
            let mut actuals: Vec<u32> = Vec::new();
            let mut means: Vec<u32> = Vec::new();
            let mut medians: Vec<u32> = Vec::new();
            let mut modes: Vec<u32> = Vec::new();
            let mut cache: BTreeMap<usize, PointForecasts> = BTreeMap::new();
            for t in train_len..cfg.n_total {
                let origin = series.values[t - h] as usize;
                if origin > cfg.m_trunc {
                    skipped_points += 1;
                    continue;
                }
                let pf = match cache.get(&origin) {
                    Some(pf) => *pf,
                    None => {
                        let fd = matrix.h_step_distribution(origin, h)?;
                        let pf = fd.point_forecasts();
                        cache.insert(origin, pf);
                        pf
                    }
                };
                actuals.push(series.values[t]);
                means.push(pf.mean_rounded as u32);
                medians.push(pf.median as u32);
                modes.push(pf.mode as u32);
            }
            if actuals.is_empty() {
                continue;
            }
            metrics.push(ReplicationMetrics {
                family,
                horizon: h,
                prmse: prmse(&actuals, &means)?,
                pmad: pmad(&actuals, &medians)?,
                ptp_mean: ptp(&actuals, &means)?,
                ptp_median: ptp(&actuals, &medians)?,
                ptp_mode: ptp(&actuals, &modes)?,
            });
        }
    }
    Ok(ReplicationOutcome { metrics, failed_fits, skipped_points })
}

/// Run the full forecast-accuracy experiment.
pub fn run_forecast_experiment(cfg: &ExperimentConfig) -> Result<AccuracyReport> {
    cfg.validate()?;
    let mut sums: BTreeMap<(usize, usize), ([f64; 5], usize)> = BTreeMap::new();
    let mut failed_fits = 0;
    let mut skipped_points = 0;
    for r in 0..cfg.replications {
        let outcome = run_replication(cfg, r)?;
        failed_fits += outcome.failed_fits;
        skipped_points += outcome.skipped_points;
        for m in outcome.metrics {
            let family_idx =
                cfg.fitted_families.iter().position(|&f| f == m.family).unwrap();
            let entry = sums.entry((family_idx, m.horizon)).or_insert(([0.0; 5], 0));
            entry.0[0] += m.prmse;
            entry.0[1] += m.pmad;
            entry.0[2] += m.ptp_mean;
            entry.0[3] += m.ptp_median;
            entry.0[4] += m.ptp_mode;
            entry.1 += 1;
        }
    }
    let cells = sums
        .into_iter()
        .map(|((family_idx, horizon), (s, count))| {
            let d = count as f64;
            AccuracyCell {
                family: cfg.fitted_families[family_idx],
                horizon,
                prmse: s[0] / d,
                pmad: s[1] / d,
                ptp_mean: s[2] / d,
                ptp_median: s[3] / d,
                ptp_mode: s[4] / d,
                replications_used: count,
            }
        })
        .collect();
    Ok(AccuracyReport {
        cells,
        failed_fits,
        skipped_points,
        replications: cfg.replications,
    })
}

/// Configuration of an HPP-interval coverage experiment.
#[derive(Debug, Clone)]
pub struct CoverageConfig {
    /// True data-generating parameters.
    pub params: ModelParams,
    /// Training lengths to sweep.
    pub n_list: Vec<usize>,
    /// Horizons to sweep.
    pub horizons: Vec<usize>,
    /// Nominal miscoverage (0.05 for 95% intervals).
    pub delta: f64,
    /// Replications per (n, horizon) cell.
    pub replications: usize,
    /// Base seed; cells and replications get disjoint streams.
    pub base_seed: RngSpec,
    /// Truncation bound.
    pub m_trunc: usize,
    /// When true, refit the model on each simulated training window; when
    /// false, build intervals from the true parameters (oracle mode, which
    /// isolates interval construction from estimation noise).
    pub fit: bool,
    /// Estimation options for fit mode.
    pub fit_options: FitOptions,
}

/// Empirical coverage for one (n, horizon) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCell {
    /// Training length.
    pub n: usize,
    /// Forecast horizon.
    pub horizon: usize,
    /// Fraction of replications whose interval contained the future value.
    pub coverage: f64,
    /// Replications contributing to the fraction.
    pub replications_used: usize,
    /// Replications dropped (failed fits or out-of-range origins).
    pub failed: usize,
}

/// Coverage experiment report.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    /// One cell per (n, horizon).
    pub cells: Vec<CoverageCell>,
    /// Nominal miscoverage.
    pub delta: f64,
    /// Whether parameters were refitted per replication.
    pub fitted: bool,
}

impl CoverageReport {
    /// Look up a cell by training length and horizon.
    pub fn cell(&self, n: usize, horizon: usize) -> Option<&CoverageCell> {
        self.cells.iter().find(|c| c.n == n && c.horizon == horizon)
    }
}

/// Run the coverage experiment: per cell and replication, simulate `n + h`
/// points, build the HPP interval for `X_{n+h}` given `X_n` (from fitted or
/// true parameters), and record containment.
pub fn run_coverage_experiment(cfg: &CoverageConfig) -> Result<CoverageReport> {
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(Error::InvalidConfig("delta must lie in (0, 1)".into()));
    }
    if cfg.replications == 0 || cfg.n_list.is_empty() || cfg.horizons.is_empty() {
        return Err(Error::InvalidConfig(
            "replications, n_list, and horizons must be non-empty".into(),
        ));
    }
    if cfg.horizons.contains(&0) {
        return Err(Error::InvalidConfig("horizons must be >= 1".into()));
    }

    // In oracle mode the matrix is shared by every cell.
    let true_matrix = if cfg.fit {
        None
    } else {
        Some(nogear_matrix(&cfg.params, cfg.m_trunc)?)
    };

    let mut cells = Vec::new();
    let mut cell_id = 0u64;
    for &n in &cfg.n_list {
        if n < 2 {
            return Err(Error::InvalidConfig("each n must be >= 2".into()));
        }
        for &h in &cfg.horizons {
            let mut contained = 0usize;
            let mut used = 0usize;
            let mut failed = 0usize;
            let mut interval_cache: BTreeMap<usize, crate::markov::HppInterval> =
                BTreeMap::new();
            for r in 0..cfg.replications {
                let stream = cfg.base_seed.stream
                    + cell_id * cfg.replications as u64
                    + r as u64;
                let spec = cfg.base_seed.with_stream(stream);
                let series = cfg.params.simulate(n + h, spec, 0);
                let origin = series.values[n - 1] as usize;
                let target = series.values[n - 1 + h] as usize;
                if origin > cfg.m_trunc {
                    failed += 1;
                    continue;
                }
                let interval = if let Some(tm) = &true_matrix {
                    match interval_cache.get(&origin) {
                        Some(iv) => *iv,
                        None => {
                            let iv = tm
                                .h_step_distribution(origin, h)?
                                .hpp_interval(cfg.delta);
                            interval_cache.insert(origin, iv);
                            iv
                        }
                    }
                } else {
                    let train = CountSeries::new(series.values[..n].to_vec(), "train");
                    let fit = match fit_cml(InarFamily::NoGear, &train, &cfg.fit_options) {
                        Ok(f) => f,
                        Err(_) => {
                            failed += 1;
                            continue;
                        }
                    };
                    let model = match fit.params.model() {
                        Ok(m) => m,
                        Err(_) => {
                            failed += 1;
                            continue;
                        }
                    };
                    let tm = match model.kernel().matrix(cfg.m_trunc) {
                        Ok(tm) => tm,
                        Err(_) => {
                            failed += 1;
                            continue;
                        }
                    };
                    tm.h_step_distribution(origin, h)?.hpp_interval(cfg.delta)
                };
                used += 1;
                if interval.contains(target) {
                    contained += 1;
                }
            }
            cells.push(CoverageCell {
                n,
                horizon: h,
                coverage: if used > 0 { contained as f64 / used as f64 } else { f64::NAN },
                replications_used: used,
                failed,
            });
            cell_id += 1;
        }
    }
    Ok(CoverageReport { cells, delta: cfg.delta, fitted: cfg.fit })
}

/// Truncated one-step matrix for NoGeAR parameters via the closed-form
/// transition law.
pub fn nogear_matrix(params: &ModelParams, m: usize) -> Result<TransitionMatrix> {
    let rows: Vec<Vec<f64>> = (0..=m).map(|y| params.transition_row(y, m)).collect();
    TransitionMatrix::from_raw_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            generator: InarModel::nogear(0.8, 0.2, 0.5).unwrap(),
            fitted_families: vec![InarFamily::NoGear, InarFamily::Nginar],
            n_total: 200,
            train_frac: 0.7,
            horizons: vec![1, 2],
            replications: 3,
            base_seed: RngSpec::new(2024, 0),
            m_trunc: 120,
            fit_options: FitOptions { restarts: 1, ..Default::default() },
        }
    }

    #[test]
    fn metric_hand_values() {
        assert_eq!(prmse(&[2, 4], &[2, 4]).unwrap(), 0.0);
        assert!((prmse(&[2, 4], &[3, 2]).unwrap() - (2.5f64).sqrt()).abs() < 1e-12);
        assert_eq!(pmad(&[1, 2, 3], &[1, 2, 3]).unwrap(), 0.0);
        assert!((pmad(&[0, 3], &[1, 1]).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(ptp(&[1, 2, 3], &[1, 2, 3]).unwrap(), 100.0);
        assert_eq!(ptp(&[1, 2], &[3, 4]).unwrap(), 0.0);
        assert!((ptp(&[1, 2, 3, 4], &[1, 0, 3, 0]).unwrap() - 50.0).abs() < 1e-12);
    }

    #[test]
    fn metric_length_mismatch() {
        assert!(matches!(
            prmse(&[1, 2], &[1]),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        ));
        assert!(matches!(pmad(&[], &[]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = small_config();
        let a = run_forecast_experiment(&cfg).unwrap();
        let b = run_forecast_experiment(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn experiment_report_shape() {
        let report = run_forecast_experiment(&small_config()).unwrap();
        // 2 families x 2 horizons.
        assert_eq!(report.cells.len(), 4);
        for cell in &report.cells {
            assert!(cell.prmse.is_finite() && cell.prmse >= 0.0);
            assert!(cell.pmad.is_finite() && cell.pmad >= 0.0);
            for v in [cell.ptp_mean, cell.ptp_median, cell.ptp_mode] {
                assert!((0.0..=100.0).contains(&v));
            }
        }
    }

    #[test]
    fn replication_order_does_not_matter() {
        let cfg = small_config();
        let forward: Vec<_> =
            (0..3).map(|r| run_replication(&cfg, r).unwrap()).collect();
        let backward: Vec<_> =
            (0..3).rev().map(|r| run_replication(&cfg, r).unwrap()).collect();
        let sum = |outs: &[ReplicationOutcome]| -> f64 {
            outs.iter()
                .flat_map(|o| o.metrics.iter())
                .map(|m| m.prmse + m.pmad + m.ptp_mode)
                .sum()
        };
        assert!((sum(&forward) - sum(&backward)).abs() < 1e-12);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = small_config();
        cfg.train_frac = 1.2;
        assert!(matches!(run_forecast_experiment(&cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = small_config();
        cfg.horizons = vec![0];
        assert!(run_forecast_experiment(&cfg).is_err());
        let mut cfg = small_config();
        cfg.replications = 0;
        assert!(run_forecast_experiment(&cfg).is_err());
    }

    #[test]
    fn nginar_generated_data_scores_both_geometric_families_alike() {
        // Data from NGINAR(0.67, 3); the NoGeAR and NGINAR fits describe
        // the same law there, so their PRMSE must agree closely.
        let cfg = ExperimentConfig {
            generator: InarModel::nginar(0.67, 3.0).unwrap(),
            fitted_families: vec![InarFamily::NoGear, InarFamily::Nginar],
            n_total: 200,
            train_frac: 0.7,
            horizons: vec![1],
            replications: 25,
            base_seed: RngSpec::new(20241, 0),
            m_trunc: 200,
            fit_options: FitOptions { restarts: 1, ..Default::default() },
        };
        let report = run_forecast_experiment(&cfg).unwrap();
        let nogear = report.cell(InarFamily::NoGear, 1).unwrap().prmse;
        let nginar = report.cell(InarFamily::Nginar, 1).unwrap().prmse;
        assert!(
            (nogear - nginar).abs() / nginar < 0.05,
            "PRMSE gap too wide: {nogear} vs {nginar}"
        );
    }

    #[test]
    fn oracle_coverage_meets_nominal_level() {
        let cfg = CoverageConfig {
            params: ModelParams::new(0.6, 0.4, 0.75).unwrap(),
            n_list: vec![50],
            horizons: vec![1, 2],
            delta: 0.05,
            replications: 2000,
            base_seed: RngSpec::new(7, 0),
            m_trunc: 200,
            fit: false,
            fit_options: FitOptions::default(),
        };
        let report = run_coverage_experiment(&cfg).unwrap();
        for cell in &report.cells {
            assert!(
                cell.coverage >= 0.94,
                "n={} h={} coverage {}",
                cell.n,
                cell.horizon,
                cell.coverage
            );
        }
    }

    #[test]
    fn coverage_is_deterministic() {
        let cfg = CoverageConfig {
            params: ModelParams::new(0.7, 0.3, 0.5).unwrap(),
            n_list: vec![40],
            horizons: vec![1],
            delta: 0.05,
            replications: 50,
            base_seed: RngSpec::new(11, 0),
            m_trunc: 150,
            fit: true,
            fit_options: FitOptions { restarts: 1, ..Default::default() },
        };
        let a = run_coverage_experiment(&cfg).unwrap();
        let b = run_coverage_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        let cell = &a.cells[0];
        assert!(cell.replications_used + cell.failed == 50);
    }
}
