//! Model-adequacy diagnostics: Pearson residuals, non-randomized PIT
//! histograms, jump control charts, sample autocorrelations, and the
//! Ljung-Box test.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::inar::InarKernel;
use crate::math;
use crate::model::ModelParams;
use crate::series::CountSeries;

/// Anything that can produce one-step predictive pmf rows.
///
/// [`ModelParams`] supplies the NoGeAR(1) closed forms; [`InarKernel`]
/// covers the comparator families through the survivor/innovation
/// convolution. The default conditional moments integrate the row with an
/// adaptively grown truncation bound.
pub trait OneStepRows {
    /// Predictive pmf of the next value over `0..=x_max` given state `y`.
    fn predictive_row(&self, y: usize, x_max: usize) -> Vec<f64>;

    /// Mean and variance of the one-step predictive distribution.
    fn conditional_moments(&self, y: usize) -> (f64, f64) {
        let mut x_max = 64.max(2 * y + 20);
        loop {
            let row = self.predictive_row(y, x_max);
            let total: f64 = row.iter().sum();
            if total >= 1.0 - 1e-10 || x_max >= 20_000 {
                let mean: f64 = row.iter().enumerate().map(|(x, &p)| x as f64 * p).sum();
                let var: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(x, &p)| {
                        let d = x as f64 - mean;
                        d * d * p
                    })
                    .sum();
                return (mean, var);
            }
            x_max *= 2;
        }
    }
}

impl OneStepRows for ModelParams {
    fn predictive_row(&self, y: usize, x_max: usize) -> Vec<f64> {
        self.transition_row(y, x_max)
    }

    fn conditional_moments(&self, y: usize) -> (f64, f64) {
        (self.cond_mean(y, 1), self.cond_var(y, 1))
    }
}

impl OneStepRows for InarKernel {
    fn predictive_row(&self, y: usize, x_max: usize) -> Vec<f64> {
        self.transition_row(y, x_max)
    }
}

/// Standardized one-step-ahead Pearson residuals
/// `(X_t - E[X_t | X_{t-1}]) / sd[X_t | X_{t-1}]` for `t = 2..n`.
pub fn pearson_residuals<K: OneStepRows>(model: &K, series: &CountSeries) -> Result<Vec<f64>> {
    series.require_len(2)?;
    let mut moments: Vec<Option<(f64, f64)>> = vec![None; series.max_value() as usize + 1];
    let residuals = series
        .values
        .windows(2)
        .map(|w| {
            let y = w[0] as usize;
            let (mean, var) =
                *moments[y].get_or_insert_with(|| model.conditional_moments(y));
            (w[1] as f64 - mean) / math::sqrt(var)
        })
        .collect();
    Ok(residuals)
}

/// Non-randomized probability integral transform histogram.
///
/// For each observation the conditional distribution function segment
/// `[F(x-1), F(x)]` spreads uniformly across `[0, 1]`; averaging those
/// piecewise-linear masses over equal-width bins yields a histogram that is
/// flat exactly when the predictive distributions are calibrated. The
/// returned bin masses sum to one.
pub fn pit_histogram<K: OneStepRows>(
    model: &K,
    series: &CountSeries,
    bins: usize,
) -> Result<Vec<f64>> {
    assert!(bins >= 2, "need at least two bins");
    series.require_len(2)?;
    let mut acc = vec![0.0; bins];
    for w in series.values.windows(2) {
        let y = w[0] as usize;
        let x = w[1] as usize;
        let row = model.predictive_row(y, x);
        let f_hi: f64 = row.iter().sum();
        let f_lo = f_hi - row[x];
        let pit = |u: f64| -> f64 {
            if f_hi <= f_lo {
                // Zero-probability observation: degenerate step at f_hi.
                if u >= f_hi {
                    1.0
                } else {
                    0.0
                }
            } else {
                ((u - f_lo) / (f_hi - f_lo)).clamp(0.0, 1.0)
            }
        };
        for (b, slot) in acc.iter_mut().enumerate() {
            let u0 = b as f64 / bins as f64;
            let u1 = (b + 1) as f64 / bins as f64;
            *slot += pit(u1) - pit(u0);
        }
    }
    let n = (series.len() - 1) as f64;
    for v in acc.iter_mut() {
        *v /= n;
    }
    Ok(acc)
}

/// Jumps control chart data.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpsChart {
    /// Jumps `J_t = X_t - X_{t-1}`; entry `i` belongs to series position
    /// `i + 1`.
    pub jumps: Vec<i64>,
    /// Sample standard deviation of the jumps (denominator n-1).
    pub sigma_j: f64,
    /// Control limits `(-3 sigma_j, +3 sigma_j)`.
    pub limits: (f64, f64),
    /// Indices into `jumps` falling outside the limits.
    pub violations: Vec<usize>,
}

/// Jumps `X_t - X_{t-1}` with `+-3 sigma` control limits.
pub fn jumps_chart(series: &CountSeries) -> Result<JumpsChart> {
    series.require_len(2)?;
    let jumps: Vec<i64> =
        series.values.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
    let n = jumps.len() as f64;
    let mean = jumps.iter().map(|&j| j as f64).sum::<f64>() / n;
    let sigma_j = if jumps.len() < 2 {
        0.0
    } else {
        math::sqrt(
            jumps
                .iter()
                .map(|&j| {
                    let d = j as f64 - mean;
                    d * d
                })
                .sum::<f64>()
                / (n - 1.0),
        )
    };
    let limit = 3.0 * sigma_j;
    let violations = jumps
        .iter()
        .enumerate()
        .filter(|(_, &j)| (j as f64).abs() > limit)
        .map(|(i, _)| i)
        .collect();
    Ok(JumpsChart { jumps, sigma_j, limits: (-limit, limit), violations })
}

/// Sample autocorrelations with a white-noise confidence bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Acf {
    /// Autocorrelations for lags `1..=max_lag`.
    pub values: Vec<f64>,
    /// `1.96 / sqrt(n)` white-noise band.
    pub conf_bound: f64,
}

/// Biased-denominator sample autocorrelations for lags `1..=max_lag`.
pub fn acf(xs: &[f64], max_lag: usize) -> Acf {
    assert!(max_lag < xs.len(), "max_lag must be below the series length");
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let denom: f64 = xs.iter().map(|&x| (x - mean) * (x - mean)).sum();
    let values = (1..=max_lag)
        .map(|k| {
            if denom == 0.0 {
                return 0.0;
            }
            let num: f64 =
                (k..n).map(|t| (xs[t] - mean) * (xs[t - k] - mean)).sum();
            num / denom
        })
        .collect();
    Acf { values, conf_bound: 1.96 / math::sqrt(n as f64) }
}

/// Ljung-Box portmanteau test result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBox {
    /// Number of lags pooled into the statistic.
    pub lags: usize,
    /// The Q statistic.
    pub statistic: f64,
    /// Upper chi-square tail probability on `lags` degrees of freedom (no
    /// fitted-parameter correction).
    pub p_value: f64,
}

/// Ljung-Box statistic over the first `m` autocorrelations.
pub fn ljung_box(xs: &[f64], m: usize) -> LjungBox {
    assert!(m >= 1 && m < xs.len(), "need 1 <= m < n");
    let n = xs.len() as f64;
    let rho = acf(xs, m);
    let statistic = n
        * (n + 2.0)
        * rho
            .values
            .iter()
            .enumerate()
            .map(|(i, &r)| r * r / (n - (i + 1) as f64))
            .sum::<f64>();
    let p_value = math::chi_square_sf(statistic, m);
    LjungBox { lags: m, statistic, p_value }
}

/// Bundle of every diagnostic for one fitted model and series.
#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    /// Pearson residuals (length n-1).
    pub residuals: Vec<f64>,
    /// Residual autocorrelations.
    pub residual_acf: Acf,
    /// PIT histogram bin masses.
    pub pit_bins: Vec<f64>,
    /// Jumps chart of the raw series.
    pub jumps: JumpsChart,
    /// Ljung-Box tests on the residuals for each requested lag count.
    pub ljung_box: Vec<LjungBox>,
}

/// Run the full diagnostic battery for a model against a series.
pub fn diagnose<K: OneStepRows>(
    model: &K,
    series: &CountSeries,
    pit_bins: usize,
    acf_max_lag: usize,
    ljung_box_lags: &[usize],
) -> Result<DiagnosticsReport> {
    let residuals = pearson_residuals(model, series)?;
    let max_lag = acf_max_lag.min(residuals.len().saturating_sub(1)).max(1);
    let residual_acf = acf(&residuals, max_lag);
    let pit = pit_histogram(model, series, pit_bins)?;
    let jumps = jumps_chart(series)?;
    let lb = ljung_box_lags
        .iter()
        .filter(|&&m| m >= 1 && m < residuals.len())
        .map(|&m| ljung_box(&residuals, m))
        .collect();
    Ok(DiagnosticsReport { residuals, residual_acf, pit_bins: pit, jumps, ljung_box: lb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{fit_cml, FitOptions};
    use crate::inar::InarFamily;
    use crate::rng::RngSpec;

    fn set_one() -> ModelParams {
        ModelParams::new(0.6, 0.4, 0.75).unwrap()
    }

    /// Predictive law that puts all mass on the current state.
    struct IdentityKernel;

    impl OneStepRows for IdentityKernel {
        fn predictive_row(&self, y: usize, x_max: usize) -> Vec<f64> {
            let mut row = vec![0.0; x_max + 1];
            if y <= x_max {
                row[y] = 1.0;
            }
            row
        }
    }

    #[test]
    fn residual_hand_value_for_zero_pair() {
        let p = set_one();
        let series = CountSeries::new(vec![0, 0], "pair");
        let r = pearson_residuals(&p, &series).unwrap();
        assert_eq!(r.len(), 1);
        let expect = (0.0 - p.mu_eps) / p.sigma2_eps.sqrt();
        assert!((r[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn residual_length_is_n_minus_one() {
        let p = set_one();
        let series = p.simulate(257, RngSpec::new(1, 0), 0);
        assert_eq!(pearson_residuals(&p, &series).unwrap().len(), 256);
    }

    #[test]
    fn residuals_calibrated_under_true_model() {
        let p = set_one();
        let series = p.simulate(10_000, RngSpec::new(8, 0), 0);
        let r = pearson_residuals(&p, &series).unwrap();
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let var = r.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / r.len() as f64;
        assert!(mean.abs() < 0.05, "residual mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "residual variance {var}");
    }

    #[test]
    fn kernel_moments_match_closed_form() {
        let p = set_one();
        let kernel = crate::inar::InarModel::NoGear(p).kernel();
        for y in [0usize, 3, 11] {
            let (m_closed, v_closed) = p.conditional_moments(y);
            let (m_kernel, v_kernel) = kernel.conditional_moments(y);
            assert!((m_closed - m_kernel).abs() < 1e-8);
            assert!((v_closed - v_kernel).abs() < 1e-6);
        }
    }

    #[test]
    fn ramp_residuals_eventually_positive() {
        let p = set_one();
        let series = CountSeries::new((0..40).collect(), "ramp");
        let r = pearson_residuals(&p, &series).unwrap();
        assert!(r.iter().skip(10).all(|&v| v > 0.0));
    }

    #[test]
    fn pit_bins_sum_to_one() {
        let p = set_one();
        let series = p.simulate(500, RngSpec::new(3, 0), 0);
        let bins = pit_histogram(&p, &series, 10).unwrap();
        assert!((bins.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pit_degenerate_model_spreads_uniformly() {
        // A point-mass predictive at the observed value makes the PIT
        // segment the whole unit interval.
        let series = CountSeries::new(vec![4, 4, 4, 4], "flat");
        let bins = pit_histogram(&IdentityKernel, &series, 2).unwrap();
        assert!((bins[0] - 0.5).abs() < 1e-12);
        assert!((bins[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pit_calibrated_is_flat() {
        let p = set_one();
        let series = p.simulate(5_000, RngSpec::new(12, 0), 0);
        let bins = pit_histogram(&p, &series, 10).unwrap();
        for (b, &mass) in bins.iter().enumerate() {
            assert!((mass - 0.1).abs() < 0.03, "bin {b} mass {mass}");
        }
    }

    #[test]
    fn pit_flags_misspecified_fit() {
        // Overdispersed data pushed through an equidispersed Poisson INAR
        // predictive shows up as a non-flat PIT histogram.
        let truth = ModelParams::new(0.55, 0.45, 0.83).unwrap();
        let series = truth.simulate(4_000, RngSpec::new(9, 0), 0);
        let fit = fit_cml(InarFamily::Pinar, &series, &FitOptions::default()).unwrap();
        let kernel = fit.params.model().unwrap().kernel();
        let bins = pit_histogram(&kernel, &series, 10).unwrap();
        let worst = bins.iter().map(|&m| (m - 0.1).abs()).fold(0.0, f64::max);
        assert!(worst > 0.05, "PIT unexpectedly flat: {bins:?}");
    }

    #[test]
    fn jumps_constant_series() {
        let series = CountSeries::new(vec![5; 10], "flat");
        let chart = jumps_chart(&series).unwrap();
        assert!(chart.jumps.iter().all(|&j| j == 0));
        assert_eq!(chart.sigma_j, 0.0);
        assert!(chart.violations.is_empty());
    }

    #[test]
    fn jumps_hand_computed_sigma() {
        // Jumps {6, -6}: mean 0, sample variance 72, sd 6*sqrt(2) ~ 8.49,
        // so |6| sits well inside +-3 sigma.
        let series = CountSeries::new(vec![0, 6, 0], "spike");
        let chart = jumps_chart(&series).unwrap();
        assert!((chart.sigma_j - 72f64.sqrt()).abs() < 1e-12);
        assert!(chart.violations.is_empty());
    }

    #[test]
    fn jumps_in_control_for_simulated_data() {
        // The geometric-tailed jumps land outside +-3 sigma around 1.5% of
        // the time (measured across seeds); the chart stays overwhelmingly
        // in control.
        let p = set_one();
        let series = p.simulate(5_000, RngSpec::new(77, 0), 0);
        let chart = jumps_chart(&series).unwrap();
        let frac = chart.violations.len() as f64 / chart.jumps.len() as f64;
        assert!(frac < 0.03, "violation fraction {frac}");
        assert!(frac > 0.0);
    }

    #[test]
    fn acf_alternating_is_minus_one() {
        let xs: Vec<f64> = (0..2000).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let a = acf(&xs, 2);
        assert!((a.values[0] + 1.0).abs() < 1e-2);
        assert!((a.values[1] - 1.0).abs() < 1e-2);
    }

    #[test]
    fn acf_white_noise_is_small() {
        let mut rng = crate::rng::Rng::from_spec(RngSpec::new(55, 0));
        let xs: Vec<f64> = (0..10_000).map(|_| rng.uniform() - 0.5).collect();
        let a = acf(&xs, 10);
        assert!(a.values.iter().all(|v| v.abs() < 0.05), "{:?}", a.values);
    }

    #[test]
    fn acf_of_simulated_nogear_matches_omega() {
        let p = set_one();
        let series = p.simulate(50_000, RngSpec::new(101, 0), 0);
        let xs: Vec<f64> = series.values.iter().map(|&v| v as f64).collect();
        let a = acf(&xs, 1);
        assert!((a.values[0] - p.omega).abs() < 0.02, "acf {}", a.values[0]);
    }

    #[test]
    fn ljung_box_detects_strong_dependence() {
        let xs: Vec<f64> = (0..500).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let lb = ljung_box(&xs, 5);
        assert!(lb.p_value < 1e-6);
    }

    #[test]
    fn ljung_box_statistic_monotone_in_lags() {
        let p = set_one();
        let series = p.simulate(400, RngSpec::new(4, 0), 0);
        let r = pearson_residuals(&p, &series).unwrap();
        let mut prev = 0.0;
        for m in 1..=12 {
            let lb = ljung_box(&r, m);
            assert!(lb.statistic >= prev - 1e-12);
            prev = lb.statistic;
        }
    }

    #[test]
    fn diagnose_bundles_everything() {
        let p = set_one();
        let series = p.simulate(300, RngSpec::new(6, 0), 0);
        let report = diagnose(&p, &series, 10, 20, &[2, 3, 4, 8, 12]).unwrap();
        assert_eq!(report.residuals.len(), 299);
        assert_eq!(report.pit_bins.len(), 10);
        assert_eq!(report.residual_acf.values.len(), 20);
        assert_eq!(report.ljung_box.len(), 5);
        assert!((report.pit_bins.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
