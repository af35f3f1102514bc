//! Conditional maximum likelihood estimation and information criteria.
//!
//! The conditional log-likelihood of an INAR(1) model is the sum of log
//! one-step transition probabilities along the observed series. It is
//! maximized by a derivative-free simplex search over an unconstrained
//! reparameterization (logit for probabilities, log for positive rates);
//! candidate points that violate a family's ordering constraints are
//! rejected with a penalty. Moment-based initial values plus seeded random
//! restarts guard against local optima, and the whole fit is a pure
//! function of the series and options.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::inar::{InarFamily, InarModel};
use crate::math;
use crate::rng::{Rng, RngSpec};
use crate::series::CountSeries;

/// Guard against degenerate inputs blowing up the kernel tables.
const MAX_SUPPORTED_COUNT: u32 = 10_000;

/// Penalty objective value assigned to infeasible parameter points.
const PENALTY: f64 = 1e12;

/// Fixed seed for the restart jitter; fits must be reproducible functions
/// of their inputs.
const RESTART_SEED: u64 = 0x5EED_CA57;

/// Options controlling the simplex search.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Number of seeded random restarts on top of the deterministic starts.
    pub restarts: usize,
    /// Iteration cap per start.
    pub max_iter: usize,
    /// Convergence tolerance on the simplex objective spread.
    pub tol: f64,
    /// Optional extra starting point (e.g. a previous fit).
    pub initial: Option<FittedParams>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { restarts: 5, max_iter: 2000, tol: 1e-8, initial: None }
    }
}

/// Family-specific fitted parameter values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedParams {
    /// NoGeAR(1) triple.
    NoGear {
        /// Thinning zero-probability.
        alpha: f64,
        /// Thinning geometric decay.
        beta: f64,
        /// Marginal geometric parameter.
        theta: f64,
    },
    /// NGINAR(1) pair.
    Nginar {
        /// Negative-binomial thinning parameter.
        alpha_ng: f64,
        /// Stationary mean.
        mu: f64,
    },
    /// GINAR(1) pair.
    Ginar {
        /// Marginal geometric parameter.
        p: f64,
        /// Binomial thinning probability.
        alpha_thin: f64,
    },
    /// PINAR(1) pair (stationary-mean convention).
    Pinar {
        /// Stationary mean.
        lambda: f64,
        /// Binomial thinning probability.
        alpha_thin: f64,
    },
}

impl FittedParams {
    /// Family of this parameter record.
    pub fn family(&self) -> InarFamily {
        match self {
            FittedParams::NoGear { .. } => InarFamily::NoGear,
            FittedParams::Nginar { .. } => InarFamily::Nginar,
            FittedParams::Ginar { .. } => InarFamily::Ginar,
            FittedParams::Pinar { .. } => InarFamily::Pinar,
        }
    }

    /// Build the validated model; errors if the record violates the
    /// family's constraints.
    pub fn model(&self) -> Result<InarModel> {
        match *self {
            FittedParams::NoGear { alpha, beta, theta } => InarModel::nogear(alpha, beta, theta),
            FittedParams::Nginar { alpha_ng, mu } => InarModel::nginar(alpha_ng, mu),
            FittedParams::Ginar { p, alpha_thin } => InarModel::ginar(p, alpha_thin),
            FittedParams::Pinar { lambda, alpha_thin } => InarModel::pinar(lambda, alpha_thin),
        }
    }

    /// Raw parameter values in a fixed per-family order.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            FittedParams::NoGear { alpha, beta, theta } => vec![alpha, beta, theta],
            FittedParams::Nginar { alpha_ng, mu } => vec![alpha_ng, mu],
            FittedParams::Ginar { p, alpha_thin } => vec![p, alpha_thin],
            FittedParams::Pinar { lambda, alpha_thin } => vec![lambda, alpha_thin],
        }
    }

    fn to_unconstrained(self) -> Vec<f64> {
        let logit = |p: f64| math::ln(p / (1.0 - p));
        match self {
            FittedParams::NoGear { alpha, beta, theta } => {
                vec![logit(alpha), logit(beta), logit(theta)]
            }
            FittedParams::Nginar { alpha_ng, mu } => vec![logit(alpha_ng), math::ln(mu)],
            FittedParams::Ginar { p, alpha_thin } => vec![logit(p), logit(alpha_thin)],
            FittedParams::Pinar { lambda, alpha_thin } => {
                vec![math::ln(lambda), logit(alpha_thin)]
            }
        }
    }

    fn from_unconstrained(family: InarFamily, z: &[f64]) -> Self {
        let sigmoid = |z: f64| 1.0 / (1.0 + math::exp(-z));
        match family {
            InarFamily::NoGear => FittedParams::NoGear {
                alpha: sigmoid(z[0]),
                beta: sigmoid(z[1]),
                theta: sigmoid(z[2]),
            },
            InarFamily::Nginar => {
                FittedParams::Nginar { alpha_ng: sigmoid(z[0]), mu: math::exp(z[1]) }
            }
            InarFamily::Ginar => {
                FittedParams::Ginar { p: sigmoid(z[0]), alpha_thin: sigmoid(z[1]) }
            }
            InarFamily::Pinar => {
                FittedParams::Pinar { lambda: math::exp(z[0]), alpha_thin: sigmoid(z[1]) }
            }
        }
    }
}

/// Result of a conditional maximum likelihood fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Fitted family.
    pub family: InarFamily,
    /// Fitted parameter record.
    pub params: FittedParams,
    /// Maximized conditional log-likelihood.
    pub loglik: f64,
    /// Number of free parameters.
    pub k: usize,
    /// Effective sample size (number of conditional terms, n - 1).
    pub n_eff: usize,
    /// Akaike information criterion.
    pub aic: f64,
    /// Bayesian information criterion.
    pub bic: f64,
    /// Corrected AIC; `None` when `n_eff <= k + 1`.
    pub aicc: Option<f64>,
    /// Whether the best simplex met the tolerance before the iteration cap.
    pub converged: bool,
    /// Iterations used by the winning start.
    pub iterations: usize,
}

/// Conditional log-likelihood of `model` for `series`.
///
/// Returns a large negative surrogate (`-1e300`) when a required transition
/// probability underflows to zero, so optimizers see a finite ordering
/// instead of `-inf`.
pub fn cond_loglik(model: &InarModel, series: &CountSeries) -> Result<f64> {
    series.require_len(2)?;
    let maxv = series.max_value();
    if maxv > MAX_SUPPORTED_COUNT {
        return Err(Error::InvalidConfig(alloc::format!(
            "series maximum {maxv} exceeds supported bound {MAX_SUPPORTED_COUNT}"
        )));
    }
    let pairs = pair_counts(series);
    Ok(loglik_from_pairs(model, &pairs, maxv as usize))
}

/// Transition pair multiplicities, so repeated pairs cost one lookup.
fn pair_counts(series: &CountSeries) -> Vec<(u32, u32, u32)> {
    let mut pairs: Vec<(u32, u32)> =
        series.values.windows(2).map(|w| (w[0], w[1])).collect();
    pairs.sort_unstable();
    let mut out: Vec<(u32, u32, u32)> = Vec::new();
    for (y, x) in pairs {
        match out.last_mut() {
            Some(last) if last.0 == y && last.1 == x => last.2 += 1,
            _ => out.push((y, x, 1)),
        }
    }
    out
}

fn loglik_from_pairs(model: &InarModel, pairs: &[(u32, u32, u32)], maxv: usize) -> f64 {
    let rows = model.kernel().rows(maxv, maxv);
    let mut ll = 0.0;
    for &(y, x, count) in pairs {
        let p = rows[y as usize][x as usize];
        if p <= 0.0 {
            return -1e300;
        }
        ll += count as f64 * math::ln(p);
    }
    ll
}

/// AIC, BIC, and AICc from a log-likelihood.
///
/// `n_eff` is the number of conditional likelihood terms; AICc requires
/// `n_eff > k + 1`.
pub fn information_criteria(loglik: f64, k: usize, n_eff: usize) -> Result<(f64, f64, f64)> {
    if n_eff <= k + 1 {
        return Err(Error::AiccUndefined { n_eff, k });
    }
    let aic = -2.0 * loglik + 2.0 * k as f64;
    let bic = -2.0 * loglik + k as f64 * math::ln(n_eff as f64);
    let aicc = aic + (2 * k * (k + 1)) as f64 / (n_eff - k - 1) as f64;
    Ok((aic, bic, aicc))
}

/// Fit `family` to `series` by conditional maximum likelihood.
///
/// Short series (below 20 observations) are fitted anyway; callers that
/// care should warn. Constant series carry no transition information and
/// are rejected.
pub fn fit_cml(family: InarFamily, series: &CountSeries, opts: &FitOptions) -> Result<FitResult> {
    series.require_len(2)?;
    if series.is_constant() {
        return Err(Error::DegenerateSeries);
    }
    let maxv = series.max_value();
    if maxv > MAX_SUPPORTED_COUNT {
        return Err(Error::InvalidConfig(alloc::format!(
            "series maximum {maxv} exceeds supported bound {MAX_SUPPORTED_COUNT}"
        )));
    }
    let pairs = pair_counts(series);
    let maxv = maxv as usize;

    let objective = |z: &[f64]| -> f64 {
        let candidate = FittedParams::from_unconstrained(family, z);
        match candidate.model() {
            Ok(model) => -loglik_from_pairs(&model, &pairs, maxv),
            // Gentle slope keeps the simplex drifting back toward feasibility.
            Err(_) => PENALTY * (1.0 + z.iter().map(|v| v * v).sum::<f64>()),
        }
    };

    let starts = starting_points(family, series, opts);
    debug_assert!(!starts.is_empty());
    let mut best: Option<(Vec<f64>, f64, usize, bool)> = None;
    for start in &starts {
        let z0 = start.to_unconstrained();
        let run = nelder_mead(&objective, &z0, 0.4, opts.max_iter, opts.tol);
        let better = match &best {
            None => true,
            Some((_, best_f, _, _)) => run.1 < *best_f,
        };
        if better {
            best = Some(run);
        }
    }
    let (z_best, f_best, iterations, converged) = best.expect("at least one start");
    let params = FittedParams::from_unconstrained(family, &z_best);
    // A finite objective implies the decoded point validated.
    debug_assert!(params.model().is_ok());
    let loglik = -f_best;
    let k = family.param_count();
    let n_eff = series.len() - 1;
    let (aic, bic, aicc) = match information_criteria(loglik, k, n_eff) {
        Ok((aic, bic, aicc)) => (aic, bic, Some(aicc)),
        Err(_) => (
            -2.0 * loglik + 2.0 * k as f64,
            -2.0 * loglik + k as f64 * math::ln(n_eff as f64),
            None,
        ),
    };
    Ok(FitResult { family, params, loglik, k, n_eff, aic, bic, aicc, converged, iterations })
}

/// Deterministic moment-based starts, fixed anchors, the optional caller
/// start, and seeded jitter restarts.
fn starting_points(
    family: InarFamily,
    series: &CountSeries,
    opts: &FitOptions,
) -> Vec<FittedParams> {
    let mean = series.mean().max(0.05);
    let theta0 = (mean / (1.0 + mean)).clamp(0.02, 0.98);
    let rho = {
        let r = series.lag1_autocorrelation();
        if r.is_finite() {
            r.clamp(0.05, 0.9)
        } else {
            0.3
        }
    };

    let mut starts: Vec<FittedParams> = Vec::new();
    let push_valid = |candidate: FittedParams, starts: &mut Vec<FittedParams>| {
        if candidate.model().is_ok() {
            starts.push(candidate);
        }
    };

    match family {
        InarFamily::NoGear => {
            // omega = rho heuristic across a small beta grid.
            for beta0 in [0.15, 0.35, 0.55] {
                let alpha0 = 1.0 - rho * (1.0 - beta0);
                push_valid(
                    FittedParams::NoGear { alpha: alpha0, beta: beta0, theta: theta0 },
                    &mut starts,
                );
            }
            push_valid(
                FittedParams::NoGear { alpha: 0.6, beta: 0.4, theta: 0.75 },
                &mut starts,
            );
            push_valid(
                FittedParams::NoGear { alpha: 0.8, beta: 0.2, theta: 0.5 },
                &mut starts,
            );
        }
        InarFamily::Nginar => {
            let cap = 0.95 * theta0;
            push_valid(
                FittedParams::Nginar { alpha_ng: rho.min(cap).max(0.01), mu: mean },
                &mut starts,
            );
            push_valid(FittedParams::Nginar { alpha_ng: 0.3, mu: mean.max(0.5) }, &mut starts);
        }
        InarFamily::Ginar => {
            push_valid(FittedParams::Ginar { p: theta0, alpha_thin: rho }, &mut starts);
            push_valid(FittedParams::Ginar { p: 0.5, alpha_thin: 0.3 }, &mut starts);
        }
        InarFamily::Pinar => {
            push_valid(FittedParams::Pinar { lambda: mean, alpha_thin: rho }, &mut starts);
            push_valid(FittedParams::Pinar { lambda: 1.0, alpha_thin: 0.3 }, &mut starts);
        }
    }
    if let Some(initial) = opts.initial {
        if initial.family() == family && initial.model().is_ok() {
            starts.push(initial);
        }
    }
    if starts.is_empty() {
        // Unreachable for sane series, but keep the optimizer fed.
        starts.push(match family {
            InarFamily::NoGear => FittedParams::NoGear { alpha: 0.6, beta: 0.4, theta: 0.75 },
            InarFamily::Nginar => FittedParams::Nginar { alpha_ng: 0.3, mu: 1.0 },
            InarFamily::Ginar => FittedParams::Ginar { p: 0.5, alpha_thin: 0.3 },
            InarFamily::Pinar => FittedParams::Pinar { lambda: 1.0, alpha_thin: 0.3 },
        });
    }

    // Seeded jitter restarts around the first start, in unconstrained space.
    let base = starts[0].to_unconstrained();
    for restart in 0..opts.restarts {
        let mut rng = Rng::from_spec(RngSpec::new(RESTART_SEED, restart as u64));
        for _attempt in 0..20 {
            let z: Vec<f64> =
                base.iter().map(|v| v + 3.0 * (rng.uniform() - 0.5)).collect();
            let candidate = FittedParams::from_unconstrained(family, &z);
            if candidate.model().is_ok() {
                starts.push(candidate);
                break;
            }
        }
    }
    starts
}

/// Nelder-Mead simplex minimization.
///
/// Returns `(best_point, best_value, iterations, converged)`.
fn nelder_mead<F>(
    f: &F,
    start: &[f64],
    step: f64,
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, f64, usize, bool)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += step;
        let fp = f(&p);
        simplex.push((p, fp));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if (worst - best).abs() <= tol * (1.0 + best.abs()) {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(p, _)| p[j]).sum::<f64>() / dim as f64)
            .collect();
        let reflect: Vec<f64> = (0..dim)
            .map(|j| centroid[j] + (centroid[j] - simplex[dim].0[j]))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < simplex[0].1 {
            // Try expanding further along the same direction.
            let expand: Vec<f64> = (0..dim)
                .map(|j| centroid[j] + 2.0 * (centroid[j] - simplex[dim].0[j]))
                .collect();
            let f_expand = f(&expand);
            simplex[dim] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[dim - 1].1 {
            simplex[dim] = (reflect, f_reflect);
        } else {
            // Contract toward the centroid, outside or inside.
            let (towards, f_towards) = if f_reflect < simplex[dim].1 {
                (reflect.clone(), f_reflect)
            } else {
                (simplex[dim].0.clone(), simplex[dim].1)
            };
            let contract: Vec<f64> =
                (0..dim).map(|j| centroid[j] + 0.5 * (towards[j] - centroid[j])).collect();
            let f_contract = f(&contract);
            if f_contract < f_towards {
                simplex[dim] = (contract, f_contract);
            } else {
                // Shrink everything toward the best vertex.
                let best_point = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (value, &anchor) in entry.0.iter_mut().zip(&best_point) {
                        *value = anchor + 0.5 * (*value - anchor);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (simplex[0].0.clone(), simplex[0].1, iterations, converged)
}
