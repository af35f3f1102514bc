//! Comparator INAR(1) models behind a common kernel abstraction.
//!
//! Every INAR(1) law factors as "thinning survivors plus innovation": the
//! one-step transition is the convolution of the survivor distribution
//! (given the current state) with the innovation distribution. [`InarKernel`]
//! captures that decomposition for the NoGeAR(1) model and the three
//! comparators used in the forecasting experiments:
//!
//! * NGINAR - negative-binomial thinning with geometric marginal; an exact
//!   special case of NoGeAR(1) under `alpha = 1 - beta = 1/(1 + alpha_ng)`.
//! * GINAR - binomial thinning with geometric marginal (McKenzie).
//! * PINAR - binomial thinning with Poisson marginal (Al-Osh & Alzaid).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::markov::TransitionMatrix;
use crate::math;
use crate::model::ModelParams;
use crate::rng::{Rng, RngSpec};
use crate::series::CountSeries;

/// Model family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InarFamily {
    /// NoGeAR(1): inflated-parameter thinning, geometric marginal.
    NoGear,
    /// New geometric INAR(1).
    Nginar,
    /// Geometric INAR(1) with binomial thinning.
    Ginar,
    /// Poisson INAR(1) with binomial thinning.
    Pinar,
}

impl InarFamily {
    /// Human-readable label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            InarFamily::NoGear => "NoGeAR(1)",
            InarFamily::Nginar => "NGINAR",
            InarFamily::Ginar => "GINAR",
            InarFamily::Pinar => "PINAR",
        }
    }

    /// Number of free parameters.
    pub fn param_count(&self) -> usize {
        match self {
            InarFamily::NoGear => 3,
            _ => 2,
        }
    }
}

/// NGINAR(1) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NginarParams {
    /// Thinning parameter of the negative-binomial thinning operator.
    pub alpha_ng: f64,
    /// Stationary geometric mean.
    pub mu: f64,
}

impl NginarParams {
    /// Validate the native NGINAR ranges.
    pub fn new(alpha_ng: f64, mu: f64) -> Result<Self> {
        if !(alpha_ng > 0.0 && alpha_ng < 1.0) {
            return Err(Error::ConstraintViolation(String::from(
                "0 < alpha_ng < 1 violated",
            )));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::ConstraintViolation(String::from("mu > 0 violated")));
        }
        Ok(Self { alpha_ng, mu })
    }
}

/// Map NGINAR(1) parameters onto the NoGeAR(1) triple.
///
/// Under `alpha = 1 - beta = 1/(1 + alpha_ng)` and `theta = mu/(1 + mu)` the
/// NoGeAR(1) law coincides with NGINAR(1) exactly. The mapped triple must
/// still satisfy the NoGeAR validity constraints, which translates to the
/// native NGINAR condition `alpha_ng <= mu/(1 + mu)`; violations surface as
/// [`Error::ConstraintViolation`].
pub fn nginar_as_nogear(np: &NginarParams) -> Result<ModelParams> {
    let alpha = 1.0 / (1.0 + np.alpha_ng);
    let beta = 1.0 - alpha;
    let theta = np.mu / (1.0 + np.mu);
    ModelParams::new(alpha, beta, theta)
}

/// GINAR(1) parameters: geometric(p) marginal under binomial thinning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GinarParams {
    /// Parameter of the stationary geometric marginal.
    pub p: f64,
    /// Binomial thinning probability.
    pub alpha_thin: f64,
}

impl GinarParams {
    /// Validate ranges.
    pub fn new(p: f64, alpha_thin: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ConstraintViolation(String::from("0 < p < 1 violated")));
        }
        if !(alpha_thin > 0.0 && alpha_thin < 1.0) {
            return Err(Error::ConstraintViolation(String::from(
                "0 < alpha_thin < 1 violated",
            )));
        }
        Ok(Self { p, alpha_thin })
    }
}

/// PINAR(1) parameters.
///
/// The reported `lambda` is interpreted as the stationary mean by default
/// (innovations are Poisson with mean `lambda * (1 - alpha_thin)`); set
/// `lambda_is_innovation_mean` to adopt the alternative convention where
/// `lambda` is the innovation mean itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinarParams {
    /// Poisson rate parameter (see convention flag).
    pub lambda: f64,
    /// Binomial thinning probability.
    pub alpha_thin: f64,
    /// Convention switch for the meaning of `lambda`.
    pub lambda_is_innovation_mean: bool,
}

impl PinarParams {
    /// Validate ranges under the default (stationary-mean) convention.
    pub fn new(lambda: f64, alpha_thin: f64) -> Result<Self> {
        Self::with_convention(lambda, alpha_thin, false)
    }

    /// Validate ranges with an explicit `lambda` convention.
    pub fn with_convention(
        lambda: f64,
        alpha_thin: f64,
        lambda_is_innovation_mean: bool,
    ) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::ConstraintViolation(String::from("lambda > 0 violated")));
        }
        if !(alpha_thin > 0.0 && alpha_thin < 1.0) {
            return Err(Error::ConstraintViolation(String::from(
                "0 < alpha_thin < 1 violated",
            )));
        }
        Ok(Self { lambda, alpha_thin, lambda_is_innovation_mean })
    }

    /// Mean of the Poisson innovation law.
    pub fn innovation_mean(&self) -> f64 {
        if self.lambda_is_innovation_mean {
            self.lambda
        } else {
            self.lambda * (1.0 - self.alpha_thin)
        }
    }

    /// Stationary mean of the process.
    pub fn stationary_mean(&self) -> f64 {
        if self.lambda_is_innovation_mean {
            self.lambda / (1.0 - self.alpha_thin)
        } else {
            self.lambda
        }
    }
}

/// Binomial thinning survivor pmf: probability that `l` of `y` individuals
/// survive under independent retention probability `alpha_thin`.
pub fn binomial_survivor_pmf(alpha_thin: f64, y: usize, l: usize) -> f64 {
    if l > y {
        return 0.0;
    }
    // Multiplicative recurrence keeps every intermediate value in [0, 1].
    let mut pmf = math::powi(1.0 - alpha_thin, y as i32);
    for j in 0..l {
        pmf *= (y - j) as f64 / (j + 1) as f64 * (alpha_thin / (1.0 - alpha_thin));
    }
    pmf
}

/// Survivor distribution of the thinning operator given the current state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Survivor {
    /// Sum of `y` i.i.d. draws of the inflated-parameter variable `G*`.
    GstarSum {
        /// Probability that one summand is zero.
        alpha: f64,
        /// Geometric decay of the nonzero part.
        beta: f64,
    },
    /// Binomial thinning.
    Binomial {
        /// Retention probability.
        alpha_thin: f64,
    },
}

impl Survivor {
    /// Survivor pmf `Pr[l survivors | state y]`.
    pub fn pmf(&self, y: usize, l: usize) -> f64 {
        match *self {
            Survivor::Binomial { alpha_thin } => binomial_survivor_pmf(alpha_thin, y, l),
            Survivor::GstarSum { .. } => {
                if l > 0 && y == 0 {
                    0.0
                } else {
                    self.row(y, l)[l]
                }
            }
        }
    }

    /// Survivor pmf over `0..=l_max`, built by repeated convolution for the
    /// `G*` sum (an independent route from the closed-form double sum used
    /// by the model's own transition law).
    pub fn row(&self, y: usize, l_max: usize) -> Vec<f64> {
        match *self {
            Survivor::Binomial { alpha_thin } => {
                let mut out = vec![0.0; l_max + 1];
                let mut pmf = math::powi(1.0 - alpha_thin, y as i32);
                out[0] = pmf;
                for (l, slot) in out.iter_mut().enumerate().take(l_max.min(y) + 1).skip(1) {
                    pmf *= (y - l + 1) as f64 / l as f64 * (alpha_thin / (1.0 - alpha_thin));
                    *slot = pmf;
                }
                out
            }
            Survivor::GstarSum { alpha, beta } => {
                let gstar: Vec<f64> = (0..=l_max)
                    .map(|x| {
                        if x == 0 {
                            alpha
                        } else {
                            (1.0 - alpha) * (1.0 - beta) * math::powi(beta, x as i32 - 1)
                        }
                    })
                    .collect();
                let mut row = vec![0.0; l_max + 1];
                row[0] = 1.0;
                let mut next = vec![0.0; l_max + 1];
                for _ in 0..y {
                    for v in next.iter_mut() {
                        *v = 0.0;
                    }
                    for (l, &rl) in row.iter().enumerate() {
                        if rl == 0.0 {
                            continue;
                        }
                        for (g, &pg) in gstar.iter().enumerate().take(l_max + 1 - l) {
                            next[l + g] += rl * pg;
                        }
                    }
                    core::mem::swap(&mut row, &mut next);
                }
                row
            }
        }
    }

    /// Advance a survivor row from state `y-1` to state `y` in place
    /// (returns the new row). Used when filling whole matrices.
    fn advance(&self, prev: &[f64], y: usize, l_max: usize) -> Vec<f64> {
        match *self {
            // Binomial rows come from the closed form directly.
            Survivor::Binomial { .. } => self.row(y, l_max),
            Survivor::GstarSum { alpha, beta } => {
                let mut next = vec![0.0; l_max + 1];
                for (l, &pl) in prev.iter().enumerate() {
                    if pl == 0.0 {
                        continue;
                    }
                    next[l] += pl * alpha;
                    let mut tail = (1.0 - alpha) * (1.0 - beta);
                    let mut x = l + 1;
                    while x <= l_max {
                        next[x] += pl * tail;
                        tail *= beta;
                        x += 1;
                    }
                }
                next
            }
        }
    }
}

/// Innovation law of an INAR(1) family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Innovation {
    /// Two-component geometric mixture (NoGeAR / NGINAR).
    GeometricMixture {
        /// Weight on the geometric(theta) component.
        weight: f64,
        /// Marginal geometric parameter.
        theta: f64,
        /// Thinning geometric parameter.
        beta: f64,
    },
    /// Point mass at zero mixed with a geometric (GINAR).
    ZeroInflatedGeometric {
        /// Weight of the point mass at zero.
        zero_weight: f64,
        /// Geometric parameter of the nonzero component.
        p: f64,
    },
    /// Poisson innovations (PINAR).
    Poisson {
        /// Innovation mean.
        mean: f64,
    },
}

impl Innovation {
    /// Innovation pmf at `x`.
    pub fn pmf(&self, x: usize) -> f64 {
        match *self {
            Innovation::GeometricMixture { weight, theta, beta } => {
                weight * math::powi(theta, x as i32) * (1.0 - theta)
                    + (1.0 - weight) * math::powi(beta, x as i32) * (1.0 - beta)
            }
            Innovation::ZeroInflatedGeometric { zero_weight, p } => {
                let geom = (1.0 - p) * math::powi(p, x as i32);
                if x == 0 {
                    zero_weight + (1.0 - zero_weight) * geom
                } else {
                    (1.0 - zero_weight) * geom
                }
            }
            Innovation::Poisson { mean } => {
                // Recurrence from x = 0 keeps pointwise and row evaluations
                // bit-identical.
                let mut pmf = math::exp(-mean);
                for k in 0..x {
                    pmf *= mean / (k + 1) as f64;
                }
                pmf
            }
        }
    }

    /// Innovation pmf over `0..=x_max`.
    pub fn row(&self, x_max: usize) -> Vec<f64> {
        match *self {
            Innovation::Poisson { mean } => {
                let mut out = vec![0.0; x_max + 1];
                let mut pmf = math::exp(-mean);
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = pmf;
                    pmf *= mean / (k + 1) as f64;
                }
                out
            }
            _ => (0..=x_max).map(|x| self.pmf(x)).collect(),
        }
    }
}

/// One-step INAR(1) kernel as survivor-convolved-with-innovation.
#[derive(Debug, Clone)]
pub struct InarKernel {
    /// Model label carried into reports.
    pub label: String,
    /// Thinning survivor law.
    pub survivor: Survivor,
    /// Innovation law.
    pub innovation: Innovation,
}

impl InarKernel {
    /// Survivor pmf component.
    pub fn survivor_pmf(&self, y: usize, l: usize) -> f64 {
        self.survivor.pmf(y, l)
    }

    /// Innovation pmf component.
    pub fn innovation_pmf(&self, x: usize) -> f64 {
        self.innovation.pmf(x)
    }

    /// One-step transition probability by convolution.
    pub fn transition_pmf(&self, y: usize, x: usize) -> f64 {
        let surv = self.survivor.row(y, x);
        let innov = self.innovation.row(x);
        (0..=x).map(|l| surv[l] * innov[x - l]).sum()
    }

    /// Row `y` of the kernel for destinations `0..=x_max`.
    pub fn transition_row(&self, y: usize, x_max: usize) -> Vec<f64> {
        let surv = self.survivor.row(y, x_max);
        let innov = self.innovation.row(x_max);
        convolve(&surv, &innov, x_max)
    }

    /// All kernel rows for states `0..=y_max`, destinations `0..=x_max`.
    ///
    /// Survivor rows advance incrementally from state to state, so filling a
    /// whole matrix costs one convolution per row instead of `y` of them.
    pub fn rows(&self, y_max: usize, x_max: usize) -> Vec<Vec<f64>> {
        let innov = self.innovation.row(x_max);
        let mut surv = vec![0.0; x_max + 1];
        surv[0] = 1.0;
        let mut out = Vec::with_capacity(y_max + 1);
        out.push(convolve(&surv, &innov, x_max));
        for y in 1..=y_max {
            surv = self.survivor.advance(&surv, y, x_max);
            out.push(convolve(&surv, &innov, x_max));
        }
        out
    }

    /// Truncated transition matrix on `{0..=m}`.
    pub fn matrix(&self, m: usize) -> crate::error::Result<TransitionMatrix> {
        TransitionMatrix::from_raw_rows(self.rows(m, m))
    }
}

fn convolve(a: &[f64], b: &[f64], x_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; x_max + 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(x_max + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// A fully specified INAR(1) model: family, validated parameters, kernel,
/// and simulator.
#[derive(Debug, Clone)]
pub enum InarModel {
    /// NoGeAR(1) with validated parameters.
    NoGear(ModelParams),
    /// NGINAR(1); carries both the native parameters and the exact NoGeAR
    /// representation it delegates to.
    Nginar {
        /// Native parameters.
        params: NginarParams,
        /// Mapped NoGeAR(1) parameters.
        mapped: ModelParams,
    },
    /// GINAR(1).
    Ginar(GinarParams),
    /// PINAR(1).
    Pinar(PinarParams),
}

impl InarModel {
    /// NoGeAR(1) model from raw parameters.
    pub fn nogear(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        Ok(InarModel::NoGear(ModelParams::new(alpha, beta, theta)?))
    }

    /// NGINAR(1) model from native parameters (validates the mapping too).
    pub fn nginar(alpha_ng: f64, mu: f64) -> Result<Self> {
        let params = NginarParams::new(alpha_ng, mu)?;
        let mapped = nginar_as_nogear(&params)?;
        Ok(InarModel::Nginar { params, mapped })
    }

    /// GINAR(1) model.
    pub fn ginar(p: f64, alpha_thin: f64) -> Result<Self> {
        Ok(InarModel::Ginar(GinarParams::new(p, alpha_thin)?))
    }

    /// PINAR(1) model under the stationary-mean convention.
    pub fn pinar(lambda: f64, alpha_thin: f64) -> Result<Self> {
        Ok(InarModel::Pinar(PinarParams::new(lambda, alpha_thin)?))
    }

    /// Family tag.
    pub fn family(&self) -> InarFamily {
        match self {
            InarModel::NoGear(_) => InarFamily::NoGear,
            InarModel::Nginar { .. } => InarFamily::Nginar,
            InarModel::Ginar(_) => InarFamily::Ginar,
            InarModel::Pinar(_) => InarFamily::Pinar,
        }
    }

    /// One-step kernel of the model.
    pub fn kernel(&self) -> InarKernel {
        match self {
            InarModel::NoGear(p) => InarKernel {
                label: String::from(InarFamily::NoGear.label()),
                survivor: Survivor::GstarSum { alpha: p.alpha, beta: p.beta },
                innovation: Innovation::GeometricMixture {
                    weight: p.mix_weight,
                    theta: p.theta,
                    beta: p.beta,
                },
            },
            InarModel::Nginar { mapped, .. } => InarKernel {
                label: String::from(InarFamily::Nginar.label()),
                survivor: Survivor::GstarSum { alpha: mapped.alpha, beta: mapped.beta },
                innovation: Innovation::GeometricMixture {
                    weight: mapped.mix_weight,
                    theta: mapped.theta,
                    beta: mapped.beta,
                },
            },
            InarModel::Ginar(g) => InarKernel {
                label: String::from(InarFamily::Ginar.label()),
                survivor: Survivor::Binomial { alpha_thin: g.alpha_thin },
                innovation: Innovation::ZeroInflatedGeometric {
                    zero_weight: g.alpha_thin,
                    p: g.p,
                },
            },
            InarModel::Pinar(p) => InarKernel {
                label: String::from(InarFamily::Pinar.label()),
                survivor: Survivor::Binomial { alpha_thin: p.alpha_thin },
                innovation: Innovation::Poisson { mean: p.innovation_mean() },
            },
        }
    }

    /// Simulate `n` observations after `burn_in` discarded steps, starting
    /// from the stationary marginal. Honors the [`RngSpec`] determinism
    /// contract shared by every family.
    pub fn simulate(&self, n: usize, spec: RngSpec, burn_in: usize) -> CountSeries {
        match self {
            InarModel::NoGear(p) => {
                let mut s = p.simulate(n, spec, burn_in);
                s.name = String::from("nogear-sim");
                s
            }
            // Exact delegation: the mapped NoGeAR law IS the NGINAR law.
            InarModel::Nginar { mapped, .. } => {
                let mut s = mapped.simulate(n, spec, burn_in);
                s.name = String::from("nginar-sim");
                s
            }
            InarModel::Ginar(g) => {
                let mut rng = Rng::from_spec(spec);
                let step = |state: u32, rng: &mut Rng| -> u32 {
                    let survivors = rng.binomial(state, g.alpha_thin);
                    let innovation = if rng.bernoulli(g.alpha_thin) {
                        0
                    } else {
                        rng.geometric(g.p)
                    };
                    survivors + innovation
                };
                simulate_generic(n, burn_in, rng.geometric(g.p), step, &mut rng, "ginar-sim")
            }
            InarModel::Pinar(p) => {
                let mut rng = Rng::from_spec(spec);
                let innovation_mean = p.innovation_mean();
                let step = |state: u32, rng: &mut Rng| -> u32 {
                    rng.binomial(state, p.alpha_thin) + rng.poisson(innovation_mean)
                };
                let start = rng.poisson(p.stationary_mean());
                simulate_generic(n, burn_in, start, step, &mut rng, "pinar-sim")
            }
        }
    }

    /// Number of free parameters (for information criteria).
    pub fn param_count(&self) -> usize {
        self.family().param_count()
    }
}

fn simulate_generic<F>(
    n: usize,
    burn_in: usize,
    start: u32,
    step: F,
    rng: &mut Rng,
    name: &str,
) -> CountSeries
where
    F: Fn(u32, &mut Rng) -> u32,
{
    let mut values = Vec::with_capacity(n);
    let mut state = start;
    if burn_in == 0 {
        values.push(state);
    }
    let mut produced = if burn_in == 0 { 1 } else { 0 };
    let mut t = 1usize;
    while produced < n {
        state = step(state, rng);
        if t >= burn_in {
            values.push(state);
            produced += 1;
        }
        t += 1;
    }
    CountSeries::new(values, name)
}
