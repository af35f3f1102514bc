//! Exact probability laws, moments, and simulation for the NoGeAR(1)
//! process.
//!
//! NoGeAR(1) is an INAR(1) model for overdispersed counts: the next value is
//! a random thinning of the current one plus an independent innovation,
//!
//! ```text
//! X_t = thin(X_{t-1}) + eps_t
//! ```
//!
//! where `thin(y)` is the sum of `y` i.i.d. draws of an inflated-parameter
//! variable `G*` governed by `(alpha, beta)`, and the innovations follow a
//! two-component geometric mixture chosen so that the stationary marginal is
//! geometric with parameter `theta`. All geometric laws in this crate live on
//! `{0, 1, 2, ...}` with pmf `(1-q) q^x`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::{Rng, RngSpec};
use crate::series::CountSeries;

/// Default truncation bound for tail sums and transition matrices.
pub const DEFAULT_TRUNCATION: usize = 200;

/// Validated NoGeAR(1) parameters with derived quantities.
///
/// Constraints: `0 < beta < alpha < 1`, `beta < theta < 1`, and
/// `beta <= alpha * theta`. The last two force the innovation mixture weight
/// into `[0, 1]` so the innovation law is a genuine pmf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Probability that a thinning summand `G*` is zero.
    pub alpha: f64,
    /// Geometric decay of the nonzero part of `G*`.
    pub beta: f64,
    /// Parameter of the stationary geometric marginal.
    pub theta: f64,
    /// Thinning mean `(1-alpha)/(1-beta)`; plays the AR(1) coefficient role.
    pub omega: f64,
    /// Innovation mixture weight `(alpha*theta - beta)/(theta - beta)`.
    pub mix_weight: f64,
    /// Innovation mean.
    pub mu_eps: f64,
    /// Innovation variance.
    pub sigma2_eps: f64,
}

impl ModelParams {
    /// Validate raw parameters and populate the derived fields.
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        fn fail(msg: &str) -> Error {
            Error::ConstraintViolation(alloc::string::String::from(msg))
        }
        if !alpha.is_finite() || !beta.is_finite() || !theta.is_finite() {
            return Err(fail("parameters must be finite"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(fail("0 < alpha < 1 violated"));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(fail("0 < beta < 1 violated"));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(fail("0 < theta < 1 violated"));
        }
        if beta >= alpha {
            return Err(fail("beta < alpha violated"));
        }
        if beta >= theta {
            return Err(fail("beta < theta violated"));
        }
        if beta > alpha * theta {
            return Err(fail("beta <= alpha*theta violated"));
        }
        let omega = (1.0 - alpha) / (1.0 - beta);
        let mix_weight = (alpha * theta - beta) / (theta - beta);
        let geom_mean = |q: f64| q / (1.0 - q);
        let geom_second = |q: f64| q * (1.0 + q) / ((1.0 - q) * (1.0 - q));
        let mu_eps = mix_weight * geom_mean(theta) + (1.0 - mix_weight) * geom_mean(beta);
        let second = mix_weight * geom_second(theta) + (1.0 - mix_weight) * geom_second(beta);
        let sigma2_eps = second - mu_eps * mu_eps;
        Ok(Self { alpha, beta, theta, omega, mix_weight, mu_eps, sigma2_eps })
    }

    /// Pmf of the thinning summand `G*`: `alpha` at zero, geometric tail
    /// `(1-alpha)(1-beta) beta^(x-1)` for `x >= 1`.
    pub fn gstar_pmf(&self, x: usize) -> f64 {
        if x == 0 {
            self.alpha
        } else {
            (1.0 - self.alpha) * (1.0 - self.beta) * math::powi(self.beta, x as i32 - 1)
        }
    }

    /// Mean of `G*`, equal to `omega`.
    pub fn gstar_mean(&self) -> f64 {
        self.omega
    }

    /// Variance of `G*`: `(1-alpha)(alpha+beta)/(1-beta)^2`.
    pub fn gstar_variance(&self) -> f64 {
        (1.0 - self.alpha) * (self.alpha + self.beta) / ((1.0 - self.beta) * (1.0 - self.beta))
    }

    /// Innovation pmf: mixture of geometric(theta) and geometric(beta).
    pub fn innovation_pmf(&self, x: usize) -> f64 {
        let w = self.mix_weight;
        w * math::powi(self.theta, x as i32) * (1.0 - self.theta)
            + (1.0 - w) * math::powi(self.beta, x as i32) * (1.0 - self.beta)
    }

    /// Innovation distribution function at `x`.
    pub fn innovation_cdf(&self, x: usize) -> f64 {
        let w = self.mix_weight;
        w * (1.0 - math::powi(self.theta, x as i32 + 1))
            + (1.0 - w) * (1.0 - math::powi(self.beta, x as i32 + 1))
    }

    /// Innovation mean and variance `(mu_eps, sigma2_eps)`.
    pub fn innovation_moments(&self) -> (f64, f64) {
        (self.mu_eps, self.sigma2_eps)
    }

    /// Stationary marginal pmf: geometric(theta), `(1-theta) theta^x`.
    pub fn marginal_pmf(&self, x: usize) -> f64 {
        (1.0 - self.theta) * math::powi(self.theta, x as i32)
    }

    /// Stationary marginal distribution function at `x`.
    pub fn marginal_cdf(&self, x: usize) -> f64 {
        1.0 - math::powi(self.theta, x as i32 + 1)
    }

    /// Stationary mean `theta/(1-theta)`.
    pub fn marginal_mean(&self) -> f64 {
        self.theta / (1.0 - self.theta)
    }

    /// Pmf of the thinning sum `S_y = G*_1 + ... + G*_y` for `m = 0..=m_max`.
    ///
    /// Computed in closed form: the number `j` of nonzero summands is
    /// binomial(y, 1-alpha) and, given `j >= 1` of them, their total is `j`
    /// plus a negative-binomial(j, beta) count. All factors stay in `[0, 1]`
    /// so the recurrences are overflow-safe for any practical `y`.
    fn thinning_sum_pmf(&self, y: usize, m_max: usize) -> Vec<f64> {
        let mut out = vec![0.0; m_max + 1];
        out[0] = math::powi(self.alpha, y as i32);
        if y == 0 {
            return out; // point mass at zero
        }
        let succ = 1.0 - self.alpha;
        // binom[j] = C(y, j) (1-alpha)^j alpha^(y-j), built incrementally.
        let mut binom = math::powi(self.alpha, y as i32);
        for j in 1..=y.min(m_max) {
            binom *= (y - j + 1) as f64 / j as f64 * (succ / self.alpha);
            // nb = C(m-1, j-1) (1-beta)^j beta^(m-j), starting at m = j.
            let mut nb = math::powi(1.0 - self.beta, j as i32);
            let mut m = j;
            while m <= m_max {
                out[m] += binom * nb;
                nb *= self.beta * m as f64 / (m - j + 1) as f64;
                m += 1;
            }
        }
        out
    }

    /// One-step transition probability `Pr[X_{t+1} = x | X_t = y]`.
    ///
    /// The four cases: from state 0 the next value is a pure innovation
    /// (`1 - alpha*theta` at zero); from `y >= 1` the thinning survivors
    /// convolve with the innovation through the binomial/negative-binomial
    /// double sum.
    pub fn transition_pmf(&self, y: usize, x: usize) -> f64 {
        match (y, x) {
            (0, 0) => 1.0 - self.alpha * self.theta,
            (0, x) => self.innovation_pmf(x),
            (y, 0) => math::powi(self.alpha, y as i32) * (1.0 - self.alpha * self.theta),
            (y, x) => {
                let s = self.thinning_sum_pmf(y, x);
                let mut total = s[0] * self.innovation_pmf(x);
                for (m, &sm) in s.iter().enumerate().skip(1) {
                    total += sm * self.innovation_pmf(x - m);
                }
                total
            }
        }
    }

    /// Row `y` of the one-step kernel for `x = 0..=x_max`, computed as one
    /// convolution of the thinning-sum law with the innovation law.
    pub fn transition_row(&self, y: usize, x_max: usize) -> Vec<f64> {
        let s = self.thinning_sum_pmf(y, x_max);
        let eps: Vec<f64> = (0..=x_max).map(|x| self.innovation_pmf(x)).collect();
        let mut row = vec![0.0; x_max + 1];
        for (m, &sm) in s.iter().enumerate() {
            if sm == 0.0 {
                continue;
            }
            for x in m..=x_max {
                row[x] += sm * eps[x - m];
            }
        }
        row
    }

    /// Two-step transition probability with tail sums truncated at `trunc`.
    ///
    /// This is the closed-form route (Chapman-Kolmogorov expanded through
    /// the one-step law); the independent check is squaring the truncated
    /// one-step matrix. For sweeping many origins use [`TwoStepTable`].
    pub fn two_step_pmf(&self, y: usize, x: usize, trunc: usize) -> f64 {
        TwoStepTable::new(self, trunc, y, x).pmf(y, x)
    }

    /// Conditional mean of `X_{t+h}` given `X_t = y`.
    pub fn cond_mean(&self, y: usize, h: usize) -> f64 {
        let wh = math::powi(self.omega, h as i32);
        wh * y as f64 + (1.0 - wh) / (1.0 - self.omega) * self.mu_eps
    }

    /// Closed-form conditional variance of `X_{t+h}` given `X_t = y`.
    ///
    /// Exact for `h = 1` (where it reduces to `y * Var(G*) + sigma2_eps`)
    /// and `h = 2`. For larger horizons this closed form is known to drift
    /// from the variance of the matrix-approximated forecast distribution;
    /// treat the matrix moments as the reference there.
    pub fn cond_var(&self, y: usize, h: usize) -> f64 {
        let w = self.omega;
        let h = h as i32;
        let wh = math::powi(w, h);
        let w2h = math::powi(w, 2 * h);
        let w2h1 = math::powi(w, 2 * (h - 1));
        let wh1 = math::powi(w, h - 1);
        let front = (self.alpha + self.beta) / (1.0 - self.beta);
        let state_term = wh * (1.0 - wh) / (1.0 - w) * y as f64;
        let mean_term = (w * (1.0 - w2h1) / ((1.0 + w) * (1.0 - w) * (1.0 - w))
            - w2h1 * (1.0 - wh1) / ((1.0 - w) * (1.0 - w)))
            * self.mu_eps;
        front * (state_term + mean_term) + (1.0 - w2h) / (1.0 - w * w) * self.sigma2_eps
    }

    /// Probability generating function of `G*` at `s`.
    pub fn gstar_pgf(&self, s: f64) -> f64 {
        (self.alpha * (1.0 - s) + (1.0 - self.beta) * s) / (1.0 - self.beta * s)
    }

    /// `h`-fold functional iterate of the `G*` pgf; `h = 0` is the identity.
    ///
    /// This iteration is the production path for the forecast pgf.
    pub fn gstar_pgf_iter(&self, s: f64, h: usize) -> f64 {
        let mut value = s;
        for _ in 0..h {
            value = self.gstar_pgf(value);
        }
        value
    }

    /// Closed-form expression for the `h`-fold iterated `G*` pgf.
    ///
    /// Kept solely as a cross-check against [`Self::gstar_pgf_iter`]; the
    /// tests flag any disagreement instead of trusting either side silently.
    pub fn gstar_pgf_closed(&self, s: f64, h: usize) -> f64 {
        if h == 0 {
            return s;
        }
        let (alpha, beta) = (self.alpha, self.beta);
        let binom = |n: usize, k: usize| -> f64 {
            let mut acc = 1.0;
            for i in 0..k {
                acc *= (n - i) as f64 / (i + 1) as f64;
            }
            acc
        };
        let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };

        // Numerator coefficient on (1 - s).
        let mut num_coef = sign(h + 1) * math::powi(alpha, h as i32);
        for i in 1..h {
            let mut inner = 0.0;
            for j in 0..=(h - i) {
                inner += binom(h, j) * sign(h - j - i) * math::powi(beta, (h - j - i) as i32);
            }
            num_coef += sign(i + 1) * math::powi(alpha, i as i32) * inner;
        }
        let numerator = num_coef * (1.0 - s) + math::powi(1.0 - beta, h as i32) * s;

        let mut mid = 0.0;
        for i in 1..h {
            let mut inner = 0.0;
            for j in 0..=(h - i - 1) {
                inner +=
                    binom(h, j) * sign(h - j - i - 1) * math::powi(beta, (h - j - i - 1) as i32);
            }
            mid += sign(i) * math::powi(alpha, i as i32) * inner;
        }
        let mut last = 0.0;
        for j in 0..h {
            last += binom(h, j) * sign(h - j - 1) * math::powi(beta, (h - j - 1) as i32);
        }
        let denominator = 1.0 + beta * (1.0 - s) * mid - beta * s * last;
        numerator / denominator
    }

    /// Conditional pgf of `X_{t+h}` given `X_t = y`, evaluated at `s`.
    ///
    /// Uses the stationary-marginal factorization
    /// `P_X(s) / P_X(g) * g^y` with `g` the `h`-fold iterated `G*` pgf and
    /// `P_X` the geometric(theta) pgf. Serves as a numerical oracle for the
    /// matrix-based forecast distributions.
    pub fn forecast_pgf(&self, y: usize, h: usize, s: f64) -> f64 {
        let g = self.gstar_pgf_iter(s, h);
        let px = |t: f64| (1.0 - self.theta) / (1.0 - self.theta * t);
        let denom = px(g);
        // Unreachable for |s| <= 1 and valid parameters: g stays in (0, 1].
        assert!(denom != 0.0, "conditional pgf denominator vanished");
        px(s) / denom * math::powi(g, y as i32)
    }

    /// Simulate `n` observations after discarding `burn_in`.
    ///
    /// `X_0` is drawn from the stationary geometric marginal, the thinning
    /// sum is drawn literally as `X_{t-1}` independent copies of `G*`, and
    /// the innovation picks a mixture component before drawing a geometric.
    pub fn simulate(&self, n: usize, spec: RngSpec, burn_in: usize) -> CountSeries {
        let mut rng = Rng::from_spec(spec);
        let mut values = Vec::with_capacity(n);
        let mut state = rng.geometric(self.theta);
        if burn_in == 0 {
            values.push(state);
        }
        let mut produced = if burn_in == 0 { 1 } else { 0 };
        let mut step = 1usize;
        while produced < n {
            let mut next = 0u32;
            for _ in 0..state {
                if !rng.bernoulli(self.alpha) {
                    next += 1 + rng.geometric(self.beta);
                }
            }
            next += if rng.bernoulli(self.mix_weight) {
                rng.geometric(self.theta)
            } else {
                rng.geometric(self.beta)
            };
            state = next;
            if step >= burn_in {
                values.push(state);
                produced += 1;
            }
            step += 1;
        }
        CountSeries::new(values, "nogear-sim")
    }
}

/// Precomputed two-step transition probabilities for a grid of origins and
/// destinations, with all tail sums truncated at `trunc`.
///
/// Building the table costs one pass over the truncated state space; each
/// subsequent lookup is O(trunc).
pub struct TwoStepTable {
    params: ModelParams,
    trunc: usize,
    /// eps[x] = innovation pmf at x.
    eps: Vec<f64>,
    /// big_b[k][x] = double-sum term of the one-step law from origin k to
    /// destination x (the transition minus its `alpha^k * eps(x)` part).
    big_b: Vec<Vec<f64>>,
    /// a_sum = sum over k >= 1 of alpha^k * eps(k).
    a_sum: f64,
    /// weighted_b_by_origin[y] = sum over k >= 1 of alpha^k * big_b[y][k].
    weighted_b_by_origin: Vec<f64>,
    /// eps_b_by_dest[x] = sum over k >= 1 of eps(k) * big_b[k][x].
    eps_b_by_dest: Vec<f64>,
    y_max: usize,
    x_max: usize,
}

impl TwoStepTable {
    /// Build the table for origins `0..=y_max` and destinations `0..=x_max`.
    pub fn new(params: &ModelParams, trunc: usize, y_max: usize, x_max: usize) -> Self {
        assert!(trunc >= 1, "truncation bound must be at least 1");
        let dest_max = x_max.max(trunc);
        let origin_max = y_max.max(trunc);
        let eps: Vec<f64> = (0..=dest_max).map(|x| params.innovation_pmf(x)).collect();

        // big_b[k] holds the double-sum term for every destination at once:
        // the convolution of the thinning-sum law (m >= 1 part) with eps.
        let mut big_b = Vec::with_capacity(origin_max + 1);
        for k in 0..=origin_max {
            let mut col = vec![0.0; dest_max + 1];
            if k > 0 {
                let s = params.thinning_sum_pmf(k, dest_max);
                for (m, &sm) in s.iter().enumerate().skip(1) {
                    if sm == 0.0 {
                        continue;
                    }
                    for x in m..=dest_max {
                        col[x] += sm * eps[x - m];
                    }
                }
            }
            big_b.push(col);
        }

        let mut a_sum = 0.0;
        let mut alpha_pow = 1.0;
        for item in eps.iter().take(trunc + 1).skip(1) {
            alpha_pow *= params.alpha;
            a_sum += alpha_pow * item;
        }

        let mut weighted_b_by_origin = vec![0.0; y_max + 1];
        for (y, slot) in weighted_b_by_origin.iter_mut().enumerate() {
            let mut acc = 0.0;
            let mut alpha_pow = 1.0;
            for &b in big_b[y].iter().take(trunc + 1).skip(1) {
                alpha_pow *= params.alpha;
                acc += alpha_pow * b;
            }
            *slot = acc;
        }

        let mut eps_b_by_dest = vec![0.0; x_max + 1];
        for (x, slot) in eps_b_by_dest.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 1..=trunc {
                acc += eps[k] * big_b[k][x];
            }
            *slot = acc;
        }

        Self {
            params: *params,
            trunc,
            eps,
            big_b,
            a_sum,
            weighted_b_by_origin,
            eps_b_by_dest,
            y_max,
            x_max,
        }
    }

    /// Two-step probability `Pr[X_{t+2} = x | X_t = y]`.
    pub fn pmf(&self, y: usize, x: usize) -> f64 {
        assert!(y <= self.y_max && x <= self.x_max, "lookup outside table grid");
        let p = &self.params;
        let zero_stay = 1.0 - p.alpha * p.theta;
        let alpha_y = math::powi(p.alpha, y as i32);
        match (y, x) {
            (0, 0) => zero_stay * (zero_stay + self.a_sum),
            (0, x) => {
                self.eps[x] * (zero_stay + self.a_sum) + self.eps_b_by_dest[x]
            }
            (y, 0) => {
                alpha_y * zero_stay * (zero_stay + self.a_sum)
                    + zero_stay * self.weighted_b_by_origin[y]
            }
            (y, x) => {
                let mut cross = 0.0;
                for k in 1..=self.trunc {
                    cross += self.big_b[k][x] * self.big_b[y][k];
                }
                alpha_y * self.eps[x] * (zero_stay + self.a_sum)
                    + self.eps[x] * self.weighted_b_by_origin[y]
                    + alpha_y * self.eps_b_by_dest[x]
                    + cross
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_one() -> ModelParams {
        ModelParams::new(0.6, 0.4, 0.75).unwrap()
    }

    #[test]
    fn validate_table_set_one() {
        let p = set_one();
        assert!((p.omega - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.mix_weight - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn validate_rejects_flipped_ordering() {
        let err = ModelParams::new(0.4, 0.6, 0.5).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation(ref m) if m.contains("beta < alpha")));
    }

    #[test]
    fn validate_narrow_set_three() {
        // alpha*theta = 0.4565 > beta = 0.45, so this set passes narrowly.
        let p = ModelParams::new(0.55, 0.45, 0.83).unwrap();
        assert!(p.mix_weight > 0.0 && p.mix_weight < 1.0);
    }

    #[test]
    fn validate_rejects_weight_overflow() {
        // beta > alpha*theta makes the mixture weight negative.
        let err = ModelParams::new(0.6, 0.5, 0.75).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation(ref m) if m.contains("alpha*theta")));
    }

    #[test]
    fn boundary_weight_zero_is_accepted() {
        // beta == alpha*theta is the mix_weight = 0 boundary; the innovation
        // degenerates to a single geometric and remains a valid pmf. Chosen
        // values are exactly representable so the boundary is hit exactly.
        let p = ModelParams::new(0.5, 0.25, 0.5).unwrap();
        assert!(p.mix_weight.abs() < 1e-12);
        let total: f64 = (0..200).map(|x| p.innovation_pmf(x)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gstar_pmf_hand_values() {
        let p = set_one();
        assert!((p.gstar_pmf(0) - 0.6).abs() < 1e-15);
        assert!((p.gstar_pmf(1) - 0.24).abs() < 1e-15);
        assert!((p.gstar_pmf(2) - 0.096).abs() < 1e-15);
        let total: f64 = (0..300).map(|x| p.gstar_pmf(x)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gstar_moments_match_brute_force() {
        let p = set_one();
        let mean: f64 = (0..400).map(|x| x as f64 * p.gstar_pmf(x)).sum();
        let second: f64 = (0..400).map(|x| (x * x) as f64 * p.gstar_pmf(x)).sum();
        assert!((mean - p.gstar_mean()).abs() < 1e-10);
        assert!((second - mean * mean - p.gstar_variance()).abs() < 1e-10);
    }

    #[test]
    fn innovation_pmf_hand_values() {
        let p = set_one();
        // eps(0) = 1 - alpha*theta.
        assert!((p.innovation_pmf(0) - 0.55).abs() < 1e-15);
        assert!((p.innovation_pmf(1) - 0.2325).abs() < 1e-12);
        let total: f64 = (0..300).map(|x| p.innovation_pmf(x)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn innovation_moments_hand_and_brute_force() {
        let p = set_one();
        let (mu, sigma2) = p.innovation_moments();
        assert!((mu - 1.0).abs() < 1e-12);
        // Stationarity balance: mu_eps = (1 - omega) * theta/(1 - theta).
        assert!((mu - (1.0 - p.omega) * p.marginal_mean()).abs() < 1e-12);

        // Brute-force oracle on a truncated support with tail mass < 1e-12.
        let mut cutoff = 0;
        let mut cum = 0.0;
        while cum < 1.0 - 1e-13 {
            cum += p.innovation_pmf(cutoff);
            cutoff += 1;
        }
        let mean: f64 = (0..cutoff).map(|x| x as f64 * p.innovation_pmf(x)).sum();
        let second: f64 = (0..cutoff).map(|x| (x * x) as f64 * p.innovation_pmf(x)).sum();
        assert!((mean - mu).abs() < 1e-9);
        assert!((second - mean * mean - sigma2).abs() < 1e-8);
    }

    #[test]
    fn marginal_is_geometric() {
        let p = ModelParams::new(0.7, 0.3, 0.5).unwrap();
        assert!((p.marginal_pmf(0) - 0.5).abs() < 1e-15);
        assert!((p.marginal_mean() - 1.0).abs() < 1e-15);
        let p75 = set_one();
        assert!((p75.marginal_mean() - 3.0).abs() < 1e-12);
        let mean: f64 = (0..600).map(|x| x as f64 * p75.marginal_pmf(x)).sum();
        assert!((mean - 3.0).abs() < 1e-10);
        // Overdispersion: geometric variance q/(1-q)^2 exceeds its mean.
        let half = ModelParams::new(0.7, 0.3, 0.5).unwrap();
        let var: f64 = (0..400)
            .map(|x| {
                let d = x as f64 - 1.0;
                d * d * half.marginal_pmf(x)
            })
            .sum();
        assert!((var - 2.0).abs() < 1e-10);
    }

    #[test]
    fn transition_pmf_hand_values() {
        let p = set_one();
        assert!((p.transition_pmf(0, 0) - 0.55).abs() < 1e-15);
        assert!((p.transition_pmf(1, 0) - 0.33).abs() < 1e-15);
        // alpha*eps(1) + eps(0)*(1-alpha)(1-beta)
        assert!((p.transition_pmf(1, 1) - 0.2715).abs() < 1e-12);
    }

    #[test]
    fn transition_row_matches_pointwise() {
        let p = ModelParams::new(0.55, 0.45, 0.83).unwrap();
        for y in [0usize, 1, 3, 10] {
            let row = p.transition_row(y, 60);
            for (x, &v) in row.iter().enumerate() {
                assert!(
                    (v - p.transition_pmf(y, x)).abs() < 1e-14,
                    "row mismatch at y={y} x={x}"
                );
            }
        }
    }

    #[test]
    fn transition_from_one_matches_single_convolution() {
        // Independent oracle: from y=1 the thinning sum is one G* draw, so
        // the transition is the plain convolution of gstar and innovation.
        let p = set_one();
        for x in 0..40 {
            let direct: f64 = (0..=x).map(|g| p.gstar_pmf(g) * p.innovation_pmf(x - g)).sum();
            assert!((p.transition_pmf(1, x) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn transition_rows_normalize() {
        for (a, b, t) in [(0.6, 0.4, 0.75), (0.7, 0.3, 0.5), (0.8, 0.2, 0.5), (0.55, 0.45, 0.83)] {
            let p = ModelParams::new(a, b, t).unwrap();
            for y in [0usize, 1, 5, 20, 50] {
                let total: f64 = p.transition_row(y, 400).iter().sum();
                assert!(
                    (1.0 - 1e-8..=1.0 + 1e-12).contains(&total),
                    "row sum {total} at ({a},{b},{t}) y={y}"
                );
            }
        }
    }

    #[test]
    fn kernel_mean_identity() {
        let p = set_one();
        for y in [0usize, 2, 7, 30] {
            let mean: f64 = p
                .transition_row(y, 400)
                .iter()
                .enumerate()
                .map(|(x, &v)| x as f64 * v)
                .sum();
            assert!((mean - p.cond_mean(y, 1)).abs() < 1e-6, "y={y}");
        }
    }

    #[test]
    fn cond_mean_hand_values() {
        let p = set_one();
        assert!((p.cond_mean(3, 1) - 3.0).abs() < 1e-12);
        assert!((p.cond_mean(17, 200) - 3.0).abs() < 1e-9);
        let q = ModelParams::new(0.8, 0.2, 0.5).unwrap();
        assert!((q.cond_mean(0, 1) - q.mu_eps).abs() < 1e-15);
    }

    #[test]
    fn cond_var_h1_decomposition() {
        let p = set_one();
        for y in [0usize, 2, 9] {
            let direct = y as f64 * p.gstar_variance() + p.sigma2_eps;
            assert!((p.cond_var(y, 1) - direct).abs() < 1e-10, "y={y}");
        }
        // y=2 hand value: 2*(10/9) + 10/3 = 50/9.
        assert!((p.cond_var(2, 1) - 50.0 / 9.0).abs() < 1e-10);
        assert!((p.cond_var(0, 1) - p.sigma2_eps).abs() < 1e-12);
    }

    #[test]
    fn two_step_zero_zero_geometric_series_oracle() {
        // A = sum_k alpha^k eps(k) has the closed form
        // w (1-theta) a*theta/(1-a*theta) + (1-w)(1-beta) a*beta/(1-a*beta).
        let p = set_one();
        let (a, b, t, w) = (p.alpha, p.beta, p.theta, p.mix_weight);
        let a_closed = w * (1.0 - t) * (a * t) / (1.0 - a * t)
            + (1.0 - w) * (1.0 - b) * (a * b) / (1.0 - a * b);
        let expected = (1.0 - a * t) * (1.0 - a * t + a_closed);
        assert!((p.two_step_pmf(0, 0, 200) - expected).abs() < 1e-12);
    }

    #[test]
    fn two_step_matches_matrix_square_small_grid() {
        let p = ModelParams::new(0.8, 0.2, 0.5).unwrap();
        let m = 120;
        let rows: Vec<Vec<f64>> = (0..=m).map(|y| p.transition_row(y, m)).collect();
        let table = TwoStepTable::new(&p, m, 12, 12);
        for y in 0..=12usize {
            for x in 0..=12usize {
                let squared: f64 = (0..=m).map(|k| rows[y][k] * rows[k][x]).sum();
                let closed = table.pmf(y, x);
                assert!(
                    (closed - squared).abs() < 1e-8,
                    "y={y} x={x} closed={closed} squared={squared}"
                );
            }
        }
    }

    #[test]
    fn two_step_rows_normalize_under_truncation() {
        let p = ModelParams::new(0.8, 0.2, 0.5).unwrap();
        let trunc = 200;
        let table = TwoStepTable::new(&p, trunc, 2, trunc);
        let total: f64 = (0..=trunc).map(|x| table.pmf(2, x)).sum();
        assert!((1.0 - 1e-8..=1.0 + 1e-9).contains(&total), "total {total}");
    }

    #[test]
    fn pgf_iteration_basics() {
        let p = set_one();
        for h in 0..6 {
            assert!((p.gstar_pgf_iter(1.0, h) - 1.0).abs() < 1e-12);
        }
        assert!((p.gstar_pgf_iter(0.3, 0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn pgf_closed_form_cross_check() {
        // The closed form is only a cross-check; disagreements beyond 1e-9
        // are flagged loudly rather than silently trusted.
        let p = set_one();
        let q = ModelParams::new(0.8, 0.2, 0.5).unwrap();
        let mut worst: f64 = 0.0;
        for params in [p, q] {
            for h in 1..=6 {
                for i in 0..=10 {
                    let s = i as f64 / 10.0;
                    let it = params.gstar_pgf_iter(s, h);
                    let closed = params.gstar_pgf_closed(s, h);
                    worst = worst.max((it - closed).abs());
                }
            }
        }
        assert!(
            worst < 1e-9,
            "FLAG: closed-form iterated pgf disagrees with functional iteration by {worst:.3e}"
        );
    }

    #[test]
    fn gstar_pgf_matches_series() {
        let p = set_one();
        for s in [0.2f64, 0.5, 0.9] {
            let series: f64 = (0..300).map(|x| p.gstar_pmf(x) * s.powi(x as i32)).sum();
            assert!((p.gstar_pgf(s) - series).abs() < 1e-12);
        }
    }

    #[test]
    fn forecast_pgf_normalization_and_mean() {
        let p = set_one();
        for (y, h) in [(0usize, 1usize), (2, 1), (5, 2), (3, 4)] {
            assert!((p.forecast_pgf(y, h, 1.0) - 1.0).abs() < 1e-12);
            // Finite-difference derivative at s=1 approximates the mean.
            let eps = 1e-6;
            let deriv = (p.forecast_pgf(y, h, 1.0) - p.forecast_pgf(y, h, 1.0 - eps)) / eps;
            assert!(
                (deriv - p.cond_mean(y, h)).abs() < 1e-4,
                "pgf mean mismatch at y={y} h={h}: {deriv} vs {}",
                p.cond_mean(y, h)
            );
        }
    }

    #[test]
    fn forecast_pgf_matches_transition_sum() {
        let p = set_one();
        let row = p.transition_row(2, 500);
        let s = 0.5f64;
        let direct: f64 = row.iter().enumerate().map(|(x, &v)| v * s.powi(x as i32)).sum();
        assert!((p.forecast_pgf(2, 1, s) - direct).abs() < 1e-8);
    }

    #[test]
    fn simulate_is_deterministic() {
        let p = set_one();
        let a = p.simulate(10, RngSpec::new(99, 4), 0);
        let b = p.simulate(10, RngSpec::new(99, 4), 0);
        assert_eq!(a.values, b.values);
        let c = p.simulate(10, RngSpec::new(99, 5), 0);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn simulate_burn_in_shifts_window() {
        let p = set_one();
        let long = p.simulate(30, RngSpec::new(7, 0), 0);
        let trimmed = p.simulate(20, RngSpec::new(7, 0), 10);
        assert_eq!(&long.values[10..], &trimmed.values[..]);
    }

    #[test]
    fn simulate_stationary_moments() {
        let p = set_one();
        let s = p.simulate(100_000, RngSpec::new(2024, 0), 0);
        assert!((s.mean() - 3.0).abs() < 0.05, "mean {}", s.mean());
        let acf1 = s.lag1_autocorrelation();
        assert!((acf1 - p.omega).abs() < 0.02, "acf1 {acf1}");
    }

    #[test]
    fn simulate_marginal_total_variation() {
        let p = ModelParams::new(0.55, 0.45, 0.83).unwrap();
        let s = p.simulate(100_000, RngSpec::new(31, 0), 0);
        let max = s.max_value() as usize;
        let mut counts = vec![0usize; max + 1];
        for &v in &s.values {
            counts[v as usize] += 1;
        }
        let n = s.len() as f64;
        let mut tv: f64 = 0.0;
        for (x, &c) in counts.iter().enumerate() {
            tv += (c as f64 / n - p.marginal_pmf(x)).abs();
        }
        tv += 1.0 - p.marginal_cdf(max); // tail never sampled
        tv /= 2.0;
        assert!(tv < 0.01, "total variation {tv}");
    }
}
