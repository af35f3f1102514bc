//! Truncated Markov-chain approximation of h-step forecast distributions,
//! coherent point forecasts, and highest-predictive-probability intervals.
//!
//! The transition law of an INAR(1) process lives on all of `{0, 1, 2, ...}`;
//! restricting it to `{0..=M}` for a sufficiently large `M` gives a finite
//! row-stochastic matrix whose powers approximate the h-step conditional
//! distributions arbitrarily well.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Maximum per-row tail mass tolerated when truncating a kernel.
pub const TRUNCATION_TOLERANCE: f64 = 1e-6;

/// Row-stochastic truncated one-step transition matrix on `{0..=M}`.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    /// Truncation bound; the matrix is `(M+1) x (M+1)`.
    pub m: usize,
    /// Row-major transition probabilities after renormalization.
    rows: Vec<Vec<f64>>,
    /// Tail mass discarded from each row before renormalization.
    pub truncation_mass: Vec<f64>,
    /// Whether rows were rescaled to sum to one (always true once built).
    pub renormalized: bool,
}

impl TransitionMatrix {
    /// Fill rows `0..=m` from a one-step kernel and renormalize each row.
    ///
    /// Errors with [`Error::TruncationTooSevere`] when a row in the lower
    /// half of the state space (`y <= m/2`) discards more than
    /// [`TRUNCATION_TOLERANCE`] of its mass: that signals `m` is too small
    /// for these parameters. Rows near the bound always lose some tail and
    /// only matter once the chain has drifted far outside the regime the
    /// bound was sized for, so they are reported in `truncation_mass` but do
    /// not trip the guard.
    pub fn build<F>(kernel: F, m: usize) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64,
    {
        assert!(m >= 1, "truncation bound must be at least 1");
        let rows: Vec<Vec<f64>> =
            (0..=m).map(|y| (0..=m).map(|x| kernel(y, x)).collect()).collect();
        Self::from_raw_rows(rows)
    }

    /// Build from precomputed raw kernel rows (same contract as
    /// [`Self::build`]).
    pub fn from_raw_rows(mut rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len() - 1;
        let mut truncation_mass = vec![0.0; m + 1];
        for (y, row) in rows.iter_mut().enumerate() {
            debug_assert_eq!(row.len(), m + 1);
            let sum: f64 = row.iter().sum();
            let tail = 1.0 - sum;
            truncation_mass[y] = tail;
            if y <= m / 2 && tail > TRUNCATION_TOLERANCE {
                return Err(Error::TruncationTooSevere { m, row: y, mass: tail });
            }
            if sum > 0.0 {
                for v in row.iter_mut() {
                    *v /= sum;
                }
            }
        }
        Ok(Self { m, rows, truncation_mass, renormalized: true })
    }

    /// Renormalized transition probability `y -> x`.
    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.rows[y][x]
    }

    /// Borrow row `y`.
    pub fn row(&self, y: usize) -> &[f64] {
        &self.rows[y]
    }

    /// h-step forecast distribution from origin `y` by iterated
    /// vector-matrix products; only the origin row is ever materialized.
    pub fn h_step_distribution(&self, y: usize, h: usize) -> Result<ForecastDistribution> {
        if y > self.m {
            return Err(Error::OriginOutOfRange { origin: y, m: self.m });
        }
        assert!(h >= 1, "horizon must be at least 1");
        let mut probs = self.rows[y].clone();
        let mut next = vec![0.0; self.m + 1];
        for _ in 1..h {
            for v in next.iter_mut() {
                *v = 0.0;
            }
            for (k, &pk) in probs.iter().enumerate() {
                if pk == 0.0 {
                    continue;
                }
                let row = &self.rows[k];
                for (x, &rx) in row.iter().enumerate() {
                    next[x] += pk * rx;
                }
            }
            core::mem::swap(&mut probs, &mut next);
        }
        Ok(ForecastDistribution { origin: y, horizon: h, m: self.m, probs })
    }
}

/// Forecast distribution of `X_{t+h}` given `X_t = y` on `{0..=M}`.
#[derive(Debug, Clone)]
pub struct ForecastDistribution {
    /// Conditioning state.
    pub origin: usize,
    /// Forecast horizon.
    pub horizon: usize,
    /// Truncation bound.
    pub m: usize,
    /// Probability vector over `{0..=M}`.
    pub probs: Vec<f64>,
}

impl ForecastDistribution {
    /// Wrap an explicit probability vector (used by tests and the CLI).
    pub fn from_probs(origin: usize, horizon: usize, probs: Vec<f64>) -> Self {
        let m = probs.len().saturating_sub(1);
        Self { origin, horizon, m, probs }
    }

    /// Mean of the distribution.
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(x, &p)| x as f64 * p).sum()
    }

    /// Variance of the distribution.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(x, &p)| {
                let d = x as f64 - mean;
                d * d * p
            })
            .sum()
    }

    /// Coherent point forecasts: mean, rounded mean, median, and mode.
    pub fn point_forecasts(&self) -> PointForecasts {
        let mean = self.mean();
        let mean_rounded = math::round_half_up(mean) as usize;
        let mut cum = 0.0;
        let mut median = self.m;
        for (x, &p) in self.probs.iter().enumerate() {
            cum += p;
            if cum >= 0.5 {
                median = x;
                break;
            }
        }
        let mut mode = 0;
        let mut best = f64::MIN;
        for (x, &p) in self.probs.iter().enumerate() {
            if p > best {
                best = p;
                mode = x;
            }
        }
        PointForecasts { mean, mean_rounded, median, mode }
    }

    /// Highest-predictive-probability interval at nominal level `1 - delta`.
    ///
    /// States are accumulated in descending probability order (ties broken
    /// toward the smaller state) until their total reaches `1 - delta`; the
    /// reported interval is the integer hull of that set. `set_coverage` is
    /// the accumulated mass itself, `achieved_coverage` the mass of the
    /// hull; they coincide whenever the accumulated set is contiguous, which
    /// holds for the unimodal forecast distributions seen here.
    pub fn hpp_interval(&self, delta: f64) -> HppInterval {
        assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
        let mut order: Vec<usize> = (0..self.probs.len()).collect();
        // Stable descending sort on probability; stability keeps ties in
        // ascending state order.
        order.sort_by(|&a, &b| self.probs[b].partial_cmp(&self.probs[a]).unwrap());
        let target = 1.0 - delta;
        let mut set_coverage = 0.0;
        let mut lower = usize::MAX;
        let mut upper = 0;
        for &x in &order {
            set_coverage += self.probs[x];
            lower = lower.min(x);
            upper = upper.max(x);
            if set_coverage >= target {
                break;
            }
        }
        let achieved_coverage: f64 = self.probs[lower..=upper].iter().sum();
        HppInterval { lower, upper, achieved_coverage, set_coverage, delta }
    }
}

/// Coherent point forecasts extracted from a forecast distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointForecasts {
    /// Conditional mean (not generally an integer).
    pub mean: f64,
    /// Conditional mean rounded half-up to the nearest integer.
    pub mean_rounded: usize,
    /// Smallest state with cumulative probability at least one half.
    pub median: usize,
    /// Smallest state attaining the maximum probability.
    pub mode: usize,
}

/// Highest-predictive-probability interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HppInterval {
    /// Lower endpoint of the hull.
    pub lower: usize,
    /// Upper endpoint of the hull.
    pub upper: usize,
    /// Probability mass of the hull `[lower, upper]`.
    pub achieved_coverage: f64,
    /// Probability mass of the accumulated high-probability set itself.
    pub set_coverage: f64,
    /// Nominal miscoverage level.
    pub delta: f64,
}

impl HppInterval {
    /// Whether `value` falls inside the interval.
    pub fn contains(&self, value: usize) -> bool {
        value >= self.lower && value <= self.upper
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    fn set_one() -> ModelParams {
        ModelParams::new(0.6, 0.4, 0.75).unwrap()
    }

    fn table_one_sets() -> [ModelParams; 4] {
        [
            ModelParams::new(0.6, 0.4, 0.75).unwrap(),
            ModelParams::new(0.7, 0.3, 0.5).unwrap(),
            ModelParams::new(0.55, 0.45, 0.83).unwrap(),
            ModelParams::new(0.8, 0.2, 0.5).unwrap(),
        ]
    }

    fn nogear_matrix(p: &ModelParams, m: usize) -> TransitionMatrix {
        let rows: Vec<Vec<f64>> = (0..=m).map(|y| p.transition_row(y, m)).collect();
        TransitionMatrix::from_raw_rows(rows).unwrap()
    }

    #[test]
    fn identity_kernel_builds_identity_matrix() {
        let tm = TransitionMatrix::build(|y, x| if y == x { 1.0 } else { 0.0 }, 10).unwrap();
        for y in 0..=10 {
            for x in 0..=10 {
                let expect = if y == x { 1.0 } else { 0.0 };
                assert_eq!(tm.prob(y, x), expect);
            }
            assert_eq!(tm.truncation_mass[y], 0.0);
        }
    }

    #[test]
    fn nogear_m200_truncation_is_negligible_in_bulk() {
        let p = set_one();
        let tm = nogear_matrix(&p, 200);
        for y in 0..=100 {
            assert!(
                tm.truncation_mass[y] < 1e-10,
                "row {y} mass {}",
                tm.truncation_mass[y]
            );
        }
    }

    #[test]
    fn severe_truncation_is_rejected() {
        // Stationary mean ~4.88; M=5 discards a visible share of mass from
        // the very first rows.
        let p = ModelParams::new(0.55, 0.45, 0.83).unwrap();
        let err = TransitionMatrix::build(|y, x| p.transition_pmf(y, x), 5).unwrap_err();
        assert!(matches!(err, Error::TruncationTooSevere { m: 5, .. }));
    }

    #[test]
    fn rows_are_stochastic_after_renormalization() {
        let p = set_one();
        let tm = nogear_matrix(&p, 120);
        for y in 0..=120 {
            let sum: f64 = tm.row(y).iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "row {y} sums to {sum}");
        }
    }

    #[test]
    fn h_one_returns_matrix_row() {
        let p = set_one();
        let tm = nogear_matrix(&p, 80);
        let fd = tm.h_step_distribution(3, 1).unwrap();
        for x in 0..=80 {
            assert_eq!(fd.probs[x], tm.prob(3, x));
        }
    }

    #[test]
    fn origin_out_of_range_is_rejected() {
        let p = set_one();
        let tm = nogear_matrix(&p, 80);
        assert!(matches!(
            tm.h_step_distribution(81, 1),
            Err(Error::OriginOutOfRange { origin: 81, m: 80 })
        ));
    }

    #[test]
    fn two_step_distribution_matches_closed_form() {
        let p = set_one();
        let tm = nogear_matrix(&p, 200);
        let fd = tm.h_step_distribution(2, 2).unwrap();
        let table = crate::model::TwoStepTable::new(&p, 200, 2, 50);
        for x in 0..=50 {
            assert!(
                (fd.probs[x] - table.pmf(2, x)).abs() < 1e-8,
                "x={x}: {} vs {}",
                fd.probs[x],
                table.pmf(2, x)
            );
        }
    }

    #[test]
    fn long_horizon_converges_to_marginal() {
        let p = set_one();
        let tm = nogear_matrix(&p, 200);
        for y in [0usize, 7, 60] {
            let fd = tm.h_step_distribution(y, 500).unwrap();
            let tv: f64 = (0..=200)
                .map(|x| (fd.probs[x] - p.marginal_pmf(x)).abs())
                .sum::<f64>()
                / 2.0;
            assert!(tv < 1e-6, "y={y} tv={tv}");
        }
    }

    #[test]
    fn chapman_kolmogorov_power_consistency() {
        let p = ModelParams::new(0.8, 0.2, 0.5).unwrap();
        let tm = nogear_matrix(&p, 100);
        let (h1, h2) = (2usize, 3usize);
        let direct = tm.h_step_distribution(4, h1 + h2).unwrap();
        let first = tm.h_step_distribution(4, h1).unwrap();
        let second: Vec<Vec<f64>> =
            (0..=100).map(|k| tm.h_step_distribution(k, h2).unwrap().probs).collect();
        for (x, &d) in direct.probs.iter().enumerate() {
            let composed: f64 =
                first.probs.iter().zip(&second).map(|(&pk, row)| pk * row[x]).sum();
            assert!((d - composed).abs() < 1e-9, "x={x}: {d} vs {composed}");
        }
    }

    #[test]
    fn point_forecasts_on_point_mass() {
        let mut probs = vec![0.0; 11];
        probs[4] = 1.0;
        let fd = ForecastDistribution::from_probs(0, 1, probs);
        let pf = fd.point_forecasts();
        assert_eq!(pf.mean, 4.0);
        assert_eq!(pf.mean_rounded, 4);
        assert_eq!(pf.median, 4);
        assert_eq!(pf.mode, 4);
    }

    #[test]
    fn rounding_half_goes_up() {
        let fd = ForecastDistribution::from_probs(0, 1, vec![0.5, 0.0, 0.5]);
        assert_eq!(fd.point_forecasts().mean_rounded, 1);
    }

    #[test]
    fn point_forecasts_from_state_zero() {
        // transition(0 -> 0) = 0.55 >= 0.5, so both median and mode are 0.
        let p = set_one();
        let tm = nogear_matrix(&p, 100);
        let pf = tm.h_step_distribution(0, 1).unwrap().point_forecasts();
        assert_eq!(pf.median, 0);
        assert_eq!(pf.mode, 0);
    }

    #[test]
    fn forecast_mean_matches_conditional_mean() {
        let p = set_one();
        let tm = nogear_matrix(&p, 200);
        let fd = tm.h_step_distribution(3, 1).unwrap();
        assert!((fd.point_forecasts().mean - 3.0).abs() < 1e-6);
        for h in 1..=5 {
            let fd = tm.h_step_distribution(7, h).unwrap();
            assert!(
                (fd.mean() - p.cond_mean(7, h)).abs() < 1e-6,
                "h={h}: {} vs {}",
                fd.mean(),
                p.cond_mean(7, h)
            );
        }
    }

    #[test]
    fn median_minimizes_absolute_loss() {
        let p = ModelParams::new(0.55, 0.45, 0.83).unwrap();
        let tm = nogear_matrix(&p, 150);
        for (y, h) in [(0usize, 1usize), (4, 1), (9, 2)] {
            let fd = tm.h_step_distribution(y, h).unwrap();
            let pf = fd.point_forecasts();
            let loss = |c: usize| -> f64 {
                fd.probs
                    .iter()
                    .enumerate()
                    .map(|(x, &p)| (x as f64 - c as f64).abs() * p)
                    .sum()
            };
            let best = (0..=150).map(loss).fold(f64::INFINITY, f64::min);
            assert!(loss(pf.median) <= best + 1e-12, "median not optimal at y={y} h={h}");
        }
    }

    #[test]
    fn mode_maximizes_probability() {
        let p = set_one();
        let tm = nogear_matrix(&p, 100);
        let fd = tm.h_step_distribution(5, 2).unwrap();
        let pf = fd.point_forecasts();
        for (x, &prob) in fd.probs.iter().enumerate() {
            assert!(fd.probs[pf.mode] >= prob, "mode beaten by state {x}");
        }
    }

    #[test]
    fn hpp_on_point_mass() {
        let mut probs = vec![0.0; 5];
        probs[0] = 1.0;
        let fd = ForecastDistribution::from_probs(0, 1, probs);
        let hpp = fd.hpp_interval(0.05);
        assert_eq!((hpp.lower, hpp.upper), (0, 0));
        assert_eq!(hpp.achieved_coverage, 1.0);
    }

    #[test]
    fn hpp_greedy_set_is_contiguous_on_table_one_sets() {
        for p in table_one_sets() {
            let tm = nogear_matrix(&p, 200);
            for y in 0..=20 {
                for h in [1usize, 2] {
                    let fd = tm.h_step_distribution(y, h).unwrap();
                    let hpp = fd.hpp_interval(0.05);
                    assert!(
                        (hpp.achieved_coverage - hpp.set_coverage).abs() < 1e-12,
                        "non-contiguous HPP set at ({}, {}, {}) y={y} h={h}",
                        p.alpha,
                        p.beta,
                        p.theta
                    );
                    assert!(hpp.achieved_coverage >= 0.95);
                    assert!(hpp.lower <= hpp.upper);
                }
            }
        }
    }

    #[test]
    fn hpp_state_zero_contains_origin() {
        let p = set_one();
        let tm = nogear_matrix(&p, 200);
        let fd = tm.h_step_distribution(0, 1).unwrap();
        let hpp = fd.hpp_interval(0.05);
        assert!(hpp.contains(0));
        assert!(hpp.achieved_coverage >= 0.95);

        // Brute-force oracle: accumulate sorted probabilities directly.
        let mut sorted: Vec<f64> = fd.probs.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut acc = 0.0;
        let mut needed = 0;
        for v in sorted {
            acc += v;
            needed += 1;
            if acc >= 0.95 {
                break;
            }
        }
        assert_eq!(hpp.upper - hpp.lower + 1, needed);
    }

    #[test]
    fn hpp_coverage_monotone_in_delta() {
        let p = ModelParams::new(0.7, 0.3, 0.5).unwrap();
        let tm = nogear_matrix(&p, 150);
        for y in [0usize, 3, 11] {
            let fd = tm.h_step_distribution(y, 2).unwrap();
            let tight = fd.hpp_interval(0.05);
            let loose = fd.hpp_interval(0.10);
            assert!(tight.achieved_coverage >= loose.achieved_coverage);
            assert!(tight.achieved_coverage >= 0.95);
            assert!(loose.achieved_coverage >= 0.90);
        }
    }

    #[test]
    fn hpp_tie_break_prefers_smaller_state() {
        let fd = ForecastDistribution::from_probs(0, 1, vec![0.25, 0.25, 0.25, 0.25]);
        let hpp = fd.hpp_interval(0.4);
        // Ties resolve toward smaller states: {0, 1, 2} covers 0.75 >= 0.6.
        assert_eq!((hpp.lower, hpp.upper), (0, 2));
    }
}
