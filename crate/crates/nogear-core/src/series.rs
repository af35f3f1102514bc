//! Observed count series.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An ordered sequence of non-negative integer observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    /// Observations in time order.
    pub values: Vec<u32>,
    /// Label used in reports.
    pub name: String,
}

impl CountSeries {
    /// Wrap raw values under a label.
    pub fn new(values: Vec<u32>, name: impl Into<String>) -> Self {
        Self { values, name: name.into() }
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the series holds no observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest observation, or 0 for an empty series.
    pub fn max_value(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Sample mean.
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return f64::NAN;
        }
        self.values.iter().map(|&x| x as f64).sum::<f64>() / self.len() as f64
    }

    /// Sample variance with denominator n-1.
    pub fn variance(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return f64::NAN;
        }
        let mean = self.mean();
        self.values
            .iter()
            .map(|&x| {
                let d = x as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (n - 1) as f64
    }

    /// Lag-1 sample autocorrelation (biased denominator).
    pub fn lag1_autocorrelation(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return f64::NAN;
        }
        let mean = self.mean();
        let denom: f64 = self
            .values
            .iter()
            .map(|&x| {
                let d = x as f64 - mean;
                d * d
            })
            .sum();
        if denom == 0.0 {
            return f64::NAN;
        }
        let num: f64 = self
            .values
            .windows(2)
            .map(|w| (w[0] as f64 - mean) * (w[1] as f64 - mean))
            .sum();
        num / denom
    }

    /// True when every observation equals the first.
    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Error unless the series has at least `min` observations.
    pub fn require_len(&self, min: usize) -> Result<()> {
        if self.len() < min {
            Err(Error::SeriesTooShort { len: self.len(), min })
        } else {
            Ok(())
        }
    }
}
