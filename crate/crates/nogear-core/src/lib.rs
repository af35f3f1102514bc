//! Coherent forecasting for the NoGeAR(1) count time-series model.
//!
//! Point forecasts for count data should live on the non-negative integers;
//! the conditional mean usually does not. This crate produces coherent
//! forecasts (conditional median, mode, and rounded mean) together with
//! highest-predictive-probability intervals by approximating the h-step
//! forecast distribution with powers of a truncated transition matrix.
//!
//! The crate is organised around the pipeline:
//!
//! * [`model`] - exact NoGeAR(1) probability laws, moments, and simulation.
//! * [`markov`] - truncated transition matrices, h-step forecast
//!   distributions, point forecasts, and HPP intervals.
//! * [`inar`] - comparator INAR(1) models (NGINAR, GINAR, PINAR) behind a
//!   common thinning-plus-innovation kernel.
//! * [`estimate`] - conditional maximum likelihood fitting and information
//!   criteria.
//! * [`diagnostics`] - Pearson residuals, PIT histograms, jump control
//!   charts, ACF, and Ljung-Box tests.
//! * [`harness`] - seeded Monte Carlo experiments for forecast accuracy and
//!   interval coverage.
//!
//! Everything is deterministic given an [`rng::RngSpec`]; the crate is
//! `no_std`-compatible (with `alloc`) so the numerical core carries no
//! platform dependences.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diagnostics;
pub mod error;
pub mod estimate;
pub mod harness;
pub mod inar;
pub mod markov;
mod math;
pub mod model;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
pub use model::{ModelParams, DEFAULT_TRUNCATION};
pub use rng::RngSpec;
pub use series::CountSeries;
