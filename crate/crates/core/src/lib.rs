//! Fat-tailed cost-risk analysis for the Olympic Games cost dataset.
//!
//! Ratios of actual to estimated cost are loaded with [`dataset`], described
//! and tested with [`stats`], fitted with [`distfit`], compared with
//! [`model_select`] and turned into decisions with [`tail_risk`]. The
//! [`tail_sim`] module simulates how sample means behave under fat tails,
//! and [`cli`] drives everything from the command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dataset;
pub mod distfit;
pub mod error;
pub mod extended;
pub mod model_select;
pub mod optim;
pub mod quad;
pub mod report;
pub mod rng;
pub mod special;
pub mod stats;
pub mod tail_risk;
pub mod tail_sim;

pub use dataset::{overrun_ratios, Cohort, GamesRecord, GamesTable, OverrunSample, Season};
pub use distfit::{Fit, GpdFit, LognormalFit, ParetoFit, XminResult};
pub use error::{Error, Result};
pub use extended::Extended;
pub use model_select::{vuong_test, VuongResult};
pub use tail_risk::{MeanEstimate, MeanMethod, Regime};
pub use tail_sim::{SimDistribution, SimulationTrace};
