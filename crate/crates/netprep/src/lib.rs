//! Preprocessing and feature-selection toolkit for network intrusion
//! detection datasets.
//!
//! The crate covers the full pipeline from raw ARFF/CSV flow records to
//! evaluation-ready numeric datasets:
//!
//! - [`dataset`]: columnar datasets, ARFF/CSV round-trip I/O, projection
//!   onto feature sets (including the MVF/MVRF presets), kind splitting
//! - [`discretize`]: equal-frequency binning of numeric columns
//! - [`info_gain`]: entropy and information-gain ranking
//! - [`pmf`]: relative-frequency mapping of nominal features, batch and
//!   sliding-window streaming
//! - [`normalize`]: decimal / min-max / statistical scaling and the
//!   hybrid nominal+numeric pipeline
//! - [`classifiers`]: small built-in classifiers and the evaluation
//!   harness (detection rate, false-positive rate, test time)
//! - [`sbs`]: modified sequential backward search with threshold margins
//! - [`datagen`]: the dataset-variant grid generator and IANA baseline
//! - [`synth`]: seeded synthetic flow-record sample for tests and demos

pub mod classifiers;
pub mod dataset;
pub mod datagen;
pub mod discretize;
mod error;
pub mod info_gain;
pub mod normalize;
pub mod pmf;
pub mod sbs;
mod stats;
pub mod synth;

pub use error::{Error, Result};
