//! Core library for `pyqu`: measures low-level quality metrics of Python
//! source before and after git commits, assembles per-quality-attribute delta
//! feature vectors, and trains/applies binary classifiers that label commits
//! as quality-enhancing.
//!
//! The crate is organized around the pipeline stages:
//!
//! - [`metrics`] — parse Python source and compute the fifteen file-level
//!   metrics (complexity, volume, style, documentation, coupling, ...).
//! - [`mine`] — walk a git repository, apply the commit filters, and extract
//!   pre/post file snapshots plus repo-level reproducibility scores.
//! - [`delta`] — aggregate per-file metrics into commit-level values, compute
//!   deltas, and assemble per-attribute feature vectors.
//! - [`classify`] — SMOTE balancing, stratified splitting, from-scratch tree /
//!   forest / boosting / logistic models, evaluation, and model selection.
//! - [`dataset`] — labeled-commit dataset I/O, the change-type taxonomy
//!   catalog, and the supporting statistics (kappa, sample sizing, SRS).
//!
//! All operations are pure functions of their inputs plus explicit seeds, so
//! the whole pipeline is reproducible byte for byte.

pub mod classify;
pub mod dataset;
pub mod delta;
pub mod exec;
pub mod metrics;
pub mod mine;
pub mod qa;
pub mod seed;

#[doc(hidden)]
pub mod testsupport;

pub use qa::QualityAttribute;
