//! Excursion-set topology of stationary planar Gaussian fields.
//!
//! The crate samples fields from a small catalogue of models, counts excursion
//! and level-set components inside square windows, classifies grid critical
//! points through merge trees, and runs the Monte Carlo experiments built on
//! those counts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod lab;
pub mod model;
pub mod parallel;
mod quad;
pub mod seed;
pub mod shift;
pub mod stats;
pub mod synth;
pub mod topology;

pub use error::{Error, FormatError, Result};
pub use grid::{FieldSample, GridSpec};
pub use model::{FieldModel, NormalizationReport, PowerLawSpectrum};
pub use seed::seed_split;
pub use topology::{ComponentCensus, ConnectivityPolicy, CriticalCensus, MergeTree};
