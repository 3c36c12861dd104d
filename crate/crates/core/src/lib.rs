//! Filter feature selection and binary classification for tabular clinical data.
//!
//! This crate holds the algorithmic core: special functions for p-values, the
//! statistical tests behind the ANOVA, chi-square and mutual-information
//! selectors, ten from-scratch classifiers, evaluation metrics and stratified
//! fold assignment. It is `no_std` and needs only `alloc`; file formats, the
//! experiment driver and the CLI live in the `cardio-fs` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod classifiers;
pub mod cv;
pub mod dataset;
pub mod matrix;
pub mod metrics;
pub mod selection;
pub mod special;
pub mod stats;

pub use classifiers::{
    fit, predict_label, predict_proba, ClassifierError, ClassifierKind, ClassifierSpec,
    PredictionScores, TrainedModel,
};
pub use dataset::{Dataset, DatasetError, FeatureKind, FeatureSchema};
pub use matrix::Matrix;
pub use metrics::{ConfusionMatrix, MetricRecord};
pub use selection::{SelectionMethod, SelectionOptions, SelectionResult};
pub use special::Probability;
