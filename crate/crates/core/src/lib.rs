//! Fuzzy if-then rule classifiers built directly from training patterns.
//!
//! Four rule generation methods are provided:
//!
//! * [`classifiers::fit_mean_std`]: one rule per class with Gaussian
//!   antecedents from the class mean and standard deviation,
//! * [`classifiers::fit_histogram`]: one rule per class with smoothed
//!   histogram antecedents,
//! * [`classifiers::fit_simple_grid`]: one rule per occupied cell of a
//!   homogeneous fuzzy grid, with certainty grades,
//! * [`classifiers::fit_modified_grid`]: the same grid procedure over
//!   partitions that only split the region where the classes overlap.
//!
//! All of them produce a [`RuleBase`] classified by the single winner rule.

pub mod classifiers;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod membership;

pub use classifiers::{fit, Classifier, FitConfig, FuzzyRule, Method, Outcome, Prediction, RuleBase};
pub use dataset::{normalize, parse_wdbc, split, Dataset, Pattern, SplitScheme};
pub use evaluation::{compare_methods, evaluate, ComparisonReport, EvaluationReport};
pub use io::{load_rulebase, save_rulebase};
pub use membership::{build_uniform_partition, FuzzyPartition, MembershipFunction};
