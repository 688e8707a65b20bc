//! Rule generation methods and winner-rule inference.
//!
//! Every fitted classifier is a [`RuleBase`]: one fuzzy partition per attribute
//! and a list of rules whose antecedents index into those partitions. The two
//! single-rule-per-class methods store one set per class in each partition
//! (a Gaussian or a smoothed histogram); the grid methods store shared
//! linguistic partitions and one rule per occupied cell.

mod grid;
mod histogram;
mod mean_std;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, NormParam};
use crate::error::{ClassifyError, FitError, RuleBaseError};
use crate::membership::FuzzyPartition;

pub use grid::{
    certainty_grade, fit_modified_grid, fit_simple_grid, modified_partition, ClassCompatibility,
};
pub use histogram::{fit_histogram, histogram_bounds, smoothed_histogram};
pub use mean_std::fit_mean_std;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MeanStd,
    Histogram,
    SimpleGrid,
    ModifiedGrid,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::MeanStd,
        Method::Histogram,
        Method::SimpleGrid,
        Method::ModifiedGrid,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::MeanStd => "mean-std",
            Method::Histogram => "histogram",
            Method::SimpleGrid => "simple-grid",
            Method::ModifiedGrid => "modified-grid",
        }
    }

    /// Long name used in report tables.
    pub fn title(self) -> &'static str {
        match self {
            Method::MeanStd => "Mean and Standard Deviation",
            Method::Histogram => "Histogram",
            Method::SimpleGrid => "Simple Grid",
            Method::ModifiedGrid => "Modified Grid",
        }
    }

    fn uses_grid(self) -> bool {
        matches!(self, Method::SimpleGrid | Method::ModifiedGrid)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| format!("unknown method {s:?} (expected mean-std, histogram, simple-grid or modified-grid)"))
    }
}

/// Knobs shared by all rule generation methods.
///
/// Standard deviations are population deviations (divide by the class size).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Sets per attribute in the simple grid.
    pub grid_k: usize,
    /// Triangular bins behind each smoothed histogram.
    pub histogram_bins: usize,
    /// Triangular sets spanning the class overlap in the modified grid.
    pub overlap_inner_sets: usize,
    /// Lower bound applied to fitted Gaussian widths.
    pub sigma_floor: f64,
    /// Per-pattern cap on candidate grid cells before falling back to the
    /// single best set per attribute.
    pub cell_budget: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            grid_k: 5,
            histogram_bins: 20,
            overlap_inner_sets: 1,
            sigma_floor: 1e-6,
            cell_budget: 100_000,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<(), FitError> {
        if self.grid_k < 2 {
            return Err(FitError::Config(format!("grid_k must be >= 2, got {}", self.grid_k)));
        }
        if self.histogram_bins < 2 {
            return Err(FitError::Config(format!(
                "histogram_bins must be >= 2, got {}",
                self.histogram_bins
            )));
        }
        if self.overlap_inner_sets < 1 {
            return Err(FitError::Config("overlap_inner_sets must be >= 1".into()));
        }
        if !(self.sigma_floor.is_finite() && self.sigma_floor > 0.0) {
            return Err(FitError::Config(format!(
                "sigma_floor must be a positive number, got {}",
                self.sigma_floor
            )));
        }
        if self.cell_budget < 1 {
            return Err(FitError::Config("cell_budget must be >= 1".into()));
        }
        Ok(())
    }
}

/// `If x_1 is A_1 and ... and x_n is A_n then class C with certainty CF`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyRule {
    /// Set index into each attribute's partition.
    pub antecedents: Vec<usize>,
    /// `None` is the undecidable consequent; such rules never classify.
    pub consequent: Option<usize>,
    pub cf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Class(usize),
    Rejected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub outcome: Outcome,
    pub winner_score: f64,
    pub per_class_scores: Vec<f64>,
}

impl Prediction {
    /// Picks the unique strictly positive maximum, rejecting on all-zero
    /// scores or a tie between classes.
    pub fn from_scores(per_class_scores: Vec<f64>) -> Prediction {
        let winner_score = per_class_scores.iter().cloned().fold(0.0, f64::max);
        let mut leaders = per_class_scores
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == winner_score)
            .map(|(k, _)| k);
        let outcome = match (leaders.next(), leaders.next()) {
            (Some(k), None) if winner_score > 0.0 => Outcome::Class(k),
            _ => Outcome::Rejected,
        };
        Prediction {
            outcome,
            winner_score,
            per_class_scores,
        }
    }
}

/// Anything that maps a normalized pattern to a [`Prediction`].
pub trait Classifier {
    fn n_attributes(&self) -> usize;
    fn n_classes(&self) -> usize;
    fn classify(&self, x: &[f64]) -> Result<Prediction, ClassifyError>;
    /// Number of stored rules that can classify.
    fn rule_count(&self) -> usize;
}

/// A fitted, immutable fuzzy rule-based classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    method: Method,
    config: FitConfig,
    class_names: Vec<String>,
    attribute_names: Vec<String>,
    norm_params: Vec<NormParam>,
    partitions: Vec<FuzzyPartition>,
    rules: Vec<FuzzyRule>,
}

/// Constituent parts of a [`RuleBase`], validated by [`RuleBase::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBaseParts {
    pub method: Method,
    pub config: FitConfig,
    pub class_names: Vec<String>,
    pub attribute_names: Vec<String>,
    pub norm_params: Vec<NormParam>,
    pub partitions: Vec<FuzzyPartition>,
    pub rules: Vec<FuzzyRule>,
}

impl RuleBase {
    pub fn new(parts: RuleBaseParts) -> Result<RuleBase, RuleBaseError> {
        let n = parts.partitions.len();
        if n == 0 {
            return Err(RuleBaseError::NoAttributes);
        }
        for (name, len) in [
            ("attribute_names", parts.attribute_names.len()),
            ("norm_params", parts.norm_params.len()),
        ] {
            if len != n {
                return Err(RuleBaseError::Inconsistent(format!(
                    "{name} has {len} entries for {n} partitions"
                )));
            }
        }
        if parts.class_names.is_empty() {
            return Err(RuleBaseError::Inconsistent("no classes".into()));
        }
        for p in &parts.partitions {
            if p.labels.len() != p.sets.len() || p.sets.is_empty() {
                return Err(RuleBaseError::Inconsistent("partition labels do not match its sets".into()));
            }
            for s in &p.sets {
                s.validate()?;
            }
        }
        let c = parts.class_names.len();
        for (rule, r) in parts.rules.iter().enumerate() {
            if r.antecedents.len() != n {
                return Err(RuleBaseError::Antecedents {
                    rule,
                    expected: n,
                    found: r.antecedents.len(),
                });
            }
            for (attribute, (&set, p)) in r.antecedents.iter().zip(&parts.partitions).enumerate() {
                if set >= p.len() {
                    return Err(RuleBaseError::SetIndex {
                        rule,
                        attribute,
                        set,
                        available: p.len(),
                    });
                }
            }
            if !(r.cf.is_finite() && (0.0..=1.0).contains(&r.cf)) {
                return Err(RuleBaseError::Certainty { rule, cf: r.cf });
            }
            match r.consequent {
                Some(class) if class >= c => {
                    return Err(RuleBaseError::Consequent {
                        rule,
                        class,
                        classes: c,
                    })
                }
                Some(_) if r.cf == 0.0 => return Err(RuleBaseError::NullConsequent { rule }),
                None if r.cf != 0.0 => return Err(RuleBaseError::NullConsequent { rule }),
                _ => {}
            }
        }
        if !parts.method.uses_grid() && parts.rules.len() != c {
            return Err(RuleBaseError::Inconsistent(format!(
                "{} rule base needs one rule per class ({c}), found {}",
                parts.method,
                parts.rules.len()
            )));
        }
        Ok(RuleBase {
            method: parts.method,
            config: parts.config,
            class_names: parts.class_names,
            attribute_names: parts.attribute_names,
            norm_params: parts.norm_params,
            partitions: parts.partitions,
            rules: parts.rules,
        })
    }

    pub fn into_parts(self) -> RuleBaseParts {
        RuleBaseParts {
            method: self.method,
            config: self.config,
            class_names: self.class_names,
            attribute_names: self.attribute_names,
            norm_params: self.norm_params,
            partitions: self.partitions,
            rules: self.rules,
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn config(&self) -> &FitConfig {
        &self.config
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn norm_params(&self) -> &[NormParam] {
        &self.norm_params
    }

    pub fn partitions(&self) -> &[FuzzyPartition] {
        &self.partitions
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    /// Compatibility `A_j1(x_1) * ... * A_jn(x_n)` of `x` with `rule`.
    pub fn compatibility(&self, rule: &FuzzyRule, x: &[f64]) -> f64 {
        let mut grade = 1.0;
        for ((&set, p), &xi) in rule.antecedents.iter().zip(&self.partitions).zip(x) {
            grade *= p.sets[set].eval(xi);
            if grade == 0.0 {
                break;
            }
        }
        grade
    }

    /// Shared constructor for fitted rule bases.
    pub(crate) fn fitted(
        method: Method,
        config: FitConfig,
        ds: &Dataset,
        partitions: Vec<FuzzyPartition>,
        rules: Vec<FuzzyRule>,
    ) -> Result<RuleBase, FitError> {
        RuleBase::new(RuleBaseParts {
            method,
            config,
            class_names: ds.class_names().to_vec(),
            attribute_names: ds.attribute_names().to_vec(),
            norm_params: ds.norm_params().to_vec(),
            partitions,
            rules,
        })
        .map_err(|e| FitError::Config(format!("fitted rule base is inconsistent: {e}")))
    }
}

impl Classifier for RuleBase {
    fn n_attributes(&self) -> usize {
        self.partitions.len()
    }

    fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Winner-rule inference: each rule scores `compatibility * cf`, each class
    /// keeps its best rule, and the best class wins if it is unique and positive.
    fn classify(&self, x: &[f64]) -> Result<Prediction, ClassifyError> {
        if x.len() != self.n_attributes() {
            return Err(ClassifyError::Dimension {
                expected: self.n_attributes(),
                found: x.len(),
            });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFinite(i));
        }
        let memberships: Vec<Vec<f64>> = self.partitions.iter().zip(x).map(|(p, &xi)| p.memberships(xi)).collect();
        let mut scores = vec![0.0; self.n_classes()];
        for rule in &self.rules {
            let Some(class) = rule.consequent else { continue };
            let mut grade = 1.0;
            for (&set, m) in rule.antecedents.iter().zip(&memberships) {
                grade *= m[set];
                if grade == 0.0 {
                    break;
                }
            }
            let score = grade * rule.cf;
            if score > scores[class] {
                scores[class] = score;
            }
        }
        Ok(Prediction::from_scores(scores))
    }

    fn rule_count(&self) -> usize {
        self.rules.iter().filter(|r| r.consequent.is_some()).count()
    }
}

/// Fits `method` on `ds`.
pub fn fit(method: Method, ds: &Dataset, cfg: &FitConfig) -> Result<RuleBase, FitError> {
    match method {
        Method::MeanStd => fit_mean_std(ds, cfg),
        Method::Histogram => fit_histogram(ds, cfg),
        Method::SimpleGrid => fit_simple_grid(ds, cfg),
        Method::ModifiedGrid => fit_modified_grid(ds, cfg),
    }
}

pub(crate) fn check_nonempty_classes(ds: &Dataset) -> Result<Vec<usize>, FitError> {
    let counts = ds.class_counts();
    if let Some(k) = counts.iter().position(|&m| m == 0) {
        return Err(FitError::EmptyClass(ds.class_names()[k].clone()));
    }
    Ok(counts)
}
