//! Accuracy, confusion and rejection bookkeeping, and the four-method comparison.

use std::fmt::Write as _;

use serde::Serialize;

use crate::classifiers::{fit, Classifier, FitConfig, Method, Outcome};
use crate::dataset::{split, Dataset, SplitScheme};
use crate::error::{ClassifyError, EvalError};
use crate::io::envelope_json;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    /// Correct predictions over all patterns; rejections count as errors.
    pub accuracy: f64,
    pub total: usize,
    pub correct: usize,
    /// `confusion[actual][predicted]` over non-rejected patterns.
    pub confusion: Vec<Vec<usize>>,
    pub rejected: usize,
    pub rejected_per_class: Vec<usize>,
    pub rule_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_fold: Option<Vec<EvaluationReport>>,
}

impl EvaluationReport {
    fn from_counts(confusion: Vec<Vec<usize>>, rejected_per_class: Vec<usize>, rule_count: usize) -> Self {
        let correct: usize = (0..confusion.len()).map(|k| confusion[k][k]).sum();
        let rejected: usize = rejected_per_class.iter().sum();
        let total = confusion.iter().flatten().sum::<usize>() + rejected;
        EvaluationReport {
            accuracy: if total == 0 { 0.0 } else { correct as f64 / total as f64 },
            total,
            correct,
            confusion,
            rejected,
            rejected_per_class,
            rule_count,
            per_fold: None,
        }
    }

    /// Pools fold reports: counts are summed, rule counts averaged (rounded).
    pub fn pooled(folds: Vec<EvaluationReport>) -> EvaluationReport {
        let c = folds.first().map_or(0, |f| f.confusion.len());
        let mut confusion = vec![vec![0; c]; c];
        let mut rejected = vec![0; c];
        for f in &folds {
            for (row, frow) in confusion.iter_mut().zip(&f.confusion) {
                for (v, fv) in row.iter_mut().zip(frow) {
                    *v += fv;
                }
            }
            for (r, fr) in rejected.iter_mut().zip(&f.rejected_per_class) {
                *r += fr;
            }
        }
        let rules = if folds.is_empty() {
            0
        } else {
            (folds.iter().map(|f| f.rule_count).sum::<usize>() as f64 / folds.len() as f64).round() as usize
        };
        let mut report = EvaluationReport::from_counts(confusion, rejected, rules);
        report.per_fold = Some(folds);
        report
    }
}

/// Classifies every pattern of `test` and tallies the outcome.
pub fn evaluate<C: Classifier + ?Sized>(clf: &C, test: &Dataset) -> Result<EvaluationReport, EvalError> {
    if test.n_attributes() != clf.n_attributes() {
        return Err(ClassifyError::Dimension {
            expected: clf.n_attributes(),
            found: test.n_attributes(),
        }
        .into());
    }
    let c = clf.n_classes();
    if test.n_classes() != c {
        return Err(EvalError::ClassCount {
            expected: c,
            found: test.n_classes(),
        });
    }
    let mut confusion = vec![vec![0; c]; c];
    let mut rejected = vec![0; c];
    for p in test.patterns() {
        match clf.classify(&p.x)?.outcome {
            Outcome::Class(k) => confusion[p.class][k] += 1,
            Outcome::Rejected => rejected[p.class] += 1,
        }
    }
    Ok(EvaluationReport::from_counts(confusion, rejected, clf.rule_count()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetFingerprint {
    pub patterns: usize,
    pub attributes: usize,
    pub class_names: Vec<String>,
    pub class_counts: Vec<usize>,
}

impl DatasetFingerprint {
    pub fn of(ds: &Dataset) -> Self {
        DatasetFingerprint {
            patterns: ds.len(),
            attributes: ds.n_attributes(),
            class_names: ds.class_names().to_vec(),
            class_counts: ds.class_counts(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodReport {
    pub method: Method,
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub dataset: DatasetFingerprint,
    pub scheme: String,
    pub config: FitConfig,
    pub methods: Vec<MethodReport>,
}

impl ComparisonReport {
    pub fn get(&self, method: Method) -> Option<&EvaluationReport> {
        self.methods.iter().find(|r| r.method == method).map(|r| &r.report)
    }

    /// Plain-text table of classification rates, one row per method.
    pub fn render_table(&self) -> String {
        let d = &self.dataset;
        let classes: Vec<String> = d
            .class_names
            .iter()
            .zip(&d.class_counts)
            .map(|(name, count)| format!("{name}={count}"))
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "Classification rates for breast cancer data");
        let _ = writeln!(
            out,
            "({}, {} patterns, {} attributes, classes {})",
            self.scheme,
            d.patterns,
            d.attributes,
            classes.join(" ")
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<30}{:>10}{:>10}{:>8}", "Method", "Rate", "Rejected", "Rules");
        for r in &self.methods {
            let _ = writeln!(
                out,
                "{:<30}{:>10}{:>10}{:>8}",
                r.method.title(),
                format!("{:.2}%", r.report.accuracy * 100.0),
                r.report.rejected,
                r.report.rule_count
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        envelope_json("comparison-report", self)
    }
}

/// Fits and evaluates each method under the same splits.
pub fn compare_methods(
    ds: &Dataset,
    cfg: &FitConfig,
    scheme: SplitScheme,
    per_fold_normalization: bool,
    methods: &[Method],
) -> Result<ComparisonReport, EvalError> {
    if methods.is_empty() {
        return Err(EvalError::NoMethods);
    }
    let folds = split(ds, scheme, per_fold_normalization)?;
    let mut reports = Vec::with_capacity(methods.len());
    for &method in methods {
        let mut per_fold = Vec::with_capacity(folds.len());
        for fold in &folds {
            let rb = fit(method, &fold.train, cfg)?;
            per_fold.push(evaluate(&rb, &fold.test)?);
        }
        let report = match scheme {
            SplitScheme::Resubstitution => per_fold.pop().expect("one fold"),
            SplitScheme::KFold { .. } => EvaluationReport::pooled(per_fold),
        };
        reports.push(MethodReport { method, report });
    }
    Ok(ComparisonReport {
        dataset: DatasetFingerprint::of(ds),
        scheme: scheme.to_string(),
        config: *cfg,
        methods: reports,
    })
}
