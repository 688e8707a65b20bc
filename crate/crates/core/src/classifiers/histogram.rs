use crate::classifiers::{check_nonempty_classes, FitConfig, FuzzyRule, Method, RuleBase};
use crate::dataset::Dataset;
use crate::error::FitError;
use crate::membership::{build_uniform_partition, FuzzyPartition, MembershipFunction};

/// Interval bounds of the smoothed histogram: `0`, the 0.5-level cuts
/// `(h - 1/2) / (bins - 1)` for `h = 1..bins-1`, and `1`. Interval `h` is the
/// 0.5-level set of the `h`-th uniform triangular bin.
pub fn histogram_bounds(bins: usize) -> Vec<f64> {
    assert!(bins >= 2, "histogram needs at least two bins");
    let mut bounds = Vec::with_capacity(bins + 1);
    bounds.push(0.0);
    for h in 1..bins {
        bounds.push((h as f64 - 0.5) / (bins - 1) as f64);
    }
    bounds.push(1.0);
    bounds
}

/// Smoothed histogram of `values` over `bins` triangular bins, scaled so the
/// peak is 1. An all-zero histogram is returned unscaled.
pub fn smoothed_histogram(values: &[f64], bins: usize) -> Vec<f64> {
    let partition = build_uniform_partition(bins).expect("bins >= 2");
    let m = values.len() as f64;
    let mut heights: Vec<f64> = partition
        .sets
        .iter()
        .map(|f| values.iter().map(|&x| f.eval(x)).sum::<f64>() / m)
        .collect();
    let peak = heights.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        for h in &mut heights {
            *h /= peak;
        }
    }
    heights
}

/// One rule per class whose antecedents are the class's smoothed histograms,
/// evaluated as step functions over [`histogram_bounds`].
pub fn fit_histogram(ds: &Dataset, cfg: &FitConfig) -> Result<RuleBase, FitError> {
    cfg.validate()?;
    check_nonempty_classes(ds)?;
    let n = ds.n_attributes();
    let c = ds.n_classes();
    let bounds = histogram_bounds(cfg.histogram_bins);

    let mut partitions = Vec::with_capacity(n);
    for i in 0..n {
        let mut sets = Vec::with_capacity(c);
        for k in 0..c {
            let column: Vec<f64> = ds
                .patterns()
                .iter()
                .filter(|p| p.class == k)
                .map(|p| p.x[i])
                .collect();
            let values = smoothed_histogram(&column, cfg.histogram_bins);
            if values.iter().all(|v| *v == 0.0) {
                log::warn!(
                    "all-zero histogram for class {} attribute {}",
                    ds.class_names()[k],
                    ds.attribute_names()[i]
                );
            }
            sets.push(MembershipFunction::PiecewiseConstant {
                values,
                bounds: bounds.clone(),
            });
        }
        partitions.push(FuzzyPartition::new(sets, ds.class_names().to_vec())?);
    }

    let rules = (0..c)
        .map(|k| FuzzyRule {
            antecedents: vec![k; n],
            consequent: Some(k),
            cf: 1.0,
        })
        .collect();

    RuleBase::fitted(Method::Histogram, *cfg, ds, partitions, rules)
}
