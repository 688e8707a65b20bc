use crate::classifiers::{check_nonempty_classes, FitConfig, FuzzyRule, Method, RuleBase};
use crate::dataset::Dataset;
use crate::error::FitError;
use crate::membership::{FuzzyPartition, MembershipFunction};

/// One Gaussian rule per class: each antecedent is centred on the class mean
/// of that attribute with the class (population) standard deviation as width.
pub fn fit_mean_std(ds: &Dataset, cfg: &FitConfig) -> Result<RuleBase, FitError> {
    cfg.validate()?;
    let counts = check_nonempty_classes(ds)?;
    let n = ds.n_attributes();
    let c = ds.n_classes();

    let mut sums = vec![vec![0.0; n]; c];
    for p in ds.patterns() {
        for (s, x) in sums[p.class].iter_mut().zip(&p.x) {
            *s += x;
        }
    }
    let means: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &m)| s.into_iter().map(|v| v / m as f64).collect())
        .collect();

    let mut sq = vec![vec![0.0; n]; c];
    for p in ds.patterns() {
        for ((acc, x), mu) in sq[p.class].iter_mut().zip(&p.x).zip(&means[p.class]) {
            *acc += (x - mu) * (x - mu);
        }
    }
    let sigmas: Vec<Vec<f64>> = sq
        .into_iter()
        .zip(&counts)
        .map(|(s, &m)| s.into_iter().map(|v| (v / m as f64).sqrt().max(cfg.sigma_floor)).collect())
        .collect();

    let partitions = (0..n)
        .map(|i| {
            let sets = (0..c)
                .map(|k| MembershipFunction::Gaussian {
                    mu: means[k][i],
                    sigma: sigmas[k][i],
                })
                .collect();
            FuzzyPartition::new(sets, ds.class_names().to_vec())
        })
        .collect::<Result<Vec<_>, _>>()?;

    let rules = (0..c)
        .map(|k| FuzzyRule {
            antecedents: vec![k; n],
            consequent: Some(k),
            cf: 1.0,
        })
        .collect();

    RuleBase::fitted(Method::MeanStd, *cfg, ds, partitions, rules)
}
