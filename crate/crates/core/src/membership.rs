//! Membership functions, fuzzy partitions and the Max/Min/complement operators.
//!
//! Every membership function maps a normalized attribute value to a degree in
//! `[0, 1]`. Inputs are clamped into the unit interval before evaluation, so the
//! outermost sets of a partition behave as shoulders.

use serde::{Deserialize, Serialize};

use crate::error::PartitionError;

/// A single fuzzy set over the unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum MembershipFunction {
    /// `exp(-(x - mu)^2 / (2 sigma^2))`. A zero `sigma` degenerates to a crisp
    /// indicator of `x == mu`.
    Gaussian { mu: f64, sigma: f64 },
    /// Peak of 1 at `center`, linear down to 0 at `left` and `right`.
    Triangular { left: f64, center: f64, right: f64 },
    /// 1 on `[b, c]`, linear ramps on `[a, b]` and `[c, d]`.
    Trapezoid { a: f64, b: f64, c: f64, d: f64 },
    /// Step function: `values[h]` on `[bounds[h], bounds[h + 1])`, last interval closed.
    PiecewiseConstant { values: Vec<f64>, bounds: Vec<f64> },
}

impl MembershipFunction {
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            MembershipFunction::Gaussian { mu, sigma } => {
                if *sigma == 0.0 {
                    return if x == *mu { 1.0 } else { 0.0 };
                }
                let d = x - mu;
                (-(d * d) / (2.0 * sigma * sigma)).exp()
            }
            MembershipFunction::Triangular {
                left,
                center,
                right,
            } => {
                if x == *center {
                    1.0
                } else if x < *center {
                    if x <= *left {
                        0.0
                    } else {
                        (x - left) / (center - left)
                    }
                } else if x >= *right {
                    0.0
                } else {
                    (right - x) / (right - center)
                }
            }
            MembershipFunction::Trapezoid { a, b, c, d } => {
                if x >= *b && x <= *c {
                    1.0
                } else if x < *b {
                    if x <= *a {
                        0.0
                    } else {
                        (x - a) / (b - a)
                    }
                } else if x >= *d {
                    0.0
                } else {
                    (d - x) / (d - c)
                }
            }
            MembershipFunction::PiecewiseConstant { values, bounds } => {
                values[interval_index(bounds, x)]
            }
        }
    }

    /// Checks the per-variant shape constraints and that every parameter is finite.
    pub fn validate(&self) -> Result<(), PartitionError> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            MembershipFunction::Gaussian { mu, sigma } => {
                if !finite(&[*mu, *sigma]) || *sigma < 0.0 {
                    return Err(PartitionError::InvalidShape("gaussian needs finite mu and sigma >= 0"));
                }
            }
            MembershipFunction::Triangular {
                left,
                center,
                right,
            } => {
                if !finite(&[*left, *center, *right]) || left > center || center > right {
                    return Err(PartitionError::InvalidShape("triangular needs left <= center <= right"));
                }
            }
            MembershipFunction::Trapezoid { a, b, c, d } => {
                if !finite(&[*a, *b, *c, *d]) || a > b || b > c || c > d {
                    return Err(PartitionError::InvalidShape("trapezoid needs a <= b <= c <= d"));
                }
            }
            MembershipFunction::PiecewiseConstant { values, bounds } => {
                if values.is_empty() || bounds.len() != values.len() + 1 {
                    return Err(PartitionError::InvalidShape(
                        "piecewise-constant needs H values and H + 1 bounds",
                    ));
                }
                if !finite(values) || values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return Err(PartitionError::InvalidShape("piecewise-constant values must lie in [0, 1]"));
                }
                if !finite(bounds)
                    || bounds[0] != 0.0
                    || bounds[bounds.len() - 1] != 1.0
                    || bounds.windows(2).any(|w| w[0] >= w[1])
                {
                    return Err(PartitionError::InvalidShape(
                        "piecewise-constant bounds must rise strictly from 0 to 1",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Index `h` with `bounds[h] <= x < bounds[h + 1]`; the final interval is closed.
fn interval_index(bounds: &[f64], x: f64) -> usize {
    let intervals = bounds.len() - 1;
    // first bound strictly greater than x, minus one
    let upper = bounds.partition_point(|b| *b <= x);
    upper.saturating_sub(1).min(intervals - 1)
}

pub fn fuzzy_union(a: f64, b: f64) -> f64 {
    a.max(b)
}

pub fn fuzzy_intersection(a: f64, b: f64) -> f64 {
    a.min(b)
}

pub fn fuzzy_complement(a: f64) -> f64 {
    1.0 - a
}

/// An ordered family of fuzzy sets over one attribute, with display labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyPartition {
    pub labels: Vec<String>,
    pub sets: Vec<MembershipFunction>,
}

impl FuzzyPartition {
    pub fn new(sets: Vec<MembershipFunction>, labels: Vec<String>) -> Result<Self, PartitionError> {
        if sets.is_empty() {
            return Err(PartitionError::Empty);
        }
        if labels.len() != sets.len() {
            return Err(PartitionError::LabelCount {
                sets: sets.len(),
                labels: labels.len(),
            });
        }
        for set in &sets {
            set.validate()?;
        }
        Ok(FuzzyPartition { labels, sets })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Memberships of `x` in every set, in partition order.
    pub fn memberships(&self, x: f64) -> Vec<f64> {
        self.sets.iter().map(|s| s.eval(x)).collect()
    }
}

/// `k` homogeneous triangular sets with centers `i / (k - 1)` and half-width
/// `1 / (k - 1)`. Adjacent sets share their outer vertices with the
/// neighbouring centers, so memberships sum to one everywhere on `[0, 1]`.
pub fn build_uniform_partition(k: usize) -> Result<FuzzyPartition, PartitionError> {
    if k < 2 {
        return Err(PartitionError::TooFewSets(k));
    }
    let centers: Vec<f64> = (0..k).map(|i| i as f64 / (k - 1) as f64).collect();
    let sets = (0..k)
        .map(|i| MembershipFunction::Triangular {
            left: centers[i.saturating_sub(1)],
            center: centers[i],
            right: centers[(i + 1).min(k - 1)],
        })
        .collect();
    FuzzyPartition::new(sets, linguistic_labels(k))
}

/// Conventional names for `k` ordered sets (S, MS, M, ML, L for five).
pub fn linguistic_labels(k: usize) -> Vec<String> {
    let names: &[&str] = match k {
        2 => &["S", "L"],
        3 => &["S", "M", "L"],
        4 => &["S", "MS", "ML", "L"],
        5 => &["S", "MS", "M", "ML", "L"],
        7 => &["VS", "S", "MS", "M", "ML", "L", "VL"],
        _ => &[],
    };
    if names.is_empty() {
        (1..=k).map(|i| format!("F{i}")).collect()
    } else {
        names.iter().map(|s| s.to_string()).collect()
    }
}
