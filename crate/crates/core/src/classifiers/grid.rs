//! Fuzzy grid rule generation with certainty grades.
//!
//! Each cell of the grid (one set per attribute) is a candidate rule. Its
//! consequent is the class with the largest summed compatibility over the
//! training patterns and its certainty grade measures how dominant that class
//! is. Cells are enumerated sparsely: only cells that some training pattern is
//! compatible with are visited, because every other cell has all class sums
//! equal to zero and therefore a null consequent.

use std::collections::BTreeSet;

use crate::classifiers::{check_nonempty_classes, FitConfig, FuzzyRule, Method, RuleBase};
use crate::dataset::Dataset;
use crate::error::FitError;
use crate::membership::{build_uniform_partition, FuzzyPartition, MembershipFunction};

/// Per-class sums of compatibility grades for one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCompatibility {
    pub sums: Vec<f64>,
}

impl ClassCompatibility {
    /// The unique class with the largest positive sum, if any.
    pub fn consequent(&self) -> Option<usize> {
        let best = self.sums.iter().cloned().fold(0.0, f64::max);
        if best <= 0.0 {
            return None;
        }
        let mut winners = self.sums.iter().enumerate().filter(|(_, s)| **s == best);
        match (winners.next(), winners.next()) {
            (Some((k, _)), None) => Some(k),
            _ => None,
        }
    }

    /// Mean sum of the classes other than `winner`; zero for a single class.
    pub fn beta_bar(&self, winner: usize) -> f64 {
        let c = self.sums.len();
        if c < 2 {
            return 0.0;
        }
        let others: f64 = self
            .sums
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != winner)
            .map(|(_, s)| s)
            .sum();
        others / (c - 1) as f64
    }

    /// Consequent and certainty grade `(beta_winner - beta_bar) / sum(beta)`;
    /// `(None, 0)` when the consequent is undecidable.
    pub fn certainty(&self) -> (Option<usize>, f64) {
        match self.consequent() {
            None => (None, 0.0),
            Some(k) => {
                let total: f64 = self.sums.iter().sum();
                (Some(k), (self.sums[k] - self.beta_bar(k)) / total)
            }
        }
    }
}

/// Consequent and certainty grade for the given class sums.
pub fn certainty_grade(sums: &[f64]) -> (Option<usize>, f64) {
    ClassCompatibility { sums: sums.to_vec() }.certainty()
}

/// Simple grid: every attribute gets the same homogeneous partition of
/// `cfg.grid_k` triangular sets.
pub fn fit_simple_grid(ds: &Dataset, cfg: &FitConfig) -> Result<RuleBase, FitError> {
    cfg.validate()?;
    let partition = build_uniform_partition(cfg.grid_k)?;
    let partitions = vec![partition; ds.n_attributes()];
    let rules = grid_rules(ds, &partitions, cfg.cell_budget);
    RuleBase::fitted(Method::SimpleGrid, *cfg, ds, partitions, rules)
}

/// Modified grid: each attribute is partitioned only where the two classes
/// overlap (see [`modified_partition`]); rules and certainty grades are then
/// generated as for the simple grid.
pub fn fit_modified_grid(ds: &Dataset, cfg: &FitConfig) -> Result<RuleBase, FitError> {
    cfg.validate()?;
    if ds.n_classes() != 2 {
        return Err(FitError::UnsupportedClassCount(ds.n_classes()));
    }
    check_nonempty_classes(ds)?;
    let partitions = (0..ds.n_attributes())
        .map(|i| {
            let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 2];
            for p in ds.patterns() {
                let r = &mut ranges[p.class];
                r.0 = r.0.min(p.x[i]);
                r.1 = r.1.max(p.x[i]);
            }
            modified_partition(ranges[0], ranges[1], cfg.overlap_inner_sets)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rules = grid_rules(ds, &partitions, cfg.cell_budget);
    RuleBase::fitted(Method::ModifiedGrid, *cfg, ds, partitions, rules)
}

/// Partition of one attribute from the two class ranges `[lo, hi]`.
///
/// With an overlap `[o0, o1]` of positive width the result is a left shoulder,
/// `inner` triangles of spacing `(o1 - o0) / inner` tiling the overlap, and a
/// right shoulder. Neighbouring sets cross at 0.5, with the outer crossings at
/// `o0` and `o1`, and memberships sum to one. Without such an overlap the
/// attribute is split into two sets crossing at 0.5 in the middle of the gap
/// between the classes.
pub fn modified_partition(a: (f64, f64), b: (f64, f64), inner: usize) -> Result<FuzzyPartition, FitError> {
    let o0 = a.0.max(b.0);
    let o1 = a.1.min(b.1);
    if o1 <= o0 {
        // gap (possibly of zero width) between the two class ranges
        let (g0, g1) = (o1, o0);
        let sets = vec![
            MembershipFunction::Trapezoid {
                a: g0.min(0.0),
                b: g0.min(0.0),
                c: g0,
                d: g1,
            },
            MembershipFunction::Trapezoid {
                a: g0,
                b: g1,
                c: g1.max(1.0),
                d: g1.max(1.0),
            },
        ];
        return Ok(FuzzyPartition::new(sets, vec!["low".into(), "high".into()])?);
    }

    let spacing = (o1 - o0) / inner as f64;
    let centers: Vec<f64> = (0..inner).map(|j| o0 + (j as f64 + 0.5) * spacing).collect();
    let first = centers[0];
    let last = centers[inner - 1];
    let mut sets = Vec::with_capacity(inner + 2);
    let mut labels = Vec::with_capacity(inner + 2);

    let shoulder = (first - spacing).min(0.0);
    sets.push(MembershipFunction::Trapezoid {
        a: shoulder,
        b: shoulder,
        c: first - spacing,
        d: first,
    });
    labels.push("low".to_string());
    for (j, &center) in centers.iter().enumerate() {
        sets.push(MembershipFunction::Triangular {
            left: center - spacing,
            center,
            right: center + spacing,
        });
        labels.push(if inner == 1 {
            "overlap".to_string()
        } else {
            format!("overlap{}", j + 1)
        });
    }
    let shoulder = (last + spacing).max(1.0);
    sets.push(MembershipFunction::Trapezoid {
        a: last,
        b: last + spacing,
        c: shoulder,
        d: shoulder,
    });
    labels.push("high".to_string());
    Ok(FuzzyPartition::new(sets, labels)?)
}

/// Sets of `partition` with nonzero membership at `x`, with their memberships.
fn active_sets(partition: &FuzzyPartition, x: f64) -> Vec<(usize, f64)> {
    partition
        .sets
        .iter()
        .enumerate()
        .map(|(s, f)| (s, f.eval(x)))
        .filter(|(_, v)| *v > 0.0)
        .collect()
}

/// Every cell that at least one training pattern is compatible with.
///
/// When a pattern's cross product of active sets exceeds `budget` cells, only
/// its best set per attribute is used (first one on ties).
pub(crate) fn candidate_cells(ds: &Dataset, partitions: &[FuzzyPartition], budget: usize) -> BTreeSet<Vec<usize>> {
    let mut cells = BTreeSet::new();
    for p in ds.patterns() {
        let active: Vec<Vec<(usize, f64)>> = partitions.iter().zip(&p.x).map(|(part, &x)| active_sets(part, x)).collect();
        if active.iter().any(|a| a.is_empty()) {
            continue;
        }
        let product = active
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.len()).filter(|&v| v <= budget));
        match product {
            Some(_) => {
                let mut cell = vec![0; active.len()];
                expand(&active, 0, &mut cell, &mut cells);
            }
            None => {
                let best = active
                    .iter()
                    .map(|a| {
                        a.iter()
                            .fold((usize::MAX, f64::NEG_INFINITY), |acc, &(s, v)| if v > acc.1 { (s, v) } else { acc })
                            .0
                    })
                    .collect();
                cells.insert(best);
            }
        }
    }
    cells
}

fn expand(active: &[Vec<(usize, f64)>], depth: usize, cell: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
    if depth == active.len() {
        out.insert(cell.clone());
        return;
    }
    for &(s, _) in &active[depth] {
        cell[depth] = s;
        expand(active, depth + 1, cell, out);
    }
}

/// Generates the non-null rules of the grid spanned by `partitions`.
pub(crate) fn grid_rules(ds: &Dataset, partitions: &[FuzzyPartition], budget: usize) -> Vec<FuzzyRule> {
    // memberships[p][i][s]
    let memberships: Vec<Vec<Vec<f64>>> = ds
        .patterns()
        .iter()
        .map(|p| partitions.iter().zip(&p.x).map(|(part, &x)| part.memberships(x)).collect())
        .collect();
    let c = ds.n_classes();

    candidate_cells(ds, partitions, budget)
        .into_iter()
        .filter_map(|cell| {
            let mut sums = vec![0.0; c];
            for (p, m) in ds.patterns().iter().zip(&memberships) {
                let mut grade = 1.0;
                for (&s, mi) in cell.iter().zip(m) {
                    grade *= mi[s];
                    if grade == 0.0 {
                        break;
                    }
                }
                sums[p.class] += grade;
            }
            let (consequent, cf) = ClassCompatibility { sums }.certainty();
            consequent.map(|k| FuzzyRule {
                antecedents: cell,
                consequent: Some(k),
                cf,
            })
        })
        .collect()
}
