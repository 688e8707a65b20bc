//! WDBC ingestion, min-max normalization and train/test splitting.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::DatasetError;

/// Number of real-valued features per WDBC record.
pub const WDBC_FEATURES: usize = 30;

/// WDBC column names in file order: ten nucleus measurements as mean,
/// standard error and worst value.
pub const WDBC_FEATURE_NAMES: [&str; WDBC_FEATURES] = [
    "radius_mean",
    "texture_mean",
    "perimeter_mean",
    "area_mean",
    "smoothness_mean",
    "compactness_mean",
    "concavity_mean",
    "concave_points_mean",
    "symmetry_mean",
    "fractal_dimension_mean",
    "radius_se",
    "texture_se",
    "perimeter_se",
    "area_se",
    "smoothness_se",
    "compactness_se",
    "concavity_se",
    "concave_points_se",
    "symmetry_se",
    "fractal_dimension_se",
    "radius_worst",
    "texture_worst",
    "perimeter_worst",
    "area_worst",
    "smoothness_worst",
    "compactness_worst",
    "concavity_worst",
    "concave_points_worst",
    "symmetry_worst",
    "fractal_dimension_worst",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnosis {
    Benign,
    Malignant,
}

impl Diagnosis {
    /// Class index: benign is class 1 (index 0), malignant class 2 (index 1).
    pub fn class_index(self) -> usize {
        match self {
            Diagnosis::Benign => 0,
            Diagnosis::Malignant => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub id: String,
    pub diagnosis: Diagnosis,
    pub features: Vec<f64>,
}

/// Parses the WDBC text format: `id,diagnosis,f1,...,f30` per line, no header.
/// Blank lines are skipped; line numbers in errors are 1-based.
pub fn parse_wdbc<R: BufRead>(source: R) -> Result<Vec<RawRecord>, DatasetError> {
    let mut records = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != WDBC_FEATURES + 2 {
            return Err(DatasetError::Parse {
                line: lineno,
                reason: format!(
                    "expected {} fields, found {}",
                    WDBC_FEATURES + 2,
                    fields.len()
                ),
            });
        }
        let diagnosis = match fields[1] {
            "B" => Diagnosis::Benign,
            "M" => Diagnosis::Malignant,
            other => {
                return Err(DatasetError::Parse {
                    line: lineno,
                    reason: format!("unknown diagnosis {other:?}"),
                })
            }
        };
        let features = fields[2..]
            .iter()
            .enumerate()
            .map(|(j, f)| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(DatasetError::Parse {
                    line: lineno,
                    reason: format!("feature {} is not a finite number: {f:?}", j + 1),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        records.push(RawRecord {
            id: fields[0].to_string(),
            diagnosis,
            features,
        });
    }
    Ok(records)
}

/// Raw-unit range of one attribute. `min == max` marks a constant attribute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormParam {
    pub min: f64,
    pub max: f64,
}

impl NormParam {
    pub const IDENTITY: NormParam = NormParam { min: 0.0, max: 1.0 };

    pub fn is_constant(&self) -> bool {
        self.max <= self.min
    }

    /// Maps a raw value into `[0, 1]`; constant attributes go to 0.5 and values
    /// outside the stored range are clamped.
    pub fn normalize(&self, raw: f64) -> f64 {
        if self.is_constant() {
            0.5
        } else {
            ((raw - self.min) / (self.max - self.min)).clamp(0.0, 1.0)
        }
    }

    pub fn denormalize(&self, x: f64) -> f64 {
        if self.is_constant() {
            self.min
        } else {
            self.min + x * (self.max - self.min)
        }
    }

    fn fit(column: impl Iterator<Item = f64>) -> NormParam {
        let (min, max) = column.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        NormParam { min, max }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub x: Vec<f64>,
    /// 0-based class index.
    pub class: usize,
}

/// Normalized patterns plus the metadata needed to interpret them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    patterns: Vec<Pattern>,
    n: usize,
    class_names: Vec<String>,
    attribute_names: Vec<String>,
    norm_params: Vec<NormParam>,
}

impl Dataset {
    /// Builds a dataset from already-normalized patterns. Normalization
    /// parameters default to the identity map.
    pub fn from_normalized(patterns: Vec<Pattern>, class_names: Vec<String>) -> Result<Self, DatasetError> {
        let n = patterns.first().ok_or(DatasetError::Empty)?.x.len();
        let attribute_names = default_attribute_names(n);
        Self::assemble(patterns, class_names, attribute_names, vec![NormParam::IDENTITY; n])
    }

    /// Min-max normalizes raw rows using ranges computed over all rows.
    pub fn from_raw(
        rows: &[Vec<f64>],
        classes: &[usize],
        class_names: Vec<String>,
        attribute_names: Vec<String>,
    ) -> Result<Self, DatasetError> {
        let n = rows.first().ok_or(DatasetError::Empty)?.len();
        check_rows(rows, n)?;
        let params = (0..n).map(|i| NormParam::fit(rows.iter().map(|r| r[i]))).collect();
        Self::with_params(rows, classes, params, class_names, attribute_names)
    }

    /// Normalizes raw rows with externally supplied ranges (for instance the
    /// ones stored in a fitted rule base). Out-of-range values are clamped.
    pub fn with_params(
        rows: &[Vec<f64>],
        classes: &[usize],
        params: Vec<NormParam>,
        class_names: Vec<String>,
        attribute_names: Vec<String>,
    ) -> Result<Self, DatasetError> {
        let n = params.len();
        check_rows(rows, n)?;
        let patterns = rows
            .iter()
            .zip(classes)
            .map(|(row, &class)| Pattern {
                x: row.iter().zip(&params).map(|(v, p)| p.normalize(*v)).collect(),
                class,
            })
            .collect();
        Self::assemble(patterns, class_names, attribute_names, params)
    }

    fn assemble(
        patterns: Vec<Pattern>,
        class_names: Vec<String>,
        attribute_names: Vec<String>,
        norm_params: Vec<NormParam>,
    ) -> Result<Self, DatasetError> {
        if patterns.is_empty() {
            return Err(DatasetError::Empty);
        }
        let n = norm_params.len();
        let c = class_names.len();
        for (index, p) in patterns.iter().enumerate() {
            if p.x.len() != n {
                return Err(DatasetError::Dimension {
                    index,
                    expected: n,
                    found: p.x.len(),
                });
            }
            if let Some((attribute, &value)) = p.x.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                return Err(DatasetError::OutOfRange {
                    index,
                    attribute,
                    value,
                });
            }
            if p.class >= c {
                return Err(DatasetError::UnknownClass {
                    index,
                    class: p.class,
                    classes: c,
                });
            }
        }
        debug_assert_eq!(attribute_names.len(), n);
        Ok(Dataset {
            patterns,
            n,
            class_names,
            attribute_names,
            norm_params,
        })
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Attribute count `n`.
    pub fn n_attributes(&self) -> usize {
        self.n
    }

    /// Class count `c`.
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
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

    /// Indices of attributes whose raw range was degenerate.
    pub fn constant_attributes(&self) -> Vec<usize> {
        self.norm_params
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_constant())
            .map(|(i, _)| i)
            .collect()
    }

    /// Per-class pattern counts `m_k`.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for p in &self.patterns {
            counts[p.class] += 1;
        }
        counts
    }

    /// Raw-unit rows recovered through the stored normalization parameters.
    pub fn denormalized_rows(&self) -> Vec<Vec<f64>> {
        self.patterns
            .iter()
            .map(|p| p.x.iter().zip(&self.norm_params).map(|(v, np)| np.denormalize(*v)).collect())
            .collect()
    }

    /// The patterns at `indices`, in the given order, sharing this dataset's metadata.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            patterns: indices.iter().map(|&i| self.patterns[i].clone()).collect(),
            n: self.n,
            class_names: self.class_names.clone(),
            attribute_names: self.attribute_names.clone(),
            norm_params: self.norm_params.clone(),
        }
    }

    fn renormalized(&self, rows: &[Vec<f64>], indices: &[usize], params: &[NormParam]) -> Result<Dataset, DatasetError> {
        let picked: Vec<Vec<f64>> = indices.iter().map(|&i| rows[i].clone()).collect();
        let classes: Vec<usize> = indices.iter().map(|&i| self.patterns[i].class).collect();
        Dataset::with_params(
            &picked,
            &classes,
            params.to_vec(),
            self.class_names.clone(),
            self.attribute_names.clone(),
        )
    }
}

fn check_rows(rows: &[Vec<f64>], n: usize) -> Result<(), DatasetError> {
    if rows.is_empty() {
        return Err(DatasetError::Empty);
    }
    match rows.iter().position(|r| r.len() != n) {
        Some(index) => Err(DatasetError::Dimension {
            index,
            expected: n,
            found: rows[index].len(),
        }),
        None => Ok(()),
    }
}

fn default_attribute_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Normalizes WDBC records into a two-class dataset (B = class 1, M = class 2)
/// with ranges taken over all records.
pub fn normalize(records: &[RawRecord]) -> Result<Dataset, DatasetError> {
    let (rows, classes) = unzip_records(records)?;
    Dataset::from_raw(&rows, &classes, wdbc_class_names(), wdbc_attribute_names(rows[0].len()))
}

/// Normalizes WDBC records with previously fitted ranges.
pub fn normalize_with(records: &[RawRecord], params: Vec<NormParam>) -> Result<Dataset, DatasetError> {
    let (rows, classes) = unzip_records(records)?;
    let names = wdbc_attribute_names(params.len());
    Dataset::with_params(&rows, &classes, params, wdbc_class_names(), names)
}

fn unzip_records(records: &[RawRecord]) -> Result<(Vec<Vec<f64>>, Vec<usize>), DatasetError> {
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(records
        .iter()
        .map(|r| (r.features.clone(), r.diagnosis.class_index()))
        .unzip())
}

pub fn wdbc_class_names() -> Vec<String> {
    vec!["B".to_string(), "M".to_string()]
}

fn wdbc_attribute_names(n: usize) -> Vec<String> {
    if n == WDBC_FEATURES {
        WDBC_FEATURE_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        default_attribute_names(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitScheme {
    /// Train and test on the full dataset.
    Resubstitution,
    /// Stratified k-fold cross-validation with a seeded shuffle.
    KFold { k: usize, seed: u64 },
}

impl fmt::Display for SplitScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitScheme::Resubstitution => write!(f, "resubstitution"),
            SplitScheme::KFold { k, seed } => write!(f, "kfold:{k} (seed {seed})"),
        }
    }
}

impl FromStr for SplitScheme {
    type Err = String;

    /// Accepts `resubstitution` or `kfold:K`; the seed defaults to 1 and is
    /// usually overridden by the caller.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "resubstitution" {
            return Ok(SplitScheme::Resubstitution);
        }
        if let Some(k) = s.strip_prefix("kfold:") {
            let k = k.parse::<usize>().map_err(|_| format!("invalid fold count in {s:?}"))?;
            return Ok(SplitScheme::KFold { k, seed: 1 });
        }
        Err(format!("unknown scheme {s:?} (expected resubstitution or kfold:K)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fold {
    pub train: Dataset,
    pub test: Dataset,
}

/// Splits `ds` into train/test pairs.
///
/// K-fold splitting is stratified: each class is shuffled with a ChaCha8 stream
/// seeded by `seed`, then the classes are dealt round-robin into folds as one
/// continuous sequence, which keeps fold sizes within one of each other and
/// per-fold class counts within one of their expectation. Test patterns keep
/// their original order.
///
/// With `per_fold_normalization`, each training side is re-normalized with its
/// own ranges and the test side reuses them (clamped to `[0, 1]`).
pub fn split(ds: &Dataset, scheme: SplitScheme, per_fold_normalization: bool) -> Result<Vec<Fold>, DatasetError> {
    let m = ds.len();
    let assignments: Vec<(Vec<usize>, Vec<usize>)> = match scheme {
        SplitScheme::Resubstitution => vec![((0..m).collect(), (0..m).collect())],
        SplitScheme::KFold { k, seed } => {
            if k < 2 || k > m {
                return Err(DatasetError::InvalidFolds { k, m });
            }
            let fold_of = stratified_fold_assignment(ds, k, seed);
            (0..k)
                .map(|f| {
                    let (test, train): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| fold_of[i] == f);
                    (train, test)
                })
                .collect()
        }
    };

    if !per_fold_normalization {
        return Ok(assignments
            .into_iter()
            .map(|(train, test)| Fold {
                train: ds.subset(&train),
                test: ds.subset(&test),
            })
            .collect());
    }

    let rows = ds.denormalized_rows();
    assignments
        .into_iter()
        .map(|(train, test)| {
            let params: Vec<NormParam> = (0..ds.n_attributes())
                .map(|a| NormParam::fit(train.iter().map(|&i| rows[i][a])))
                .collect();
            Ok(Fold {
                train: ds.renormalized(&rows, &train, &params)?,
                test: ds.renormalized(&rows, &test, &params)?,
            })
        })
        .collect()
}

fn stratified_fold_assignment(ds: &Dataset, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(ds.len());
    for class in 0..ds.n_classes() {
        let mut members: Vec<usize> = (0..ds.len()).filter(|&i| ds.patterns[i].class == class).collect();
        members.shuffle(&mut rng);
        order.extend(members);
    }
    let mut fold_of = vec![0; ds.len()];
    for (pos, idx) in order.into_iter().enumerate() {
        fold_of[idx] = pos % k;
    }
    fold_of
}
