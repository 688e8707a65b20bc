use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("a fuzzy partition needs at least 2 sets, got {0}")]
    TooFewSets(usize),
    #[error("a fuzzy partition needs at least one set")]
    Empty,
    #[error("partition has {sets} sets but {labels} labels")]
    LabelCount { sets: usize, labels: usize },
    #[error("invalid membership function: {0}")]
    InvalidShape(&'static str),
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("failed to read data: {0}")]
    Read(#[from] std::io::Error),
    #[error("dataset is empty")]
    Empty,
    #[error("pattern {index} has {found} attributes, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("pattern {index}: attribute {attribute} = {value} is outside [0, 1]")]
    OutOfRange {
        index: usize,
        attribute: usize,
        value: f64,
    },
    #[error("pattern {index}: class {class} is not below the class count {classes}")]
    UnknownClass {
        index: usize,
        class: usize,
        classes: usize,
    },
    #[error("invalid fold count {k} for {m} patterns (need 2 <= k <= m)")]
    InvalidFolds { k: usize, m: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("class {0} has no training patterns")]
    EmptyClass(String),
    #[error("modified grid supports exactly 2 classes, dataset has {0}")]
    UnsupportedClassCount(usize),
    #[error("invalid fit configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("input has {found} attributes, rule base expects {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("attribute {0} is not a finite number")]
    NonFinite(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum RuleBaseError {
    #[error("rule base has no attributes")]
    NoAttributes,
    #[error("expected {expected} partitions, found {found}")]
    PartitionCount { expected: usize, found: usize },
    #[error("rule {rule} has {found} antecedents, expected {expected}")]
    Antecedents {
        rule: usize,
        expected: usize,
        found: usize,
    },
    #[error("rule {rule} references set {set} of attribute {attribute}, which has {available} sets")]
    SetIndex {
        rule: usize,
        attribute: usize,
        set: usize,
        available: usize,
    },
    #[error("rule {rule} has consequent {class} but there are {classes} classes")]
    Consequent {
        rule: usize,
        class: usize,
        classes: usize,
    },
    #[error("rule {rule} has certainty grade {cf} outside [0, 1]")]
    Certainty { rule: usize, cf: f64 },
    #[error("rule {rule}: a null consequent requires cf = 0 and a class requires cf > 0")]
    NullConsequent { rule: usize },
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Error)]
pub enum RuleFileError {
    #[error("unsupported format_version {found} (this build reads version {supported})")]
    Version { found: i64, supported: u32 },
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("non-finite number in rule file: {0}")]
    NonFinite(String),
    #[error("malformed rule file: {0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] RuleBaseError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("test data has {found} classes, rule base knows {expected}")]
    ClassCount { expected: usize, found: usize },
    #[error("no methods requested")]
    NoMethods,
}
