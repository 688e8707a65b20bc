//! JSON rule-base files.
//!
//! A rule file is a pretty-printed JSON document:
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "kind": "rule-base",
//!   "method": "simple-grid",
//!   "config": { "grid_k": 5, ... },
//!   "class_names": ["B", "M"],
//!   "attributes": [
//!     { "name": "radius_mean",
//!       "normalization": { "min": 6.981, "max": 28.11 },
//!       "sets": [ { "label": "S", "type": "triangular", "left": 0.0, "center": 0.0, "right": 0.25 }, ... ] },
//!     ...
//!   ],
//!   "rules": [ { "antecedents": [1, 0, ...], "consequent": 0, "cf": 0.93 }, ... ]
//! }
//! ```
//!
//! Numbers use the shortest decimal that round-trips to the same `f64`, so a
//! loaded rule base classifies bit-for-bit like the saved one.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classifiers::{FitConfig, FuzzyRule, Method, RuleBase, RuleBaseParts};
use crate::dataset::NormParam;
use crate::error::RuleFileError;
use crate::membership::{FuzzyPartition, MembershipFunction};

pub const FORMAT_VERSION: u32 = 1;
const RULE_BASE_KIND: &str = "rule-base";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format_version: u32,
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty-printed `{format_version, kind, ...body}` document.
pub fn envelope_json<T: Serialize>(kind: &str, body: &T) -> String {
    let envelope = Envelope {
        format_version: FORMAT_VERSION,
        kind,
        body,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("report types serialize");
    text.push('\n');
    text
}

#[derive(Debug, Serialize, Deserialize)]
struct RuleBaseFile {
    format_version: u32,
    kind: String,
    method: Method,
    config: FitConfig,
    class_names: Vec<String>,
    attributes: Vec<AttributeEntry>,
    rules: Vec<FuzzyRule>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AttributeEntry {
    name: String,
    normalization: NormParam,
    sets: Vec<LabeledSet>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LabeledSet {
    label: String,
    #[serde(flatten)]
    function: MembershipFunction,
}

/// Renders `rb` as a rule file. Identical rule bases give identical text.
pub fn rulebase_to_string(rb: &RuleBase) -> String {
    let parts = rb.clone().into_parts();
    let attributes = parts
        .partitions
        .into_iter()
        .zip(parts.attribute_names)
        .zip(parts.norm_params)
        .map(|((p, name), normalization)| AttributeEntry {
            name,
            normalization,
            sets: p
                .labels
                .into_iter()
                .zip(p.sets)
                .map(|(label, function)| LabeledSet { label, function })
                .collect(),
        })
        .collect();
    let file = RuleBaseFile {
        format_version: FORMAT_VERSION,
        kind: RULE_BASE_KIND.to_string(),
        method: parts.method,
        config: parts.config,
        class_names: parts.class_names,
        attributes,
        rules: parts.rules,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("rule base serializes");
    text.push('\n');
    text
}

pub fn save_rulebase<W: Write>(rb: &RuleBase, mut sink: W) -> Result<(), RuleFileError> {
    sink.write_all(rulebase_to_string(rb).as_bytes())?;
    sink.flush()?;
    Ok(())
}

pub fn load_rulebase<R: Read>(mut source: R) -> Result<RuleBase, RuleFileError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    rulebase_from_str(&text)
}

pub fn rulebase_from_str(text: &str) -> Result<RuleBase, RuleFileError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        if e.to_string().contains("number out of range") {
            RuleFileError::NonFinite(e.to_string())
        } else {
            RuleFileError::Syntax(e.to_string())
        }
    })?;

    match value.get("format_version") {
        None => {
            return Err(RuleFileError::Schema {
                path: "format_version".into(),
                message: "missing field".into(),
            })
        }
        Some(v) => match v.as_i64() {
            Some(found) if found == i64::from(FORMAT_VERSION) => {}
            Some(found) => {
                return Err(RuleFileError::Version {
                    found,
                    supported: FORMAT_VERSION,
                })
            }
            None => {
                return Err(RuleFileError::Schema {
                    path: "format_version".into(),
                    message: format!("expected an integer, found {v}"),
                })
            }
        },
    }

    let file: RuleBaseFile = serde_path_to_error::deserialize(value).map_err(|e| RuleFileError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if file.kind != RULE_BASE_KIND {
        return Err(RuleFileError::Schema {
            path: "kind".into(),
            message: format!("expected {RULE_BASE_KIND:?}, found {:?}", file.kind),
        });
    }

    let mut attribute_names = Vec::with_capacity(file.attributes.len());
    let mut norm_params = Vec::with_capacity(file.attributes.len());
    let mut partitions = Vec::with_capacity(file.attributes.len());
    for entry in file.attributes {
        attribute_names.push(entry.name);
        norm_params.push(entry.normalization);
        let (labels, sets) = entry.sets.into_iter().map(|s| (s.label, s.function)).unzip();
        partitions.push(FuzzyPartition { labels, sets });
    }
    if norm_params.iter().any(|p| !(p.min.is_finite() && p.max.is_finite())) {
        return Err(RuleFileError::NonFinite("normalization range".into()));
    }

    Ok(RuleBase::new(RuleBaseParts {
        method: file.method,
        config: file.config,
        class_names: file.class_names,
        attribute_names,
        norm_params,
        partitions,
        rules: file.rules,
    })?)
}
