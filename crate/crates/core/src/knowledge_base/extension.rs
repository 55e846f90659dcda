//! Loader for knowledge-base extension files carrying additional dependency
//! rows and pattern mappings.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{
    ActorKind, DependencyRelation, KbError, NfrKey, PatternEntry, PatternSource, Provenance,
};
use crate::records::{parse_records, split_list, Entry, Record, RecordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ExtensionError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<RecordError> for ExtensionError {
    fn from(e: RecordError) -> Self {
        Self {
            line: e.line,
            column: e.column,
            message: e.message,
        }
    }
}

impl ExtensionError {
    fn at(entry: &Entry, message: impl Into<String>) -> Self {
        Self {
            line: entry.line,
            column: entry.value_column,
            message: message.into(),
        }
    }
}

/// Dependency relations and pattern entries parsed from one extension file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbDelta {
    pub dependencies: Vec<DependencyRelation>,
    pub patterns: Vec<PatternEntry>,
}

impl KbDelta {
    pub fn is_empty(&self) -> bool {
        self.dependencies.is_empty() && self.patterns.is_empty()
    }
}

const DEPENDENCY_KEYS: &[&str] = &["nfr", "depender", "dependee", "rationale"];
const PATTERN_KEYS: &[&str] = &["name", "source", "nfrs"];

pub fn load_extension(text: &str) -> Result<KbDelta, ExtensionError> {
    let mut delta = KbDelta::default();
    let mut triples = BTreeSet::new();
    let mut pattern_ids = BTreeSet::new();

    for record in parse_records(text)? {
        match record.kind.as_str() {
            "dependency" => {
                let relation = dependency(&record)?;
                if !triples.insert(relation.triple()) {
                    return Err(ExtensionError {
                        line: record.line,
                        column: 1,
                        message: format!("duplicate dependency {} in file", relation.triple()),
                    });
                }
                delta.dependencies.push(relation);
            }
            "pattern" => {
                let pattern = pattern(&record)?;
                if !pattern_ids.insert((pattern.source, pattern.name.to_ascii_lowercase())) {
                    return Err(ExtensionError {
                        line: record.line,
                        column: 1,
                        message: format!("duplicate pattern {} in file", pattern.label()),
                    });
                }
                delta.patterns.push(pattern);
            }
            other => {
                return Err(ExtensionError {
                    line: record.line,
                    column: 2,
                    message: format!("unknown record type [{other}] (expected [dependency] or [pattern])"),
                })
            }
        }
    }
    Ok(delta)
}

pub(crate) fn parse_nfr(entry: &Entry, raw: &str) -> Result<NfrKey, ExtensionError> {
    raw.parse::<NfrKey>()
        .map_err(|e| ExtensionError::at(entry, e.to_string()))
}

fn parse_actor(entry: &Entry) -> Result<ActorKind, ExtensionError> {
    entry
        .value
        .parse::<ActorKind>()
        .map_err(|e| ExtensionError::at(entry, e.to_string()))
}

fn dependency(record: &Record) -> Result<DependencyRelation, ExtensionError> {
    record.check_keys(DEPENDENCY_KEYS)?;
    let nfr_entry = record.require("nfr")?;
    let nfr = parse_nfr(nfr_entry, &nfr_entry.value)?;
    let depender = parse_actor(record.require("depender")?)?;
    let dependee_entry = record.require("dependee")?;
    let dependee = parse_actor(dependee_entry)?;
    let rationale = record.get("rationale").map(|e| e.value.clone()).unwrap_or_default();
    DependencyRelation::new(depender, dependee, nfr, rationale, Provenance::Extension).map_err(
        |e: KbError| ExtensionError::at(dependee_entry, e.to_string()),
    )
}

fn pattern(record: &Record) -> Result<PatternEntry, ExtensionError> {
    record.check_keys(PATTERN_KEYS)?;
    let name_entry = record.require("name")?;
    if name_entry.value.trim().is_empty() {
        return Err(ExtensionError::at(name_entry, "pattern name must not be empty"));
    }
    let source_entry = record.require("source")?;
    let source = source_entry
        .value
        .parse::<PatternSource>()
        .map_err(|e| ExtensionError::at(source_entry, e))?;
    let nfrs_entry = record.require("nfrs")?;
    let supported_nfrs = split_list(&nfrs_entry.value)
        .into_iter()
        .map(|raw| parse_nfr(nfrs_entry, raw))
        .collect::<Result<BTreeSet<_>, _>>()?;
    if supported_nfrs.is_empty() {
        return Err(ExtensionError::at(nfrs_entry, "pattern must support at least one NFR"));
    }
    Ok(PatternEntry {
        name: name_entry.value.trim().to_string(),
        source,
        supported_nfrs,
    })
}
