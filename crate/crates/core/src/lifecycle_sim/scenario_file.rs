//! `[scenario]` records in the shared record syntax:
//!
//! ```text
//! [scenario]
//! issuer = gov
//! owner = alice
//! verifier = shop
//! attributes = name=Alice, age=30
//! request = age
//! toggles = over_disclose, tamper_attribute=age
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{PresentationRequest, Scenario, Toggles};
use crate::records::{parse_records, split_list, Entry, Record, RecordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ScenarioFileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<RecordError> for ScenarioFileError {
    fn from(e: RecordError) -> Self {
        Self {
            line: e.line,
            column: e.column,
            message: e.message,
        }
    }
}

impl ScenarioFileError {
    fn at(entry: &Entry, message: impl Into<String>) -> Self {
        Self {
            line: entry.line,
            column: entry.value_column,
            message: message.into(),
        }
    }
}

const KEYS: &[&str] = &["issuer", "owner", "verifier", "attributes", "request", "purpose", "toggles"];

pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>, ScenarioFileError> {
    let records = parse_records(text)?;
    if records.is_empty() {
        return Err(ScenarioFileError {
            line: 1,
            column: 1,
            message: "no [scenario] record found".into(),
        });
    }
    records.iter().map(scenario).collect()
}

fn scenario(record: &Record) -> Result<Scenario, ScenarioFileError> {
    if record.kind != "scenario" {
        return Err(ScenarioFileError {
            line: record.line,
            column: 2,
            message: format!("unknown record type [{}]", record.kind),
        });
    }
    record.check_keys(KEYS)?;
    let issuer = record.require("issuer")?;
    let owner = record.require("owner")?;
    let verifier = record.require("verifier")?;

    let attr_entry = record.require("attributes")?;
    let mut attributes = BTreeMap::new();
    for item in split_list(&attr_entry.value) {
        let Some((name, value)) = item.split_once('=') else {
            return Err(ScenarioFileError::at(attr_entry, format!("expected `name=value`, found `{item}`")));
        };
        let name = name.trim();
        if name.is_empty() {
            return Err(ScenarioFileError::at(attr_entry, "attribute name must not be empty"));
        }
        if attributes.insert(name.to_string(), value.trim().to_string()).is_some() {
            return Err(ScenarioFileError::at(attr_entry, format!("duplicate attribute `{name}`")));
        }
    }

    let request_entry = record.require("request")?;
    let requested: BTreeSet<String> = split_list(&request_entry.value).into_iter().map(str::to_string).collect();

    let mut toggles = Toggles::default();
    if let Some(entry) = record.get("toggles") {
        for flag in split_list(&entry.value) {
            match flag.split_once('=') {
                Some(("tamper_attribute", name)) => toggles.tamper_attribute = Some(name.trim().to_string()),
                None if flag == "skip_issuance_consent" => toggles.skip_issuance_consent = true,
                None if flag == "skip_presentation_consent" => toggles.skip_presentation_consent = true,
                None if flag == "revoke_before_presentation" => toggles.revoke_before_presentation = true,
                None if flag == "over_disclose" => toggles.over_disclose = true,
                _ => return Err(ScenarioFileError::at(entry, format!("unknown toggle `{flag}`"))),
            }
        }
    }

    let request = PresentationRequest {
        verifier_id: verifier.value.clone(),
        requested_attributes: requested,
        purpose: record.get("purpose").map_or_else(|| "access".to_string(), |e| e.value.clone()),
    };
    Scenario::new(&issuer.value, &owner.value, &verifier.value, attributes, request, toggles).map_err(|e| {
        ScenarioFileError {
            line: record.line,
            column: 1,
            message: e.to_string(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_record() {
        let text = "# demo\n[scenario]\nissuer = gov\nowner = alice\nverifier = shop\nattributes = name=Alice, age=30\nrequest = age\ntoggles = over_disclose, tamper_attribute=age\n";
        let s = &parse_scenarios(text).unwrap()[0];
        assert_eq!(s.issuer_id(), "gov");
        assert_eq!(s.attributes().len(), 2);
        assert_eq!(s.attributes()["age"], "30");
        assert!(s.toggles().over_disclose);
        assert_eq!(s.toggles().tamper_attribute.as_deref(), Some("age"));
        assert_eq!(s.request().purpose, "access");
    }

    #[test]
    fn several_records() {
        let one = "[scenario]\nissuer = i\nowner = o\nverifier = v\nattributes = a=1\nrequest = a\n";
        assert_eq!(parse_scenarios(&format!("{one}{one}")).unwrap().len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_scenarios("[scenario]\nissuer = i\nowner = o\nverifier = v\nattributes = a\nrequest = a\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 14));
        let e = parse_scenarios("[scenario]\nissuer = i\nowner = o\nverifier = v\nattributes = a=1\nrequest = a\ntoggles = fast\n")
            .unwrap_err();
        assert_eq!(e.line, 7);
        assert!(e.message.contains("fast"));
        let e = parse_scenarios("[scenario]\nissuer = i\nowner = o\nverifier = v\nattributes = a=1\nrequest = a\ntoggles = tamper_attribute=b\n")
            .unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_scenarios("").is_err());
        assert!(parse_scenarios("[other]\n").is_err());
        assert!(parse_scenarios("[scenario]\nissuer = i\n").unwrap_err().message.contains("owner"));
    }
}
