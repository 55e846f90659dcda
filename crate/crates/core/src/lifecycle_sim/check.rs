use std::collections::BTreeSet;

use thiserror::Error;

use super::{EventPayload, SimTrace};
use crate::finding::{rules, Finding};
use crate::knowledge_base::{KnowledgeBase, NfrKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("event {index} has seq {seq}, not greater than the preceding {previous}")]
    SeqOrder { index: usize, previous: u64, seq: u64 },
}

fn label(kb: &KnowledgeBase, n: u8) -> String {
    let key = NfrKey::of(n);
    format!("{key} {}", kb.entry(key).name)
}

fn list(names: &BTreeSet<String>) -> String {
    names.iter().cloned().collect::<Vec<_>>().join(", ")
}

/// Checks a trace against consent (NFR6), minimal disclosure (NFR14),
/// verifiability (NFR2/NFR24) and single-source (NFR19) semantics.
pub fn check_trace(trace: &SimTrace, kb: &KnowledgeBase) -> Result<Vec<Finding>, TraceError> {
    for (index, pair) in trace.events.windows(2).enumerate() {
        if pair[1].seq <= pair[0].seq {
            return Err(TraceError::SeqOrder {
                index: index + 1,
                previous: pair[0].seq,
                seq: pair[1].seq,
            });
        }
    }

    let mut findings = Vec::new();
    let mut issuance_consent = false;
    let mut presentation_consent = false;
    let mut credential_keys: Option<BTreeSet<String>> = None;
    let mut requested = BTreeSet::new();
    let mut disclosed: BTreeSet<String> = BTreeSet::new();
    let mut signature_ok = false;
    let mut revocation_clear = false;

    for e in &trace.events {
        match &e.payload {
            EventPayload::ConsentGranted { .. } => issuance_consent = true,
            EventPayload::PresentationConsentGranted { .. } => presentation_consent = true,
            EventPayload::CredentialIssued { credential_id, attributes, .. } => {
                if !issuance_consent {
                    findings.push(Finding::error(
                        rules::SIM_NFR6_ISSUANCE,
                        &e.actor,
                        format!(
                            "credential {credential_id} issued without prior data-owner consent ({})",
                            label(kb, 6)
                        ),
                    ));
                }
                credential_keys = Some(attributes.clone());
            }
            EventPayload::PresentationRequested { requested: r, .. } => requested = r.clone(),
            EventPayload::Presented { credential_id, disclosed: d, .. } => {
                if !presentation_consent {
                    findings.push(Finding::error(
                        rules::SIM_NFR6_PRESENTATION,
                        &e.actor,
                        format!(
                            "credential {credential_id} presented without prior data-owner consent ({})",
                            label(kb, 6)
                        ),
                    ));
                }
                let allowed: BTreeSet<String> = match &credential_keys {
                    Some(keys) => requested.intersection(keys).cloned().collect(),
                    None => requested.clone(),
                };
                let excess: BTreeSet<String> = d.difference(&allowed).cloned().collect();
                if !excess.is_empty() {
                    findings.push(Finding::error(
                        rules::SIM_NFR14_OVERDISCLOSURE,
                        &e.actor,
                        format!("disclosed attributes beyond the request: {} ({})", list(&excess), label(kb, 14)),
                    ));
                }
                disclosed = d.clone();
            }
            EventPayload::SignatureVerified { success } => signature_ok = *success,
            EventPayload::RevocationChecked { revoked } => revocation_clear = !*revoked,
            EventPayload::AccessGranted { attributes_used } | EventPayload::AccessDenied { attributes_used, .. } => {
                if matches!(e.payload, EventPayload::AccessGranted { .. }) && !(signature_ok && revocation_clear) {
                    let missing = match (signature_ok, revocation_clear) {
                        (false, false) => "successful signature verification and a clear revocation check",
                        (false, true) => "successful signature verification",
                        _ => "a clear revocation check",
                    };
                    findings.push(Finding::error(
                        rules::SIM_NFR24_BYPASS,
                        &e.actor,
                        format!(
                            "access granted without {missing} ({}; {})",
                            label(kb, 2),
                            label(kb, 24)
                        ),
                    ));
                }
                let outside: BTreeSet<String> = attributes_used.difference(&disclosed).cloned().collect();
                if !outside.is_empty() {
                    findings.push(Finding::error(
                        rules::SIM_NFR19_SIDECHANNEL,
                        &e.actor,
                        format!(
                            "decision uses attributes not present in the presentation: {} ({})",
                            list(&outside),
                            label(kb, 19)
                        ),
                    ));
                }
            }
            EventPayload::CredentialRequested { .. }
            | EventPayload::SchemaSelected { .. }
            | EventPayload::Revoked { .. } => {}
        }
    }
    Ok(findings)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::knowledge_base::builtin_kb;

    fn basic() -> Scenario {
        Scenario::happy_path([("name", "Alice"), ("age", "30")], ["age"]).unwrap()
    }

    fn rules_for(t: Toggles) -> Vec<String> {
        let trace = run_scenario(&basic().with_toggles(t).unwrap());
        check_trace(&trace, &builtin_kb()).unwrap().into_iter().map(|f| f.rule).collect()
    }

    #[test]
    fn happy_path_is_clean() {
        assert!(rules_for(Toggles::default()).is_empty());
    }

    #[test]
    fn issuance_consent() {
        assert_eq!(
            rules_for(Toggles {
                skip_issuance_consent: true,
                ..Toggles::default()
            }),
            [rules::SIM_NFR6_ISSUANCE]
        );
    }

    #[test]
    fn presentation_consent() {
        assert_eq!(
            rules_for(Toggles {
                skip_presentation_consent: true,
                ..Toggles::default()
            }),
            [rules::SIM_NFR6_PRESENTATION]
        );
    }

    #[test]
    fn over_disclosure() {
        assert_eq!(
            rules_for(Toggles {
                over_disclose: true,
                ..Toggles::default()
            }),
            [rules::SIM_NFR14_OVERDISCLOSURE]
        );
    }

    #[test]
    fn denied_flows_raise_no_bypass() {
        assert!(rules_for(Toggles {
            revoke_before_presentation: true,
            ..Toggles::default()
        })
        .is_empty());
    }

    #[test]
    fn forced_grant_is_a_bypass() {
        let mut trace = run_scenario(&basic().with_toggles(Toggles {
            tamper_attribute: Some("name".into()),
            ..Toggles::default()
        }).unwrap());
        let last = trace.events.last_mut().unwrap();
        last.payload = EventPayload::AccessGranted {
            attributes_used: BTreeSet::from(["age".to_string()]),
        };
        let f = check_trace(&trace, &builtin_kb()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].rule, rules::SIM_NFR24_BYPASS);
        assert!(f[0].message.contains("signature"));
    }

    #[test]
    fn side_channel_attribute() {
        let mut trace = run_scenario(&basic());
        trace.events.last_mut().unwrap().payload = EventPayload::AccessGranted {
            attributes_used: BTreeSet::from(["age".to_string(), "name".to_string()]),
        };
        let f = check_trace(&trace, &builtin_kb()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].rule, rules::SIM_NFR19_SIDECHANNEL);
        assert!(f[0].message.contains("name"));
    }

    #[test]
    fn seq_must_increase() {
        let mut trace = run_scenario(&basic());
        trace.events[3].seq = 2;
        assert_eq!(
            check_trace(&trace, &builtin_kb()),
            Err(TraceError::SeqOrder { index: 3, previous: 3, seq: 2 })
        );
    }
}
