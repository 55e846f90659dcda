//! Deterministic simulation of the credential lifecycle (issuance,
//! presentation, verification, revocation) with fault injection, plus
//! NFR checks over the resulting event traces.

mod check;
mod scenario_file;
mod tag;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use check::{check_trace, TraceError};
pub use scenario_file::{parse_scenarios, ScenarioFileError};
pub use tag::{digest, tag_of, verify_tag, Tag};

/// Schema recorded on every issuance; schema creation is not modeled.
pub const SCHEMA_NAME: &str = "generic-identity-credential";
const CREDENTIAL_ID: &str = "cred-1";

/// Canonical byte form of a credential's signed content.
pub fn canonical_payload(id: &str, subject_id: &str, attributes: &BTreeMap<String, String>) -> Vec<u8> {
    serde_json::to_vec(&(id, subject_id, attributes)).expect("string maps always serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Credential {
    pub id: String,
    pub issuer_id: String,
    pub subject_id: String,
    pub attributes: BTreeMap<String, String>,
    pub tag: Tag,
}

impl Credential {
    pub fn payload(&self) -> Vec<u8> {
        canonical_payload(&self.id, &self.subject_id, &self.attributes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationRequest {
    pub verifier_id: String,
    pub requested_attributes: BTreeSet<String>,
    pub purpose: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub credential_id: String,
    pub disclosed: BTreeMap<String, String>,
    pub issuer_id: String,
    pub tag: Tag,
    pub full_payload_commitment: Tag,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Toggles {
    pub skip_issuance_consent: bool,
    pub skip_presentation_consent: bool,
    pub tamper_attribute: Option<String>,
    pub revoke_before_presentation: bool,
    pub over_disclose: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("{0} id must not be empty")]
    EmptyId(&'static str),
    #[error("a credential needs at least one attribute")]
    NoAttributes,
    #[error("a presentation request needs at least one attribute")]
    EmptyRequest,
    #[error("request is addressed from `{request}` but the scenario verifier is `{scenario}`")]
    VerifierMismatch { request: String, scenario: String },
    #[error("tamper_attribute names unknown attribute `{0}`")]
    UnknownTamperAttribute(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scenario {
    issuer_id: String,
    owner_id: String,
    verifier_id: String,
    attributes: BTreeMap<String, String>,
    request: PresentationRequest,
    toggles: Toggles,
}

impl Scenario {
    pub fn new(
        issuer_id: impl Into<String>,
        owner_id: impl Into<String>,
        verifier_id: impl Into<String>,
        attributes: BTreeMap<String, String>,
        request: PresentationRequest,
        toggles: Toggles,
    ) -> Result<Self, ScenarioError> {
        let s = Self {
            issuer_id: issuer_id.into(),
            owner_id: owner_id.into(),
            verifier_id: verifier_id.into(),
            attributes,
            request,
            toggles,
        };
        for (role, id) in [("issuer", &s.issuer_id), ("owner", &s.owner_id), ("verifier", &s.verifier_id)] {
            if id.is_empty() {
                return Err(ScenarioError::EmptyId(role));
            }
        }
        if s.attributes.is_empty() {
            return Err(ScenarioError::NoAttributes);
        }
        if s.request.requested_attributes.is_empty() {
            return Err(ScenarioError::EmptyRequest);
        }
        if s.request.verifier_id != s.verifier_id {
            return Err(ScenarioError::VerifierMismatch {
                request: s.request.verifier_id.clone(),
                scenario: s.verifier_id.clone(),
            });
        }
        if let Some(name) = &s.toggles.tamper_attribute {
            if !s.attributes.contains_key(name) {
                return Err(ScenarioError::UnknownTamperAttribute(name.clone()));
            }
        }
        Ok(s)
    }

    /// Fault-free scenario requesting `requested` from the given attributes.
    pub fn happy_path<'a>(
        attributes: impl IntoIterator<Item = (&'a str, &'a str)>,
        requested: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, ScenarioError> {
        Self::new(
            "issuer",
            "owner",
            "verifier",
            attributes.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            PresentationRequest {
                verifier_id: "verifier".into(),
                requested_attributes: requested.into_iter().map(str::to_string).collect(),
                purpose: "access".into(),
            },
            Toggles::default(),
        )
    }

    pub fn with_toggles(mut self, toggles: Toggles) -> Result<Self, ScenarioError> {
        if let Some(name) = &toggles.tamper_attribute {
            if !self.attributes.contains_key(name) {
                return Err(ScenarioError::UnknownTamperAttribute(name.clone()));
            }
        }
        self.toggles = toggles;
        Ok(self)
    }

    pub fn issuer_id(&self) -> &str {
        &self.issuer_id
    }

    pub fn owner_id(&self) -> &str {
        &self.owner_id
    }

    pub fn verifier_id(&self) -> &str {
        &self.verifier_id
    }

    pub fn attributes(&self) -> &BTreeMap<String, String> {
        &self.attributes
    }

    pub fn request(&self) -> &PresentationRequest {
        &self.request
    }

    pub fn toggles(&self) -> &Toggles {
        &self.toggles
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EventKind {
    ConsentGranted,
    CredentialRequested,
    SchemaSelected,
    CredentialIssued,
    Revoked,
    PresentationRequested,
    PresentationConsentGranted,
    Presented,
    SignatureVerified,
    RevocationChecked,
    AccessGranted,
    AccessDenied,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EventPayload {
    ConsentGranted { to: String, purpose: String },
    CredentialRequested { issuer: String, attributes: BTreeSet<String> },
    SchemaSelected { schema: String },
    CredentialIssued { credential_id: String, subject: String, attributes: BTreeSet<String>, tag: Tag },
    Revoked { credential_id: String },
    PresentationRequested { requested: BTreeSet<String>, purpose: String },
    PresentationConsentGranted { verifier: String, attributes: BTreeSet<String> },
    Presented { credential_id: String, disclosed: BTreeSet<String>, commitment: Tag },
    SignatureVerified { success: bool },
    RevocationChecked { revoked: bool },
    AccessGranted { attributes_used: BTreeSet<String> },
    AccessDenied { attributes_used: BTreeSet<String>, reason: String },
}

impl EventPayload {
    pub fn kind(&self) -> EventKind {
        match self {
            EventPayload::ConsentGranted { .. } => EventKind::ConsentGranted,
            EventPayload::CredentialRequested { .. } => EventKind::CredentialRequested,
            EventPayload::SchemaSelected { .. } => EventKind::SchemaSelected,
            EventPayload::CredentialIssued { .. } => EventKind::CredentialIssued,
            EventPayload::Revoked { .. } => EventKind::Revoked,
            EventPayload::PresentationRequested { .. } => EventKind::PresentationRequested,
            EventPayload::PresentationConsentGranted { .. } => EventKind::PresentationConsentGranted,
            EventPayload::Presented { .. } => EventKind::Presented,
            EventPayload::SignatureVerified { .. } => EventKind::SignatureVerified,
            EventPayload::RevocationChecked { .. } => EventKind::RevocationChecked,
            EventPayload::AccessGranted { .. } => EventKind::AccessGranted,
            EventPayload::AccessDenied { .. } => EventKind::AccessDenied,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimEvent {
    pub seq: u64,
    pub actor: String,
    pub payload: EventPayload,
}

impl SimEvent {
    pub fn kind(&self) -> EventKind {
        self.payload.kind()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Granted,
    Denied,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Granted => "granted",
            Outcome::Denied => "denied",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimTrace {
    pub scenario: Scenario,
    pub events: Vec<SimEvent>,
    pub outcome: Outcome,
}

impl SimTrace {
    pub fn kinds(&self) -> Vec<EventKind> {
        self.events.iter().map(SimEvent::kind).collect()
    }

    pub fn event(&self, kind: EventKind) -> Option<&SimEvent> {
        self.events.iter().find(|e| e.kind() == kind)
    }

    /// `seq<TAB>kind<TAB>actor<TAB>sha256(payload json)` per event.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let json = serde_json::to_vec(&e.payload).expect("payloads always serialize");
            let _ = writeln!(out, "{}\t{}\t{}\t{}", e.seq, e.kind(), e.actor, digest(&json));
        }
        out
    }
}

#[derive(Default)]
struct Recorder {
    events: Vec<SimEvent>,
}

impl Recorder {
    fn record(&mut self, actor: &str, payload: EventPayload) {
        let seq = self.events.len() as u64 + 1;
        self.events.push(SimEvent {
            seq,
            actor: actor.to_string(),
            payload,
        });
    }
}

#[derive(Debug, Default)]
pub struct RevocationRegistry {
    revoked: BTreeSet<String>,
}

impl RevocationRegistry {
    pub fn revoke(&mut self, credential_id: &str) {
        self.revoked.insert(credential_id.to_string());
    }

    pub fn is_revoked(&self, credential_id: &str) -> bool {
        self.revoked.contains(credential_id)
    }
}

#[derive(Debug)]
pub struct Issuer {
    pub id: String,
}

impl Issuer {
    pub fn issue(&self, credential_id: &str, subject_id: &str, attributes: BTreeMap<String, String>) -> Credential {
        let tag = tag_of(&self.id, &canonical_payload(credential_id, subject_id, &attributes));
        Credential {
            id: credential_id.to_string(),
            issuer_id: self.id.clone(),
            subject_id: subject_id.to_string(),
            attributes,
            tag,
        }
    }
}

/// The data owner's wallet holding one credential.
#[derive(Debug)]
pub struct Holder {
    pub owner_id: String,
    pub credential: Credential,
}

impl Holder {
    /// Builds a presentation together with the opening (full payload as held
    /// now) that lets the verifier check the commitment and tag.
    pub fn present(&self, request: &PresentationRequest, over_disclose: bool) -> (Presentation, Vec<u8>) {
        let c = &self.credential;
        let disclosed = c
            .attributes
            .iter()
            .filter(|(k, _)| over_disclose || request.requested_attributes.contains(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let opening = c.payload();
        let presentation = Presentation {
            credential_id: c.id.clone(),
            disclosed,
            issuer_id: c.issuer_id.clone(),
            tag: c.tag,
            full_payload_commitment: digest(&opening),
        };
        (presentation, opening)
    }
}

#[derive(Debug)]
pub struct Verifier {
    pub id: String,
}

impl Verifier {
    /// Commitment, tag and disclosed-subset consistency.
    pub fn verify_signature(&self, p: &Presentation, opening: &[u8]) -> bool {
        if digest(opening) != p.full_payload_commitment || !verify_tag(&p.tag, &p.issuer_id, opening) {
            return false;
        }
        let Ok((id, _subject, attrs)) = serde_json::from_slice::<OpenedPayload>(opening) else {
            return false;
        };
        id == p.credential_id && p.disclosed.iter().all(|(k, v)| attrs.get(k) == Some(v))
    }
}

type OpenedPayload = (String, String, BTreeMap<String, String>);

/// Runs the issuance-to-access flow for `s`, applying its fault toggles.
pub fn run_scenario(s: &Scenario) -> SimTrace {
    let mut rec = Recorder::default();
    let mut registry = RevocationRegistry::default();
    let issuer = Issuer { id: s.issuer_id.clone() };
    let verifier = Verifier { id: s.verifier_id.clone() };
    let names: BTreeSet<String> = s.attributes.keys().cloned().collect();

    if !s.toggles.skip_issuance_consent {
        rec.record(
            &s.owner_id,
            EventPayload::ConsentGranted {
                to: s.issuer_id.clone(),
                purpose: "issuance".into(),
            },
        );
    }
    rec.record(
        &s.owner_id,
        EventPayload::CredentialRequested {
            issuer: s.issuer_id.clone(),
            attributes: names.clone(),
        },
    );
    rec.record(&s.issuer_id, EventPayload::SchemaSelected { schema: SCHEMA_NAME.into() });
    let credential = issuer.issue(CREDENTIAL_ID, &s.owner_id, s.attributes.clone());
    rec.record(
        &s.issuer_id,
        EventPayload::CredentialIssued {
            credential_id: credential.id.clone(),
            subject: s.owner_id.clone(),
            attributes: names,
            tag: credential.tag,
        },
    );
    let mut holder = Holder {
        owner_id: s.owner_id.clone(),
        credential,
    };
    if let Some(name) = &s.toggles.tamper_attribute {
        if let Some(v) = holder.credential.attributes.get_mut(name) {
            v.push_str("~tampered");
        }
    }
    if s.toggles.revoke_before_presentation {
        registry.revoke(&holder.credential.id);
        rec.record(
            &s.issuer_id,
            EventPayload::Revoked {
                credential_id: holder.credential.id.clone(),
            },
        );
    }

    rec.record(
        &verifier.id,
        EventPayload::PresentationRequested {
            requested: s.request.requested_attributes.clone(),
            purpose: s.request.purpose.clone(),
        },
    );
    if !s.toggles.skip_presentation_consent {
        rec.record(
            &holder.owner_id,
            EventPayload::PresentationConsentGranted {
                verifier: verifier.id.clone(),
                attributes: s.request.requested_attributes.clone(),
            },
        );
    }
    let (presentation, opening) = holder.present(&s.request, s.toggles.over_disclose);
    let disclosed: BTreeSet<String> = presentation.disclosed.keys().cloned().collect();
    rec.record(
        &holder.owner_id,
        EventPayload::Presented {
            credential_id: presentation.credential_id.clone(),
            disclosed: disclosed.clone(),
            commitment: presentation.full_payload_commitment,
        },
    );

    let success = verifier.verify_signature(&presentation, &opening);
    rec.record(&verifier.id, EventPayload::SignatureVerified { success });
    let revoked = registry.is_revoked(&presentation.credential_id);
    rec.record(&verifier.id, EventPayload::RevocationChecked { revoked });

    let attributes_used: BTreeSet<String> =
        s.request.requested_attributes.intersection(&disclosed).cloned().collect();
    let outcome = if success && !revoked {
        rec.record(&verifier.id, EventPayload::AccessGranted { attributes_used });
        Outcome::Granted
    } else {
        let reason = if success { "credential revoked" } else { "signature verification failed" };
        rec.record(
            &verifier.id,
            EventPayload::AccessDenied {
                attributes_used,
                reason: reason.into(),
            },
        );
        Outcome::Denied
    };
    SimTrace {
        scenario: s.clone(),
        events: rec.events,
        outcome,
    }
}
