use crate::finding::{rules, Finding};
use crate::knowledge_base::{ActorKind, KnowledgeBase, NfrKey, ResponsibilityLevel};
use crate::model_dsl::SystemModel;

use super::AnalysisOptions;

const CONSENT: NfrKey = NfrKey::of(6);

fn with_article(kind: ActorKind) -> String {
    match kind {
        ActorKind::Issuer => format!("an {kind}"),
        _ => format!("a {kind}"),
    }
}

/// Checks every fulfillment claim in `model` against the responsibility
/// matrix and ownership map.
pub fn check_claims(model: &SystemModel, kb: &KnowledgeBase) -> Vec<Finding> {
    check_claims_with(model, kb, &AnalysisOptions::default())
}

pub fn check_claims_with(
    model: &SystemModel,
    kb: &KnowledgeBase,
    options: &AnalysisOptions,
) -> Vec<Finding> {
    let mut findings = Vec::new();
    for actor in &model.actors {
        for claim in &actor.claims {
            let nfr = claim.nfr;
            if actor.kind == ActorKind::Issuer && nfr == CONSENT && !options.issuer_consent_in_scope {
                continue;
            }
            let entry = kb.entry(nfr);
            let level = kb
                .lookup_responsibility(nfr, actor.kind)
                .expect("model actors are primary actors");
            let what = format!("{} ({}) claims {nfr} {}", actor.id, actor.kind, entry.name);
            let role = with_article(actor.kind);
            let finding = match level {
                ResponsibilityLevel::NoneLevel => Finding::error(
                    rules::CLAIMS_NO_RESPONSIBILITY,
                    &actor.id,
                    format!("{what}, but {role} has no responsibility for it"),
                ),
                ResponsibilityLevel::Secondary => Finding::warning(
                    rules::CLAIMS_SECONDARY,
                    &actor.id,
                    format!("{what}, but {role} only supports its fulfillment and cannot guarantee it"),
                ),
                ResponsibilityLevel::Tertiary => Finding::warning(
                    rules::CLAIMS_TERTIARY,
                    &actor.id,
                    format!("{what}, but {role} only benefits from its fulfillment by others"),
                ),
                ResponsibilityLevel::Primary => Finding::info(
                    rules::CLAIMS_OK,
                    &actor.id,
                    format!("{what}; {role} holds primary responsibility"),
                ),
            };
            findings.push(finding.with_span(claim.span));

            let owners = kb.ownership().owners(nfr);
            let supporting = matches!(level, ResponsibilityLevel::Secondary | ResponsibilityLevel::Tertiary);
            if supporting && !owners.contains(&actor.kind) {
                let owner_names: Vec<&str> = owners.iter().map(|o| o.name()).collect();
                findings.push(
                    Finding::error(
                        rules::CLAIMS_OWNERSHIP,
                        &actor.id,
                        format!(
                            "{what}, but {nfr} is owned by {} and {role} is neither an owner nor primarily responsible",
                            owner_names.join(", ")
                        ),
                    )
                    .with_span(claim.span),
                );
            }
        }
    }
    findings
}
