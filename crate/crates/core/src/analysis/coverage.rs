use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::finding::{rules, Finding};
use crate::knowledge_base::{KnowledgeBase, NfrKey};
use crate::model_dsl::SystemModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageScope {
    KbOnly,
    ModelScoped,
}

/// One reason an NFR counts as covered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CoverageSource {
    /// `A:<name>` or `B:<name>`.
    pub pattern: String,
    /// Declaring actor id; absent in knowledge-base scope.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub scope: CoverageScope,
    pub covered: BTreeMap<NfrKey, BTreeSet<CoverageSource>>,
    pub uncovered: BTreeSet<NfrKey>,
}

impl CoverageReport {
    /// Uncovered keys within `keys`.
    pub fn uncovered_within(&self, keys: impl IntoIterator<Item = NfrKey>) -> BTreeSet<NfrKey> {
        keys.into_iter().filter(|k| self.uncovered.contains(k)).collect()
    }

    pub fn findings(&self, kb: &KnowledgeBase) -> Vec<Finding> {
        let context = match self.scope {
            CoverageScope::KbOnly => "no loaded design pattern supports it",
            CoverageScope::ModelScoped => "no declared actor implements a pattern supporting it",
        };
        self.uncovered
            .iter()
            .map(|&nfr| {
                Finding::warning(
                    rules::COVERAGE_GAP,
                    nfr.to_string(),
                    format!("{nfr} {} is uncovered: {context}", kb.entry(nfr).name),
                )
            })
            .collect()
    }
}

/// Pattern coverage of the 24 NFRs. Without a model, an NFR is covered when
/// any known pattern supports it; with a model, only patterns implemented by
/// declared actors count.
pub fn coverage(kb: &KnowledgeBase, model: Option<&SystemModel>) -> CoverageReport {
    let mut covered: BTreeMap<NfrKey, BTreeSet<CoverageSource>> = BTreeMap::new();
    let scope = match model {
        None => {
            for p in kb.patterns() {
                for &nfr in &p.supported_nfrs {
                    covered.entry(nfr).or_default().insert(CoverageSource {
                        pattern: p.label(),
                        actor: None,
                    });
                }
            }
            CoverageScope::KbOnly
        }
        Some(model) => {
            for actor in &model.actors {
                for declared in &actor.patterns {
                    let Some(p) = kb.find_pattern(declared.source, &declared.name) else {
                        continue;
                    };
                    for &nfr in &p.supported_nfrs {
                        covered.entry(nfr).or_default().insert(CoverageSource {
                            pattern: p.label(),
                            actor: Some(actor.id.clone()),
                        });
                    }
                }
            }
            CoverageScope::ModelScoped
        }
    };
    let uncovered = NfrKey::all().filter(|k| !covered.contains_key(k)).collect();
    CoverageReport {
        scope,
        covered,
        uncovered,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge_base::builtin_kb;
    use crate::model_dsl::parse_model;

    fn keys(ns: &[u32]) -> BTreeSet<NfrKey> {
        ns.iter().map(|&n| NfrKey::new(n).unwrap()).collect()
    }

    #[test]
    fn builtin_gaps_among_first_five() {
        let report = coverage(&builtin_kb(), None);
        assert_eq!(report.scope, CoverageScope::KbOnly);
        assert_eq!(report.uncovered_within(keys(&[1, 2, 3, 4, 5])), keys(&[3, 5]));
        // covered and uncovered partition the catalog
        assert_eq!(report.covered.len() + report.uncovered.len(), 24);
        assert_eq!(report.findings(&builtin_kb()).len(), report.uncovered.len());
    }

    #[test]
    fn model_without_patterns_covers_nothing() {
        let kb = builtin_kb();
        let m = parse_model(
            r#"system "x" { actor owner "o" {} actor issuer "i" {} actor verifier "v" {} }"#,
            &kb,
        )
        .unwrap();
        let report = coverage(&kb, Some(&m));
        assert_eq!(report.scope, CoverageScope::ModelScoped);
        assert!(report.covered.is_empty());
        assert_eq!(report.uncovered.len(), 24);
    }

    #[test]
    fn model_scope_records_declaring_actor() {
        let kb = builtin_kb();
        let m = parse_model(
            r#"system "x" {
  actor owner "o" { patterns: [B: "multiple registration", A: "Unknown"]; }
  actor issuer "i" { patterns: [A: "Verifiable ID"]; }
  actor verifier "v" {}
}"#,
            &kb,
        )
        .unwrap();
        let report = coverage(&kb, Some(&m));
        assert_eq!(report.covered.keys().copied().collect::<BTreeSet<_>>(), keys(&[2, 4]));
        let nfr4 = &report.covered[&NfrKey::new(4).unwrap()];
        assert_eq!(
            nfr4.iter().next().unwrap(),
            &CoverageSource {
                pattern: "B:Multiple Registration".into(),
                actor: Some("o".into())
            }
        );
    }
}
