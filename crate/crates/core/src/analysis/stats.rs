use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::finding::{rules, Finding};
use crate::knowledge_base::{ActorKind, KnowledgeBase, NfrKey, ResponsibilityLevel};

/// Primary-responsibility counts as published alongside the categorization,
/// with the NFRs each count was stated to cover.
const PUBLISHED: [(ActorKind, usize, &[u8]); 3] = [
    (ActorKind::DataOwner, 11, &[1, 3, 4, 6, 7, 12, 14, 15, 16, 17, 19]),
    (ActorKind::Issuer, 6, &[2, 5, 6, 11, 20, 21]),
    (ActorKind::Verifier, 5, &[6, 14, 15, 21, 24]),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub actor: ActorKind,
    pub computed: usize,
    pub claimed: usize,
    /// Primary in the matrix but missing from the published list.
    pub only_in_matrix: Vec<NfrKey>,
    /// In the published list but not Primary in the matrix.
    pub only_in_published: Vec<NfrKey>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResponsibilityStats {
    pub primary_counts: BTreeMap<ActorKind, usize>,
    pub primary_nfrs: BTreeMap<ActorKind, BTreeSet<NfrKey>>,
    pub paper_claimed: BTreeMap<ActorKind, usize>,
    pub discrepancies: Vec<Discrepancy>,
}

impl ResponsibilityStats {
    pub fn findings(&self) -> Vec<Finding> {
        self.discrepancies
            .iter()
            .map(|d| Finding::warning(rules::STATS_DISCREPANCY, d.actor.name(), d.message.clone()))
            .collect()
    }
}

fn join(keys: &[NfrKey]) -> String {
    keys.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Counts Primary cells per actor and compares them with the published
/// counts, recording every mismatch with the NFRs responsible for it.
pub fn responsibility_stats(kb: &KnowledgeBase) -> ResponsibilityStats {
    let mut stats = ResponsibilityStats {
        primary_counts: BTreeMap::new(),
        primary_nfrs: BTreeMap::new(),
        paper_claimed: BTreeMap::new(),
        discrepancies: Vec::new(),
    };
    for (actor, claimed, published) in PUBLISHED {
        let computed: BTreeSet<NfrKey> = NfrKey::all()
            .filter(|&k| kb.lookup_responsibility(k, actor) == Ok(ResponsibilityLevel::Primary))
            .collect();
        let published: BTreeSet<NfrKey> = published.iter().map(|&n| NfrKey::of(n)).collect();
        let only_in_matrix: Vec<NfrKey> = computed.difference(&published).copied().collect();
        let only_in_published: Vec<NfrKey> = published.difference(&computed).copied().collect();

        if computed.len() != claimed || !only_in_matrix.is_empty() || !only_in_published.is_empty() {
            let mut parts = vec![format!(
                "{actor}: {} primary responsibilities in the matrix, {claimed} published",
                computed.len()
            )];
            if !only_in_matrix.is_empty() {
                parts.push(format!("primary in the matrix but not listed: {}", join(&only_in_matrix)));
            }
            if !only_in_published.is_empty() {
                parts.push(format!("listed but not primary in the matrix: {}", join(&only_in_published)));
            }
            stats.discrepancies.push(Discrepancy {
                actor,
                computed: computed.len(),
                claimed,
                only_in_matrix,
                only_in_published,
                message: parts.join("; "),
            });
        }
        stats.primary_counts.insert(actor, computed.len());
        stats.primary_nfrs.insert(actor, computed);
        stats.paper_claimed.insert(actor, claimed);
    }
    stats
}

/// NFRs treated as system constraints: owned by the wallet or the global
/// system and by none of the primary actors.
pub fn classify_constraints(kb: &KnowledgeBase) -> BTreeSet<NfrKey> {
    kb.ownership()
        .iter()
        .filter(|(_, owners)| {
            owners.iter().any(|o| matches!(o, ActorKind::Wallet | ActorKind::GlobalSystem))
                && !owners.iter().any(|o| o.is_primary())
        })
        .map(|(k, _)| k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge_base::builtin_kb;

    fn keys(ns: &[u32]) -> BTreeSet<NfrKey> {
        ns.iter().map(|&n| NfrKey::new(n).unwrap()).collect()
    }

    #[test]
    fn issuer_matches_published_figure() {
        let s = responsibility_stats(&builtin_kb());
        assert_eq!(s.primary_counts[&ActorKind::Issuer], 6);
        assert_eq!(s.primary_nfrs[&ActorKind::Issuer], keys(&[2, 5, 6, 11, 20, 21]));
        assert!(s.discrepancies.iter().all(|d| d.actor != ActorKind::Issuer));
    }

    #[test]
    fn owner_and_verifier_discrepancies() {
        let s = responsibility_stats(&builtin_kb());
        assert_eq!(s.primary_counts[&ActorKind::DataOwner], 12);
        assert_eq!(s.primary_counts[&ActorKind::Verifier], 4);
        assert_eq!(s.primary_nfrs[&ActorKind::Verifier], keys(&[6, 14, 21, 24]));
        assert_eq!(s.discrepancies.len(), 2);
        let owner = &s.discrepancies[0];
        assert_eq!(owner.actor, ActorKind::DataOwner);
        assert_eq!(owner.only_in_matrix, vec![NfrKey::new(10).unwrap()]);
        assert!(owner.only_in_published.is_empty());
        assert!(owner.message.contains("NFR10"));
        let verifier = &s.discrepancies[1];
        assert_eq!(verifier.only_in_published, vec![NfrKey::new(15).unwrap()]);
        assert_eq!(s.findings().len(), 2);
    }

    #[test]
    fn counts_match_primary_sets() {
        let s = responsibility_stats(&builtin_kb());
        for (actor, n) in &s.primary_counts {
            assert_eq!(*n, s.primary_nfrs[actor].len());
        }
        assert_eq!(s.paper_claimed.values().copied().collect::<Vec<_>>(), [11, 6, 5]);
    }

    #[test]
    fn constraints() {
        let c = classify_constraints(&builtin_kb());
        assert!(c.is_superset(&keys(&[8, 9, 18])));
        assert!(c.is_superset(&keys(&[13, 16, 22, 23])));
        assert!(!c.contains(&NfrKey::new(1).unwrap()));
        assert_eq!(c, keys(&[8, 9, 13, 16, 18, 22, 23]));
    }
}
