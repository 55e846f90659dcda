//! Rule-based dependency derivation and comparison with the dependency table.

use serde::Serialize;

use crate::finding::{rules, Finding};
use crate::knowledge_base::{
    ActorKind, DependencyRelation, KnowledgeBase, NfrKey, Provenance, RelationSet,
    ResponsibilityLevel, Triple,
};

const R1: &str = "R1: a supporting or benefiting actor relies on the primary actor";
const R2: &str = "R2: the data owner relies on the wallet to enforce a requirement it is primarily responsible for";
const R2_SERVICE: &str = "R2': the wallet solely owns the requirement and serves the data owner";
const R3: &str = "R3: the global system solely owns the requirement as a system-wide constraint";

/// Derives dependency relations from the responsibility matrix and the
/// ownership map:
///
/// * R1: every Secondary/Tertiary actor depends on every Primary actor.
/// * R2: the owner depends on the wallet when the wallet co-owns an NFR the
///   owner is primarily responsible for.
/// * R2': the owner depends on the wallet when the wallet is sole owner and
///   the owner has any responsibility.
/// * R3: every responsible actor depends on the global system when it is
///   sole owner.
pub fn derive_dependencies(kb: &KnowledgeBase) -> RelationSet {
    let mut derived = RelationSet::new();
    let mut emit = |depender, dependee, nfr, rationale: &str| {
        let relation = DependencyRelation::new(depender, dependee, nfr, rationale, Provenance::Derived)
            .expect("rules never relate an actor to itself");
        derived.insert(relation);
    };

    for nfr in NfrKey::all() {
        let matrix = kb.matrix();
        let level = |a| matrix.get(nfr, a).expect("primary actor");
        let owners = kb.ownership().owners(nfr);
        let primaries = matrix.actors_at(nfr, ResponsibilityLevel::Primary);

        for actor in ActorKind::PRIMARY {
            if matches!(level(actor), ResponsibilityLevel::Secondary | ResponsibilityLevel::Tertiary) {
                for &p in primaries.iter().filter(|&&p| p != actor) {
                    emit(actor, p, nfr, R1);
                }
            }
        }

        let owner_level = level(ActorKind::DataOwner);
        if owners.contains(&ActorKind::Wallet) && owner_level == ResponsibilityLevel::Primary {
            emit(ActorKind::DataOwner, ActorKind::Wallet, nfr, R2);
        }
        let sole_owner = (owners.len() == 1).then(|| *owners.iter().next().unwrap());
        if sole_owner == Some(ActorKind::Wallet) && owner_level != ResponsibilityLevel::NoneLevel {
            emit(ActorKind::DataOwner, ActorKind::Wallet, nfr, R2_SERVICE);
        }
        if sole_owner == Some(ActorKind::GlobalSystem) {
            for actor in ActorKind::PRIMARY {
                if level(actor) != ResponsibilityLevel::NoneLevel {
                    emit(actor, ActorKind::GlobalSystem, nfr, R3);
                }
            }
        }
    }
    derived
}

/// Derived relations limited to the NFRs the dependency table documents.
pub fn derive_in_scope(kb: &KnowledgeBase) -> RelationSet {
    derive_dependencies(kb).restricted_to(kb.dependency_scope())
}

/// Three-way partition of two relation sets by triple identity (rationale
/// and provenance are ignored).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DependencyDiff {
    pub matched: RelationSet,
    pub missing_from_derived: RelationSet,
    pub extra_in_derived: RelationSet,
}

impl DependencyDiff {
    pub fn is_clean(&self) -> bool {
        self.missing_from_derived.is_empty() && self.extra_in_derived.is_empty()
    }

    pub fn triples(set: &RelationSet) -> Vec<Triple> {
        set.iter().map(|r| r.triple()).collect()
    }

    /// `deps.missing` warnings for table rows no rule reproduces and
    /// `deps.extra` infos for derived rows the table lacks.
    pub fn findings(&self) -> Vec<Finding> {
        let missing = self.missing_from_derived.iter().map(|r| {
            Finding::warning(
                rules::DEPS_MISSING,
                r.nfr.to_string(),
                format!("{} is in the dependency table but no derivation rule produces it", r.triple()),
            )
        });
        let extra = self.extra_in_derived.iter().map(|r| {
            Finding::info(
                rules::DEPS_EXTRA,
                r.nfr.to_string(),
                format!("{} is derived ({}) but absent from the dependency table", r.triple(), r.rationale),
            )
        });
        missing.chain(extra).collect()
    }
}

pub fn diff_dependencies(authoritative: &RelationSet, derived: &RelationSet) -> DependencyDiff {
    let mut diff = DependencyDiff::default();
    for r in authoritative.iter() {
        if derived.contains(&r.triple()) {
            diff.matched.insert(r.clone());
        } else {
            diff.missing_from_derived.insert(r.clone());
        }
    }
    for r in derived.iter() {
        if !authoritative.contains(&r.triple()) {
            diff.extra_in_derived.insert(r.clone());
        }
    }
    diff
}
