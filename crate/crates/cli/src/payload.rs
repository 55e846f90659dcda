use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use ssiarch_core::analysis::{
    classify_constraints, CoverageReport, CoverageScope, CoverageSource, DependencyDiff, Discrepancy,
    ResponsibilityStats,
};
use ssiarch_core::dep_graph::{GraphStats, NodeDegree, Scope};
use ssiarch_core::lifecycle_sim::{EventKind, Outcome, SimTrace};
use ssiarch_core::model_dsl::SystemModel;
use ssiarch_core::{ActorKind, DependencyRelation, KnowledgeBase, NfrKey, RelationSet, Triple};

/// Command-specific part of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    /// `None` when the model failed to resolve.
    Validate(Option<ValidatePayload>),
    Coverage(CoveragePayload),
    Deps(DepsPayload),
    Diff(DiffPayload),
    Graph(GraphPayload),
    Simulate(SimulatePayload),
    Stats(StatsPayload),
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidatePayload {
    pub model: String,
    pub actors: usize,
    pub wallets: usize,
    pub dependencies: usize,
    pub claims: usize,
}

impl ValidatePayload {
    pub fn new(model: &SystemModel) -> Self {
        Self {
            model: model.name.clone(),
            actors: model.actors.len(),
            wallets: model.wallets.len(),
            dependencies: model.explicit_deps.len(),
            claims: model.actors.iter().map(|a| a.claims.len()).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedNfr {
    pub nfr: NfrKey,
    pub name: String,
}

impl NamedNfr {
    fn new(kb: &KnowledgeBase, nfr: NfrKey) -> Self {
        Self {
            nfr,
            name: kb.entry(nfr).name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveredNfr {
    pub nfr: NfrKey,
    pub name: String,
    pub sources: Vec<CoverageSource>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveragePayload {
    pub scope: CoverageScope,
    pub covered: Vec<CoveredNfr>,
    pub uncovered: Vec<NamedNfr>,
}

impl CoveragePayload {
    pub fn new(report: &CoverageReport, kb: &KnowledgeBase) -> Self {
        Self {
            scope: report.scope,
            covered: report
                .covered
                .iter()
                .map(|(&nfr, sources)| CoveredNfr {
                    nfr,
                    name: kb.entry(nfr).name.clone(),
                    sources: sources.iter().cloned().collect(),
                })
                .collect(),
            uncovered: report.uncovered.iter().map(|&n| NamedNfr::new(kb, n)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepsPayload {
    pub dependencies: Vec<DependencyRelation>,
}

impl DepsPayload {
    pub fn new(relations: &RelationSet) -> Self {
        Self {
            dependencies: relations.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffPayload {
    pub matched: Vec<Triple>,
    pub missing_from_derived: Vec<Triple>,
    pub extra_in_derived: Vec<Triple>,
}

impl DiffPayload {
    pub fn new(diff: &DependencyDiff) -> Self {
        Self {
            matched: DependencyDiff::triples(&diff.matched),
            missing_from_derived: DependencyDiff::triples(&diff.missing_from_derived),
            extra_in_derived: DependencyDiff::triples(&diff.extra_in_derived),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphPayload {
    pub scope: Scope,
    pub node_count: usize,
    pub dependency_edges: usize,
    pub ownership_edges: usize,
    pub degrees: Vec<NodeDegree>,
}

impl GraphPayload {
    pub fn new(scope: Scope, stats: &GraphStats) -> Self {
        Self {
            scope,
            node_count: stats.node_count,
            dependency_edges: stats.dependency_edges,
            ownership_edges: stats.ownership_edges,
            degrees: stats.degrees.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventSummary {
    pub seq: u64,
    pub kind: EventKind,
    pub actor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceSummary {
    pub issuer: String,
    pub owner: String,
    pub verifier: String,
    pub outcome: Outcome,
    pub events: Vec<EventSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulatePayload {
    pub scenarios: Vec<TraceSummary>,
}

impl SimulatePayload {
    pub fn new(traces: &[SimTrace]) -> Self {
        Self {
            scenarios: traces
                .iter()
                .map(|t| TraceSummary {
                    issuer: t.scenario.issuer_id().to_string(),
                    owner: t.scenario.owner_id().to_string(),
                    verifier: t.scenario.verifier_id().to_string(),
                    outcome: t.outcome,
                    events: t
                        .events
                        .iter()
                        .map(|e| EventSummary {
                            seq: e.seq,
                            kind: e.kind(),
                            actor: e.actor.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsPayload {
    pub computed: BTreeMap<ActorKind, usize>,
    pub claimed: BTreeMap<ActorKind, usize>,
    pub primary_nfrs: BTreeMap<ActorKind, BTreeSet<NfrKey>>,
    pub discrepancies: Vec<Discrepancy>,
    pub constraints: Vec<NamedNfr>,
}

impl StatsPayload {
    pub fn new(stats: &ResponsibilityStats, kb: &KnowledgeBase) -> Self {
        Self {
            computed: stats.primary_counts.clone(),
            claimed: stats.paper_claimed.clone(),
            primary_nfrs: stats.primary_nfrs.clone(),
            discrepancies: stats.discrepancies.clone(),
            constraints: classify_constraints(kb).into_iter().map(|n| NamedNfr::new(kb, n)).collect(),
        }
    }
}
