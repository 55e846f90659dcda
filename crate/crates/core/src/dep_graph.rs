//! Actor dependency graph with DOT/TSV export.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::knowledge_base::{ActorKind, NfrKey, OwnershipMap, RelationSet};
use crate::model_dsl::{SystemModel, GLOBAL_SYSTEM_ID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    KbOnly,
    ModelScoped,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("model scope requires a system model")]
    MissingModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    Dependency,
    Ownership,
}

impl EdgeKind {
    pub fn letter(self) -> &'static str {
        match self {
            EdgeKind::Dependency => "D",
            EdgeKind::Ownership => "O",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub id: String,
    pub kind: ActorKind,
}

/// Edge between `nodes[from]` and `nodes[to]`. Ownership edges are loops on
/// the owning node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub nfr: NfrKey,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl DepGraph {
    pub fn node(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn dependency_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Dependency)
    }

    pub fn ownership_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Ownership)
    }
}

struct Builder {
    nodes: Vec<Node>,
    edges: BTreeSet<(usize, usize, NfrKey, EdgeKind)>,
}

impl Builder {
    fn intern(&mut self, id: &str, kind: ActorKind) -> usize {
        match self.nodes.iter().position(|n| n.id == id) {
            Some(i) => i,
            None => {
                self.nodes.push(Node { id: id.to_string(), kind });
                self.nodes.len() - 1
            }
        }
    }

    fn finish(self) -> DepGraph {
        // re-rank nodes canonically, then sort edges by the new positions
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&i| self.nodes[i].kind);
        let mut rank = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let nodes = order.iter().map(|&i| self.nodes[i].clone()).collect();
        let mut edges: Vec<Edge> = self
            .edges
            .into_iter()
            .map(|(from, to, nfr, kind)| Edge {
                from: rank[from],
                to: rank[to],
                nfr,
                kind,
            })
            .collect();
        edges.sort();
        DepGraph { nodes, edges }
    }
}

/// Builds the graph: one D-edge per relation and one O-edge per
/// (owner, NFR) pair.
///
/// In knowledge-base scope nodes are actor kinds (`o`, `i`, `v`, `w`, `s`)
/// and only kinds touched by an edge appear. In model scope every declared
/// actor and wallet is a node, kind-level relations are expanded to all
/// instance pairs (an owner only relies on its own wallet) and the model's
/// explicit dependencies are added by id.
pub fn build_graph(
    relations: &RelationSet,
    ownership: &OwnershipMap,
    scope: Scope,
    model: Option<&SystemModel>,
) -> Result<DepGraph, GraphError> {
    let mut b = Builder {
        nodes: Vec::new(),
        edges: BTreeSet::new(),
    };
    match scope {
        Scope::KbOnly => {
            for r in relations.iter() {
                let from = b.intern(r.depender.letter(), r.depender);
                let to = b.intern(r.dependee.letter(), r.dependee);
                b.edges.insert((from, to, r.nfr, EdgeKind::Dependency));
            }
            for (nfr, owners) in ownership.iter() {
                for &owner in owners {
                    let n = b.intern(owner.letter(), owner);
                    b.edges.insert((n, n, nfr, EdgeKind::Ownership));
                }
            }
        }
        Scope::ModelScoped => {
            let model = model.ok_or(GraphError::MissingModel)?;
            for a in &model.actors {
                b.intern(&a.id, a.kind);
            }
            for w in &model.wallets {
                b.intern(&w.id, ActorKind::Wallet);
            }
            if model.uses_global_system {
                b.intern(GLOBAL_SYSTEM_ID, ActorKind::GlobalSystem);
            }
            for r in relations.iter() {
                for (from, to) in instance_pairs(model, r.depender, r.dependee) {
                    let from = b.intern(&from, r.depender);
                    let to = b.intern(&to, r.dependee);
                    b.edges.insert((from, to, r.nfr, EdgeKind::Dependency));
                }
            }
            for d in &model.explicit_deps {
                let from = b.intern(&d.depender_id, d.relation.depender);
                let to = b.intern(&d.dependee_id, d.relation.dependee);
                b.edges.insert((from, to, d.relation.nfr, EdgeKind::Dependency));
            }
            for (nfr, owners) in ownership.iter() {
                for &owner in owners {
                    for id in instances(model, owner) {
                        let n = b.intern(&id, owner);
                        b.edges.insert((n, n, nfr, EdgeKind::Ownership));
                    }
                }
            }
        }
    }
    Ok(b.finish())
}

fn instances(model: &SystemModel, kind: ActorKind) -> Vec<String> {
    match kind {
        ActorKind::Wallet => model.wallets.iter().map(|w| w.id.clone()).collect(),
        ActorKind::GlobalSystem => vec![GLOBAL_SYSTEM_ID.to_string()],
        k => model.actors_of(k).map(|a| a.id.clone()).collect(),
    }
}

fn instance_pairs(model: &SystemModel, depender: ActorKind, dependee: ActorKind) -> Vec<(String, String)> {
    if (depender, dependee) == (ActorKind::DataOwner, ActorKind::Wallet) {
        return model
            .wallets
            .iter()
            .map(|w| (w.owner_ref.clone(), w.id.clone()))
            .collect();
    }
    let tos = instances(model, dependee);
    instances(model, depender)
        .into_iter()
        .flat_map(|f| tos.iter().map(move |t| (f.clone(), t.clone())))
        .collect()
}

fn dot_id(id: &str) -> String {
    let mut chars = id.chars();
    let plain = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain {
        id.to_string()
    } else {
        format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Graphviz rendering. Node ids are the kind letters or instance ids; edges
/// are labeled `D:NFRn` or `O:NFRn`.
pub fn to_dot(graph: &DepGraph) -> String {
    let mut out = String::from("digraph deps {\n");
    for n in &graph.nodes {
        let _ = writeln!(out, "  {};", dot_id(&n.id));
    }
    for e in &graph.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}:{}\"];",
            dot_id(&graph.nodes[e.from].id),
            dot_id(&graph.nodes[e.to].id),
            e.kind.letter(),
            e.nfr
        );
    }
    out.push_str("}\n");
    out
}

/// One `from<TAB>to<TAB>D|O<TAB>NFRn` line per edge.
pub fn to_tsv(graph: &DepGraph) -> String {
    let mut out = String::new();
    for e in &graph.edges {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            graph.nodes[e.from].id,
            graph.nodes[e.to].id,
            e.kind.letter(),
            e.nfr
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeDegree {
    pub node: String,
    pub in_degree: usize,
    pub out_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub degrees: Vec<NodeDegree>,
    pub node_count: usize,
    pub dependency_edges: usize,
    pub ownership_edges: usize,
}

impl GraphStats {
    pub fn degree(&self, node: &str) -> Option<&NodeDegree> {
        self.degrees.iter().find(|d| d.node == node)
    }
}

/// Per-node degrees over dependency edges, plus totals.
pub fn graph_stats(graph: &DepGraph) -> GraphStats {
    let mut degrees: Vec<NodeDegree> = graph
        .nodes
        .iter()
        .map(|n| NodeDegree {
            node: n.id.clone(),
            in_degree: 0,
            out_degree: 0,
        })
        .collect();
    for e in graph.dependency_edges() {
        degrees[e.from].out_degree += 1;
        degrees[e.to].in_degree += 1;
    }
    GraphStats {
        degrees,
        node_count: graph.nodes.len(),
        dependency_edges: graph.dependency_edges().count(),
        ownership_edges: graph.ownership_edges().count(),
    }
}
