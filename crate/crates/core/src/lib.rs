//! Requirements analysis for decentralized / self-sovereign identity (DI/SSI)
//! architectures.
//!
//! The crate encodes an actor-oriented categorization of 24 non-functional
//! requirements (NFRs) as a [`knowledge_base::KnowledgeBase`], parses
//! architecture descriptions written in a small DSL ([`model_dsl`]), checks
//! them against the knowledge base ([`analysis`]), builds actor dependency
//! graphs ([`dep_graph`]) and simulates the credential lifecycle to check NFR
//! semantics on event traces ([`lifecycle_sim`]).

pub mod analysis;
pub mod dep_graph;
pub mod finding;
pub mod knowledge_base;
pub mod lifecycle_sim;
pub mod model_dsl;
pub mod records;

pub use finding::{Finding, Severity, SourceSpan};
pub use knowledge_base::{
    builtin_kb, load_extension, ActorKind, DependencyRelation, KbDelta, KbError, KnowledgeBase,
    NfrKey, PatternSource, Provenance, RelationSet, ResponsibilityLevel, Triple,
};
