//! Architecture-description DSL for DI/SSI systems.
//!
//! ```text
//! system "campus" {
//!   actor owner "alice" { claims: [NFR1, NFR3]; }
//!   actor issuer "uni" { patterns: [A: "Verifiable ID"]; claims: [NFR2]; }
//!   actor verifier "library" { claims: [NFR24]; }
//!   wallet "alice-phone" { for: "alice"; }
//!   depends "library" on "uni": NFR2;
//! }
//! ```
//!
//! Text goes through [`tokenize`], [`parse`] and [`resolve`] to become a
//! [`SystemModel`]; [`format_model`] prints the canonical form back.

mod lexer;
mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::finding::{rules, Finding, SourceSpan};
use crate::knowledge_base::{
    ActorKind, DependencyRelation, KnowledgeBase, NfrKey, PatternSource, Provenance, RelationSet,
};

pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use parser::{end_span, parse, ActorAst, DependsAst, Item, ModelAst, PatternAst, Prop, WalletAst};

/// Id under which dependencies refer to the global system.
pub const GLOBAL_SYSTEM_ID: &str = "system";

/// Rationale attached to dependencies declared in a model file.
pub const MODEL_DEPENDENCY_RATIONALE: &str = "declared in model";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRef {
    pub source: PatternSource,
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub nfr: NfrKey,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActorDecl {
    pub kind: ActorKind,
    pub id: String,
    pub patterns: Vec<PatternRef>,
    pub claims: Vec<Claim>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalletDecl {
    pub id: String,
    pub owner_ref: String,
    pub span: SourceSpan,
}

/// A dependency declared between two instances of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitDependency {
    pub depender_id: String,
    pub dependee_id: String,
    pub relation: DependencyRelation,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemModel {
    pub name: String,
    /// Ordered owner, issuer, verifier; declaration order within a kind.
    pub actors: Vec<ActorDecl>,
    pub wallets: Vec<WalletDecl>,
    pub explicit_deps: Vec<ExplicitDependency>,
    pub uses_global_system: bool,
}

impl SystemModel {
    pub fn actors_of(&self, kind: ActorKind) -> impl Iterator<Item = &ActorDecl> {
        self.actors.iter().filter(move |a| a.kind == kind)
    }

    pub fn actor(&self, id: &str) -> Option<&ActorDecl> {
        self.actors.iter().find(|a| a.id == id)
    }

    pub fn wallet_of(&self, owner_id: &str) -> Option<&WalletDecl> {
        self.wallets.iter().find(|w| w.owner_ref == owner_id)
    }

    /// Kind-level view of the declared dependencies.
    pub fn explicit_relations(&self) -> RelationSet {
        self.explicit_deps.iter().map(|d| d.relation.clone()).collect()
    }

    /// Copy with every span replaced by [`SourceSpan::synthetic`].
    pub fn without_spans(&self) -> SystemModel {
        let blank = SourceSpan::synthetic();
        let mut m = self.clone();
        for a in &mut m.actors {
            a.span = blank;
            a.patterns.iter_mut().for_each(|p| p.span = blank);
            a.claims.iter_mut().for_each(|c| c.span = blank);
        }
        m.wallets.iter_mut().for_each(|w| w.span = blank);
        m.explicit_deps.iter_mut().for_each(|d| d.span = blank);
        m
    }

    /// Equality ignoring source positions.
    pub fn structurally_eq(&self, other: &SystemModel) -> bool {
        self.without_spans() == other.without_spans()
    }
}

/// Resolves names in a parsed tree and enforces the model invariants. Either
/// a model or at least one error finding is returned, never both.
pub fn resolve(ast: &ModelAst, kb: &KnowledgeBase) -> Result<SystemModel, Vec<Finding>> {
    let mut errors = Vec::new();
    let mut ids: BTreeMap<&str, SourceSpan> = BTreeMap::new();
    let mut actors = Vec::new();
    let mut wallet_asts = Vec::new();
    let mut dep_asts = Vec::new();
    for item in &ast.items {
        match item {
            Item::Actor(a) => actors.push(a),
            Item::Wallet(w) => wallet_asts.push(w),
            Item::Depends(d) => dep_asts.push(d),
        }
    }

    let mut resolved_actors = Vec::new();
    for a in &actors {
        claim_id(&mut ids, &a.id, a.id_span, &mut errors);
        let mut patterns: Vec<PatternRef> = Vec::new();
        let mut claims: Vec<Claim> = Vec::new();
        for prop in &a.props {
            match prop {
                Prop::Patterns(pats) => {
                    for p in pats {
                        if !patterns.iter().any(|q| q.source == p.source && q.name == p.name) {
                            patterns.push(PatternRef {
                                source: p.source,
                                name: p.name.clone(),
                                span: p.span,
                            });
                        }
                    }
                }
                Prop::Claims(keys) => {
                    for &(n, span) in keys {
                        match catalog_key(kb, n) {
                            Some(nfr) => {
                                if !claims.iter().any(|c| c.nfr == nfr) {
                                    claims.push(Claim { nfr, span });
                                }
                            }
                            None => errors.push(unknown_nfr(&a.id, n, span)),
                        }
                    }
                }
            }
        }
        resolved_actors.push(ActorDecl {
            kind: a.kind,
            id: a.id.clone(),
            patterns,
            claims,
            span: a.id_span,
        });
    }
    resolved_actors.sort_by_key(|a| a.kind);

    for kind in ActorKind::PRIMARY {
        if !resolved_actors.iter().any(|a| a.kind == kind) {
            errors.push(
                Finding::error(
                    rules::MODEL_MISSING_ACTOR,
                    kind.name(),
                    format!("system `{}` declares no {kind}; a data owner, an issuer and a verifier are all required", ast.name),
                )
                .with_span(ast.span),
            );
        }
    }

    let kind_of = |id: &str| resolved_actors.iter().find(|a| a.id == id).map(|a| a.kind);

    let mut wallets: Vec<WalletDecl> = Vec::new();
    for w in &wallet_asts {
        claim_id(&mut ids, &w.id, w.id_span, &mut errors);
        match kind_of(&w.owner_ref) {
            Some(ActorKind::DataOwner) => {
                if let Some(prev) = wallets.iter().find(|p| p.owner_ref == w.owner_ref) {
                    errors.push(
                        Finding::error(
                            rules::MODEL_DUPLICATE_WALLET,
                            &w.id,
                            format!("data owner `{}` already has wallet `{}`", w.owner_ref, prev.id),
                        )
                        .with_span(w.owner_span),
                    );
                }
            }
            Some(other) => errors.push(
                Finding::error(
                    rules::MODEL_UNRESOLVED_REF,
                    &w.id,
                    format!("wallet owner `{}` is a {other}, not a data owner", w.owner_ref),
                )
                .with_span(w.owner_span),
            ),
            None => errors.push(
                Finding::error(
                    rules::MODEL_UNRESOLVED_REF,
                    &w.id,
                    format!("wallet owner `{}` is not a declared data owner", w.owner_ref),
                )
                .with_span(w.owner_span),
            ),
        }
        wallets.push(WalletDecl {
            id: w.id.clone(),
            owner_ref: w.owner_ref.clone(),
            span: w.id_span,
        });
    }

    let endpoint = |id: &str| -> Option<ActorKind> {
        kind_of(id)
            .or_else(|| wallets.iter().any(|w| w.id == id).then_some(ActorKind::Wallet))
            .or_else(|| (id == GLOBAL_SYSTEM_ID).then_some(ActorKind::GlobalSystem))
    };

    let mut explicit_deps: Vec<ExplicitDependency> = Vec::new();
    let mut seen = BTreeSet::new();
    for d in &dep_asts {
        let from = endpoint(&d.depender);
        let to = endpoint(&d.dependee);
        let subject = format!("{} -> {}", d.depender, d.dependee);
        if from.is_none() {
            errors.push(unresolved_endpoint(&subject, &d.depender, d.depender_span));
        }
        if to.is_none() {
            errors.push(unresolved_endpoint(&subject, &d.dependee, d.dependee_span));
        }
        let nfr = catalog_key(kb, d.nfr);
        if nfr.is_none() {
            errors.push(unknown_nfr(&subject, d.nfr, d.nfr_span));
        }
        let (Some(from), Some(to), Some(nfr)) = (from, to, nfr) else {
            continue;
        };
        let Ok(relation) =
            DependencyRelation::new(from, to, nfr, MODEL_DEPENDENCY_RATIONALE, Provenance::Extension)
        else {
            errors.push(
                Finding::error(
                    rules::MODEL_SELF_DEPENDENCY,
                    subject,
                    format!("`{}` and `{}` are both {from} instances; a dependency needs two different actor kinds", d.depender, d.dependee),
                )
                .with_span(d.span),
            );
            continue;
        };
        if !seen.insert((d.depender.as_str(), d.dependee.as_str(), nfr)) {
            errors.push(
                Finding::error(
                    rules::MODEL_DUPLICATE_DEPENDENCY,
                    subject,
                    format!("dependency of `{}` on `{}` for {nfr} is declared twice", d.depender, d.dependee),
                )
                .with_span(d.span),
            );
            continue;
        }
        explicit_deps.push(ExplicitDependency {
            depender_id: d.depender.clone(),
            dependee_id: d.dependee.clone(),
            relation,
            span: d.span,
        });
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(SystemModel {
        name: ast.name.clone(),
        actors: resolved_actors,
        wallets,
        explicit_deps,
        uses_global_system: true,
    })
}

/// Registers a declared id, reporting reserved and duplicate ids.
fn claim_id<'a>(
    ids: &mut BTreeMap<&'a str, SourceSpan>,
    id: &'a str,
    span: SourceSpan,
    errors: &mut Vec<Finding>,
) {
    if id == GLOBAL_SYSTEM_ID {
        errors.push(
            Finding::error(
                rules::MODEL_RESERVED_ID,
                id,
                format!("`{GLOBAL_SYSTEM_ID}` is reserved for the global system"),
            )
            .with_span(span),
        );
    } else if let Some(first) = ids.get(id) {
        errors.push(
            Finding::error(
                rules::MODEL_DUPLICATE_ID,
                id,
                format!("`{id}` is already declared at {first}"),
            )
            .with_span(span),
        );
    } else {
        ids.insert(id, span);
    }
}

fn catalog_key(kb: &KnowledgeBase, ordinal: u32) -> Option<NfrKey> {
    kb.catalog().iter().map(|e| e.key).find(|k| k.ordinal() == ordinal)
}

fn unknown_nfr(subject: &str, n: u32, span: SourceSpan) -> Finding {
    Finding::error(
        rules::MODEL_UNKNOWN_NFR,
        subject,
        format!("NFR{n} is not in the catalog (NFR1..NFR24)"),
    )
    .with_span(span)
}

fn unresolved_endpoint(subject: &str, id: &str, span: SourceSpan) -> Finding {
    Finding::error(
        rules::MODEL_UNRESOLVED_REF,
        subject,
        format!("`{id}` is not a declared actor, wallet or `{GLOBAL_SYSTEM_ID}`"),
    )
    .with_span(span)
}

/// Tokenizes, parses and resolves `text` in one step.
pub fn parse_model(text: &str, kb: &KnowledgeBase) -> Result<SystemModel, Vec<Finding>> {
    let tokens = tokenize(text).map_err(|e| vec![e])?;
    let ast = parse(&tokens, end_span(text)).map_err(|e| vec![e])?;
    resolve(&ast, kb)
}

/// Warnings for declared patterns that the knowledge base does not know.
/// These never block resolution since the complete catalogs live outside the
/// built-in data.
pub fn pattern_warnings(model: &SystemModel, kb: &KnowledgeBase) -> Vec<Finding> {
    model
        .actors
        .iter()
        .flat_map(|a| a.patterns.iter().map(move |p| (a, p)))
        .filter(|(_, p)| kb.find_pattern(p.source, &p.name).is_none())
        .map(|(a, p)| {
            Finding::warning(
                rules::MODEL_UNKNOWN_PATTERN,
                &a.id,
                format!("pattern {}:\"{}\" is not in the loaded pattern catalogs", p.source, p.name),
            )
            .with_span(p.span)
        })
        .collect()
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Prints the canonical DSL form of `model`.
pub fn format_model(model: &SystemModel) -> String {
    let mut out = String::new();
    writeln!(out, "system {} {{", quote(&model.name)).unwrap();

    let mut actors: Vec<&ActorDecl> = model.actors.iter().collect();
    actors.sort_by_key(|a| a.kind);
    for a in actors {
        let header = format!("  actor {} {}", a.kind.name(), quote(&a.id));
        if a.patterns.is_empty() && a.claims.is_empty() {
            writeln!(out, "{header} {{}}").unwrap();
            continue;
        }
        writeln!(out, "{header} {{").unwrap();
        if !a.patterns.is_empty() {
            let pats: Vec<String> = a
                .patterns
                .iter()
                .map(|p| format!("{}: {}", p.source, quote(&p.name)))
                .collect();
            writeln!(out, "    patterns: [{}];", pats.join(", ")).unwrap();
        }
        if !a.claims.is_empty() {
            let keys: Vec<String> = a.claims.iter().map(|c| c.nfr.to_string()).collect();
            writeln!(out, "    claims: [{}];", keys.join(", ")).unwrap();
        }
        out.push_str("  }\n");
    }
    for w in &model.wallets {
        writeln!(out, "  wallet {} {{ for: {}; }}", quote(&w.id), quote(&w.owner_ref)).unwrap();
    }
    for d in &model.explicit_deps {
        writeln!(
            out,
            "  depends {} on {}: {};",
            quote(&d.depender_id),
            quote(&d.dependee_id),
            d.relation.nfr
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
