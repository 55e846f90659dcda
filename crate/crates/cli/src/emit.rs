use std::fmt::Write as _;

use ssiarch_core::analysis::CoverageScope;
use ssiarch_core::{ActorKind, Severity, Triple};

use crate::payload::Payload;
use crate::Report;

/// Compact JSON with fields in declaration order, newline-terminated.
pub fn emit_json(report: &Report) -> String {
    let mut out = serde_json::to_string(report).expect("reports always serialize");
    out.push('\n');
    out
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}

fn table(out: &mut String, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| cell(c)).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
}

fn triple_rows(triples: &[Triple]) -> Vec<Vec<String>> {
    triples
        .iter()
        .map(|t| vec![t.depender.letter().into(), t.dependee.letter().into(), t.nfr.to_string()])
        .collect()
}

fn scope_label(scope: CoverageScope) -> &'static str {
    match scope {
        CoverageScope::KbOnly => "knowledge base",
        CoverageScope::ModelScoped => "model",
    }
}

pub fn emit_markdown(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# ssiarch {}\n", report.command);
    let _ = writeln!(out, "tool version {}\n", report.tool_version);
    out.push_str("## Findings\n\n");
    if report.findings.is_empty() {
        out.push_str("no findings\n");
    } else {
        table(
            &mut out,
            &["severity", "rule", "subject", "message", "at"],
            report.findings.iter().map(|f| {
                vec![
                    f.severity.to_string(),
                    f.rule.clone(),
                    f.subject.clone(),
                    f.message.clone(),
                    f.span.map(|s| s.to_string()).unwrap_or_default(),
                ]
            }),
        );
    }

    match &report.payload {
        Payload::Validate(Some(v)) => {
            out.push_str("\n## Model\n\n");
            table(
                &mut out,
                &["model", "actors", "wallets", "dependencies", "claims"],
                [vec![
                    v.model.clone(),
                    v.actors.to_string(),
                    v.wallets.to_string(),
                    v.dependencies.to_string(),
                    v.claims.to_string(),
                ]],
            );
        }
        Payload::Validate(None) | Payload::Empty => {}
        Payload::Coverage(c) => {
            let _ = writeln!(out, "\n## Coverage ({} scope)\n", scope_label(c.scope));
            table(
                &mut out,
                &["NFR", "name", "covered by"],
                c.covered.iter().map(|e| {
                    let sources: Vec<String> = e
                        .sources
                        .iter()
                        .map(|s| match &s.actor {
                            Some(a) => format!("{} ({a})", s.pattern),
                            None => s.pattern.clone(),
                        })
                        .collect();
                    vec![e.nfr.to_string(), e.name.clone(), sources.join(", ")]
                }),
            );
            out.push_str("\n## Uncovered\n\n");
            if c.uncovered.is_empty() {
                out.push_str("none\n");
            }
            for n in &c.uncovered {
                let _ = writeln!(out, "- {} {}", n.nfr, n.name);
            }
        }
        Payload::Deps(d) => {
            out.push_str("\n## Dependencies\n\n");
            table(
                &mut out,
                &["depender", "dependee", "NFR", "provenance", "rationale"],
                d.dependencies.iter().map(|r| {
                    vec![
                        r.depender.letter().into(),
                        r.dependee.letter().into(),
                        r.nfr.to_string(),
                        r.provenance.as_str().into(),
                        r.rationale.clone(),
                    ]
                }),
            );
        }
        Payload::Diff(d) => {
            for (title, triples) in [
                ("Matched", &d.matched),
                ("Missing from derived", &d.missing_from_derived),
                ("Extra in derived", &d.extra_in_derived),
            ] {
                let _ = writeln!(out, "\n## {title}\n");
                if triples.is_empty() {
                    out.push_str("none\n");
                } else {
                    table(&mut out, &["depender", "dependee", "NFR"], triple_rows(triples));
                }
            }
        }
        Payload::Graph(g) => {
            out.push_str("\n## Degrees\n\n");
            table(
                &mut out,
                &["node", "in", "out"],
                g.degrees
                    .iter()
                    .map(|d| vec![d.node.clone(), d.in_degree.to_string(), d.out_degree.to_string()]),
            );
            let _ = writeln!(
                out,
                "\n{} nodes, {} dependency edges, {} ownership edges",
                g.node_count, g.dependency_edges, g.ownership_edges
            );
        }
        Payload::Simulate(s) => {
            for (i, t) in s.scenarios.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "\n## Scenario {}\n\nissuer {}, owner {}, verifier {}: access {}\n",
                    i + 1,
                    t.issuer,
                    t.owner,
                    t.verifier,
                    t.outcome.as_str()
                );
                table(
                    &mut out,
                    &["seq", "event", "actor"],
                    t.events
                        .iter()
                        .map(|e| vec![e.seq.to_string(), e.kind.to_string(), e.actor.clone()]),
                );
            }
        }
        Payload::Stats(s) => {
            out.push_str("\n## Primary responsibilities\n\n");
            table(
                &mut out,
                &["actor", "computed", "claimed"],
                ActorKind::PRIMARY.into_iter().map(|a| {
                    vec![
                        a.letter().to_string(),
                        s.computed.get(&a).copied().unwrap_or_default().to_string(),
                        s.claimed.get(&a).copied().unwrap_or_default().to_string(),
                    ]
                }),
            );
            out.push_str("\n## Discrepancies\n\n");
            if s.discrepancies.is_empty() {
                out.push_str("none\n");
            }
            for d in &s.discrepancies {
                let _ = writeln!(out, "- {}", d.message);
            }
            out.push_str("\n## Constraints\n\n");
            for n in &s.constraints {
                let _ = writeln!(out, "- {} {}", n.nfr, n.name);
            }
        }
    }
    out
}

fn paint(text: &str, code: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

/// Terminal rendering: one line per finding followed by a short summary.
pub fn emit_human(report: &Report, color: bool) -> String {
    let mut out = String::new();
    for f in &report.findings {
        let code = match f.severity {
            Severity::Error => "1;31",
            Severity::Warning => "1;33",
            Severity::Info => "1;34",
        };
        let _ = write!(out, "{}[{}] {}: {}", paint(f.severity.as_str(), code, color), f.rule, f.subject, f.message);
        if let Some(span) = f.span {
            let _ = write!(out, " (at {span})");
        }
        out.push('\n');
    }
    let count = |s: Severity| report.findings.iter().filter(|f| f.severity == s).count();

    match &report.payload {
        Payload::Stats(s) => {
            for a in ActorKind::PRIMARY {
                let _ = writeln!(
                    out,
                    "{:<10} computed {:>2}  claimed {:>2}",
                    a.title(),
                    s.computed.get(&a).copied().unwrap_or_default(),
                    s.claimed.get(&a).copied().unwrap_or_default()
                );
            }
        }
        Payload::Coverage(c) => {
            let gaps: Vec<String> = c.uncovered.iter().map(|n| format!("{} {}", n.nfr, n.name)).collect();
            let _ = writeln!(out, "{} of 24 NFRs covered ({} scope)", c.covered.len(), scope_label(c.scope));
            if !gaps.is_empty() {
                let _ = writeln!(out, "uncovered: {}", gaps.join(", "));
            }
        }
        Payload::Deps(d) => {
            for r in &d.dependencies {
                let _ = writeln!(out, "{}  {}", r.triple(), r.rationale);
            }
        }
        Payload::Diff(d) => {
            let _ = writeln!(
                out,
                "{} matched, {} missing from derived, {} extra in derived",
                d.matched.len(),
                d.missing_from_derived.len(),
                d.extra_in_derived.len()
            );
        }
        Payload::Simulate(s) => {
            for t in &s.scenarios {
                let _ = writeln!(
                    out,
                    "{} -> {} -> {}: access {}",
                    t.issuer,
                    t.owner,
                    t.verifier,
                    t.outcome.as_str()
                );
            }
        }
        Payload::Validate(Some(v)) => {
            let _ = writeln!(out, "model {:?}: {} actors, {} wallets, {} claims", v.model, v.actors, v.wallets, v.claims);
        }
        Payload::Validate(None) | Payload::Graph(_) | Payload::Empty => {}
    }
    let _ = writeln!(
        out,
        "{} error(s), {} warning(s), {} info",
        count(Severity::Error),
        count(Severity::Warning),
        count(Severity::Info)
    );
    out
}
