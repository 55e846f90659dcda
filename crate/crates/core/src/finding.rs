//! Diagnostics shared by every analysis in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Position of a construct in DSL source text. Lines and columns are 1-based
/// and counted in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        assert!(line >= 1 && column >= 1, "spans are 1-based");
        Self {
            line,
            column,
            length,
        }
    }

    /// Placeholder used for constructs built in code rather than parsed.
    pub fn synthetic() -> Self {
        Self::new(1, 1, 0)
    }

    /// Whether the span lies within `text`. A zero-length span may sit one
    /// column past the end of a line (end-of-input diagnostics).
    pub fn is_within(&self, text: &str) -> bool {
        let lines: Vec<&str> = text.split('\n').collect();
        let Some(line) = lines.get(self.line - 1) else {
            return false;
        };
        let width = line.chars().count();
        self.column + self.length <= width + 1
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Ordered so that `Error > Warning > Info`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "info" => Ok(Severity::Info),
            "warning" => Ok(Severity::Warning),
            "error" => Ok(Severity::Error),
            other => Err(format!("unknown severity `{other}`")),
        }
    }
}

/// The closed set of rule identifiers findings may carry.
pub mod rules {
    pub const SYNTAX_LEX: &str = "syntax.lex";
    pub const SYNTAX_PARSE: &str = "syntax.parse";

    pub const MODEL_MISSING_ACTOR: &str = "model.missing-actor";
    pub const MODEL_UNRESOLVED_REF: &str = "model.unresolved-ref";
    pub const MODEL_DUPLICATE_ID: &str = "model.duplicate-id";
    pub const MODEL_RESERVED_ID: &str = "model.reserved-id";
    pub const MODEL_UNKNOWN_NFR: &str = "model.unknown-nfr";
    pub const MODEL_DUPLICATE_WALLET: &str = "model.duplicate-wallet";
    pub const MODEL_SELF_DEPENDENCY: &str = "model.self-dependency";
    pub const MODEL_DUPLICATE_DEPENDENCY: &str = "model.duplicate-dependency";
    pub const MODEL_UNKNOWN_PATTERN: &str = "model.unknown-pattern";

    pub const CLAIMS_NO_RESPONSIBILITY: &str = "claims.no-responsibility";
    pub const CLAIMS_SECONDARY: &str = "claims.secondary";
    pub const CLAIMS_TERTIARY: &str = "claims.tertiary";
    pub const CLAIMS_OK: &str = "claims.ok";
    pub const CLAIMS_OWNERSHIP: &str = "claims.ownership";

    pub const COVERAGE_GAP: &str = "coverage.gap";
    pub const DEPS_MISSING: &str = "deps.missing";
    pub const DEPS_EXTRA: &str = "deps.extra";
    pub const STATS_DISCREPANCY: &str = "stats.discrepancy";

    pub const SIM_NFR6_ISSUANCE: &str = "sim.nfr6.issuance";
    pub const SIM_NFR6_PRESENTATION: &str = "sim.nfr6.presentation";
    pub const SIM_NFR14_OVERDISCLOSURE: &str = "sim.nfr14.overdisclosure";
    pub const SIM_NFR24_BYPASS: &str = "sim.nfr24.bypass";
    pub const SIM_NFR19_SIDECHANNEL: &str = "sim.nfr19.sidechannel";

    pub const ALL: &[&str] = &[
        SYNTAX_LEX,
        SYNTAX_PARSE,
        MODEL_MISSING_ACTOR,
        MODEL_UNRESOLVED_REF,
        MODEL_DUPLICATE_ID,
        MODEL_RESERVED_ID,
        MODEL_UNKNOWN_NFR,
        MODEL_DUPLICATE_WALLET,
        MODEL_SELF_DEPENDENCY,
        MODEL_DUPLICATE_DEPENDENCY,
        MODEL_UNKNOWN_PATTERN,
        CLAIMS_NO_RESPONSIBILITY,
        CLAIMS_SECONDARY,
        CLAIMS_TERTIARY,
        CLAIMS_OK,
        CLAIMS_OWNERSHIP,
        COVERAGE_GAP,
        DEPS_MISSING,
        DEPS_EXTRA,
        STATS_DISCREPANCY,
        SIM_NFR6_ISSUANCE,
        SIM_NFR6_PRESENTATION,
        SIM_NFR14_OVERDISCLOSURE,
        SIM_NFR24_BYPASS,
        SIM_NFR19_SIDECHANNEL,
    ];

    pub fn is_known(rule: &str) -> bool {
        ALL.contains(&rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub rule: String,
    pub subject: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub span: Option<SourceSpan>,
}

impl Finding {
    pub fn new(
        severity: Severity,
        rule: &str,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        debug_assert!(rules::is_known(rule), "undocumented rule id {rule}");
        let message = message.into();
        debug_assert!(!message.is_empty());
        Self {
            severity,
            rule: rule.to_string(),
            subject: subject.into(),
            message,
            span: None,
        }
    }

    pub fn error(rule: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, rule, subject, message)
    }

    pub fn warning(rule: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, rule, subject, message)
    }

    pub fn info(rule: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Info, rule, subject, message)
    }

    pub fn with_span(mut self, span: SourceSpan) -> Self {
        self.span = Some(span);
        self
    }

    pub fn is_syntax(&self) -> bool {
        self.rule.starts_with("syntax.")
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}: {}", self.severity, self.rule, self.subject, self.message)?;
        if let Some(span) = self.span {
            write!(f, " (at {span})")?;
        }
        Ok(())
    }
}

/// Sorts findings by severity (most severe first), then rule, then subject.
/// The sort is stable, so ties keep their production order.
pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by(|a, b| {
        b.severity
            .cmp(&a.severity)
            .then_with(|| a.rule.cmp(&b.rule))
            .then_with(|| a.subject.cmp(&b.subject))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn severity_order() {
        assert!(Severity::Error > Severity::Warning);
        assert!(Severity::Warning > Severity::Info);
    }

    #[test]
    fn span_bounds() {
        let text = "ab\ncde";
        assert!(SourceSpan::new(1, 1, 2).is_within(text));
        assert!(SourceSpan::new(1, 3, 0).is_within(text));
        assert!(!SourceSpan::new(1, 3, 1).is_within(text));
        assert!(SourceSpan::new(2, 4, 0).is_within(text));
        assert!(!SourceSpan::new(3, 1, 0).is_within(text));
        assert!(SourceSpan::new(1, 1, 0).is_within(""));
    }

    #[test]
    fn sorting_puts_errors_first() {
        let mut f = vec![
            Finding::info(rules::CLAIMS_OK, "b", "x"),
            Finding::error(rules::CLAIMS_OWNERSHIP, "a", "x"),
            Finding::error(rules::CLAIMS_NO_RESPONSIBILITY, "z", "x"),
            Finding::warning(rules::CLAIMS_SECONDARY, "a", "x"),
        ];
        sort_findings(&mut f);
        let order: Vec<_> = f.iter().map(|f| f.rule.as_str()).collect();
        assert_eq!(
            order,
            [
                rules::CLAIMS_NO_RESPONSIBILITY,
                rules::CLAIMS_OWNERSHIP,
                rules::CLAIMS_SECONDARY,
                rules::CLAIMS_OK
            ]
        );
    }

    #[test]
    fn span_serialization() {
        let f = Finding::error(rules::SYNTAX_PARSE, "x", "bad").with_span(SourceSpan::new(3, 7, 4));
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains(r#""span":{"line":3,"column":7,"length":4}"#));
        let no_span = serde_json::to_string(&Finding::info(rules::CLAIMS_OK, "x", "ok")).unwrap();
        assert!(!no_span.contains("span"));
    }
}
