//! Static checks over the knowledge base and resolved system models.

mod claims;
mod coverage;
mod dependencies;
mod stats;

pub use claims::{check_claims, check_claims_with};
pub use coverage::{coverage, CoverageReport, CoverageScope, CoverageSource};
pub use dependencies::{derive_dependencies, derive_in_scope, diff_dependencies, DependencyDiff};
pub use stats::{classify_constraints, responsibility_stats, Discrepancy, ResponsibilityStats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Whether an issuer's NFR6 (consent) claim is checked. Issuer-side
    /// consent usually happens outside the identity system.
    pub issuer_consent_in_scope: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            issuer_consent_in_scope: true,
        }
    }
}
