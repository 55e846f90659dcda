//! Built-in tables: NFR catalog, responsibility matrix, ownership, the
//! documented dependency rows for NFR1-NFR5 and the documented
//! design-pattern rows for NFR1-NFR5.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    ActorKind, DependencyRelation, KnowledgeBase, NfrEntry, NfrKey, OwnershipMap, PatternEntry,
    PatternSource, Provenance, RelationSet, ResponsibilityLevel, ResponsibilityMatrix,
};

const CATALOG: [(&str, &str); NfrKey::COUNT] = [
    ("Accessibility", "User must be able to access and retrieve data"),
    ("Authenticity", "Source of identity data must be trustworthy and provable"),
    ("Autonomy", "User must be able to manage their identity independently"),
    ("Availability", "Identity data must be available at any time"),
    ("Compatibility", "Identity data must be compatible with legacy systems"),
    ("Consent", "User must explicitly consent to the use of their data"),
    ("Control", "User must be able to control access to their identity data"),
    ("Cost", "All components must have minimal costs"),
    ("Decentralization", "All components should not rely on centralized elements"),
    ("Existence", "User identity must have an independent existence without relying on other services"),
    ("Interoperability", "Identity data must be usable across different platforms and services"),
    ("Persistence", "Identity data must remain valid and accessible for as long as necessary"),
    ("Portability", "User must be able to move their identity data"),
    ("Privacy", "User must be able to minimize information required to share"),
    ("Protection", "Identity data must be protected against misuse"),
    ("Recoverability", "User must be able to recover identity data in case of loss and compromise"),
    ("Representation", "Users must be able to create multiple identities"),
    ("Security", "All components must ensure the data is secure"),
    ("Single Source", "User must be the single authoritative source of their identity"),
    ("Standard", "Credentials must adhere to open standards"),
    ("Transparency", "Information about data use must be readily available"),
    ("Usability", "User must be able to use their data efficiently and intuitively"),
    ("User Experience", "Identity management process must be simple, consistent, and user-friendly"),
    ("Verifiability", "Identity data must be verifiable"),
];

// Short aliases keep the matrix readable.
const P: ResponsibilityLevel = ResponsibilityLevel::Primary;
const S: ResponsibilityLevel = ResponsibilityLevel::Secondary;
const T: ResponsibilityLevel = ResponsibilityLevel::Tertiary;
const N: ResponsibilityLevel = ResponsibilityLevel::NoneLevel;

/// Rows in the published column order: data owner, verifier, issuer.
const MATRIX_OVI: [[ResponsibilityLevel; 3]; NfrKey::COUNT] = [
    [P, T, N], // NFR1
    [T, S, P], // NFR2
    [P, N, N], // NFR3
    [P, N, N], // NFR4
    [T, S, P], // NFR5
    [P, P, P], // NFR6
    [P, N, N], // NFR7
    [T, T, T], // NFR8
    [T, T, T], // NFR9
    [P, N, N], // NFR10
    [T, S, P], // NFR11
    [P, N, N], // NFR12
    [T, N, N], // NFR13
    [P, P, S], // NFR14
    [P, N, N], // NFR15
    [P, N, N], // NFR16
    [P, N, N], // NFR17
    [T, T, T], // NFR18
    [P, N, N], // NFR19
    [T, S, P], // NFR20
    [T, P, P], // NFR21
    [T, N, N], // NFR22
    [T, N, N], // NFR23
    [T, P, S], // NFR24
];

const OWNERSHIP: [&str; NfrKey::COUNT] = [
    "o w", "i", "o", "o w", "i", "o", "o w", "s", "s", "o", "i", "o", //
    "w", "o v i", "o w", "w", "o", "s", "o", "i", "i v", "w", "w", "v i",
];

const DEPENDENCIES: [(&str, &str, u8, &str); 8] = [
    ("v", "o", 1, "Verifier relies on the data owner to present accessible credential data."),
    ("o", "w", 1, "The data owner depends on the wallet to provide access to data."),
    ("o", "i", 2, "The data owner relies on the validity of credentials."),
    ("v", "i", 2, "Verifier relies on a valid signature of a credential."),
    ("v", "o", 4, "Verifier depends on the data owner to provide credentials."),
    ("o", "w", 4, "The data owner depends on the wallet for the data to be accessible."),
    ("v", "i", 5, "Verifier relies on the issuer to issue a credential in a compatible format."),
    ("o", "i", 5, "The data owner depends on the issuer for a credential to be usable."),
];

/// NFRs whose dependency rows are documented (NFR3 is documented as having none).
const DEPENDENCY_SCOPE: [u8; 5] = [1, 2, 3, 4, 5];

const PATTERNS: [(PatternSource, &str, &[u8]); 13] = [
    (PatternSource::CatalogA, "Public Institution Registry", &[1]),
    (PatternSource::CatalogA, "Trusted Schemas Registry", &[1]),
    (PatternSource::CatalogA, "Status Registry", &[1, 4]),
    (PatternSource::CatalogA, "DID Registry", &[1, 4]),
    (PatternSource::CatalogA, "Public DIDs", &[1, 4]),
    (PatternSource::CatalogA, "Local (Private) Storage", &[1]),
    (PatternSource::CatalogA, "External (Remote) Cloud Storage", &[1]),
    (PatternSource::CatalogA, "Verifiable ID", &[2]),
    (PatternSource::CatalogA, "Dual Resolution", &[2]),
    (PatternSource::CatalogA, "Qualified Verifiable Credentials", &[2]),
    (PatternSource::CatalogA, "Binding VCs and Qualified Electronic Certificates", &[2]),
    (PatternSource::CatalogB, "Master and Sub Key Generation", &[4]),
    (PatternSource::CatalogB, "Multiple Registration", &[4]),
];

/// The knowledge base populated with every table row available in-source.
pub fn builtin_kb() -> KnowledgeBase {
    let catalog = NfrKey::all()
        .zip(CATALOG)
        .map(|(key, (name, description))| NfrEntry {
            key,
            name: name.to_string(),
            description: description.to_string(),
        })
        .collect();

    let mut cells = [[N; 3]; NfrKey::COUNT];
    for (row, [o, v, i]) in cells.iter_mut().zip(MATRIX_OVI) {
        *row = [o, i, v];
    }

    let owners: BTreeMap<NfrKey, BTreeSet<ActorKind>> = NfrKey::all()
        .zip(OWNERSHIP)
        .map(|(key, letters)| {
            let set = letters
                .split_whitespace()
                .map(|l| l.parse().expect("built-in actor letter"))
                .collect();
            (key, set)
        })
        .collect();

    let dependencies: RelationSet = DEPENDENCIES
        .iter()
        .map(|&(a, b, n, rationale)| {
            DependencyRelation::new(
                a.parse().expect("built-in actor letter"),
                b.parse().expect("built-in actor letter"),
                NfrKey::of(n),
                rationale,
                Provenance::BuiltIn,
            )
            .expect("built-in relation")
        })
        .collect();
    debug_assert_eq!(dependencies.len(), DEPENDENCIES.len());

    let patterns = PATTERNS
        .iter()
        .map(|&(source, name, nfrs)| PatternEntry {
            name: name.to_string(),
            source,
            supported_nfrs: nfrs.iter().map(|&n| NfrKey::of(n)).collect(),
        })
        .collect();

    KnowledgeBase {
        catalog,
        matrix: ResponsibilityMatrix::from_rows(cells),
        ownership: OwnershipMap::new(owners),
        dependencies,
        patterns,
        dependency_scope: DEPENDENCY_SCOPE.iter().map(|&n| NfrKey::of(n)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_complete_and_unique() {
        let kb = builtin_kb();
        assert_eq!(kb.catalog().len(), 24);
        let names: BTreeSet<_> = kb.catalog().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), 24);
        for (entry, key) in kb.catalog().iter().zip(NfrKey::all()) {
            assert_eq!(entry.key, key);
            assert!(!entry.name.is_empty() && !entry.description.is_empty());
        }
        assert_eq!(kb.entry(NfrKey::of(2)).name, "Authenticity");
    }

    #[test]
    fn pattern_identity_is_unique() {
        let kb = builtin_kb();
        let ids: BTreeSet<_> = kb.patterns().iter().map(|p| (p.source, p.name.as_str())).collect();
        assert_eq!(ids.len(), kb.patterns().len());
        assert!(kb.patterns().iter().all(|p| !p.supported_nfrs.is_empty()));
    }
}
