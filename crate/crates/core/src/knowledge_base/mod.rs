//! Typed, immutable knowledge base of DI/SSI non-functional requirements:
//! the NFR catalog, the responsibility matrix, the ownership map, actor
//! dependency relations and design-pattern mappings.

mod builtin;
mod extension;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use builtin::builtin_kb;
pub use extension::{load_extension, ExtensionError, KbDelta};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("`{0}` is not an NFR key (expected NFR1..NFR24)")]
    InvalidNfrKey(String),
    #[error("unknown actor `{0}`")]
    UnknownActor(String),
    #[error("the responsibility matrix has no column for {0}")]
    NotAMatrixColumn(ActorKind),
    #[error("an actor cannot depend on itself ({0} on {0} for {1})")]
    SelfDependency(ActorKind, NfrKey),
    #[error("dependency {triple} collides with an existing relation with a different rationale (existing: {existing:?}, incoming: {incoming:?})")]
    Collision {
        triple: Triple,
        existing: String,
        incoming: String,
    },
}

/// Key of one of the 24 catalog requirements, `NFR1` through `NFR24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NfrKey(u8);

impl NfrKey {
    pub const COUNT: usize = 24;

    pub fn new(ordinal: u32) -> Result<Self, KbError> {
        if (1..=Self::COUNT as u32).contains(&ordinal) {
            Ok(NfrKey(ordinal as u8))
        } else {
            Err(KbError::InvalidNfrKey(format!("NFR{ordinal}")))
        }
    }

    pub(crate) const fn of(ordinal: u8) -> Self {
        assert!(ordinal >= 1 && ordinal as usize <= Self::COUNT);
        NfrKey(ordinal)
    }

    pub fn ordinal(self) -> u32 {
        self.0 as u32
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn all() -> impl Iterator<Item = NfrKey> + Clone {
        (1..=Self::COUNT as u8).map(NfrKey)
    }
}

impl fmt::Display for NfrKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NFR{}", self.0)
    }
}

impl FromStr for NfrKey {
    type Err = KbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || KbError::InvalidNfrKey(s.to_string());
        let digits = s.strip_prefix("NFR").ok_or_else(invalid)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
            return Err(invalid());
        }
        let n: u32 = digits.parse().map_err(|_| invalid())?;
        NfrKey::new(n).map_err(|_| invalid())
    }
}

impl Serialize for NfrKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NfrKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NfrEntry {
    pub key: NfrKey,
    pub name: String,
    pub description: String,
}

/// The five DI/SSI actors. Declaration order is the canonical order
/// (o, i, v, w, s) used for sorting and output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActorKind {
    DataOwner,
    Issuer,
    Verifier,
    Wallet,
    GlobalSystem,
}

impl ActorKind {
    pub const ALL: [ActorKind; 5] = [
        ActorKind::DataOwner,
        ActorKind::Issuer,
        ActorKind::Verifier,
        ActorKind::Wallet,
        ActorKind::GlobalSystem,
    ];

    /// Actors with a column in the responsibility matrix.
    pub const PRIMARY: [ActorKind; 3] = [ActorKind::DataOwner, ActorKind::Issuer, ActorKind::Verifier];

    pub fn letter(self) -> &'static str {
        match self {
            ActorKind::DataOwner => "o",
            ActorKind::Issuer => "i",
            ActorKind::Verifier => "v",
            ActorKind::Wallet => "w",
            ActorKind::GlobalSystem => "s",
        }
    }

    /// Long form used in files and the DSL.
    pub fn name(self) -> &'static str {
        match self {
            ActorKind::DataOwner => "owner",
            ActorKind::Issuer => "issuer",
            ActorKind::Verifier => "verifier",
            ActorKind::Wallet => "wallet",
            ActorKind::GlobalSystem => "system",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ActorKind::DataOwner => "data owner",
            ActorKind::Issuer => "issuer",
            ActorKind::Verifier => "verifier",
            ActorKind::Wallet => "wallet",
            ActorKind::GlobalSystem => "global system",
        }
    }

    pub fn is_primary(self) -> bool {
        matches!(self, ActorKind::DataOwner | ActorKind::Issuer | ActorKind::Verifier)
    }

    fn column(self) -> Result<usize, KbError> {
        match self {
            ActorKind::DataOwner => Ok(0),
            ActorKind::Issuer => Ok(1),
            ActorKind::Verifier => Ok(2),
            other => Err(KbError::NotAMatrixColumn(other)),
        }
    }
}

impl fmt::Display for ActorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

impl FromStr for ActorKind {
    type Err = KbError;

    /// Accepts the long forms and the single-letter aliases.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ActorKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.letter() == s)
            .ok_or_else(|| KbError::UnknownActor(s.to_string()))
    }
}

impl Serialize for ActorKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.letter())
    }
}

impl<'de> Deserialize<'de> for ActorKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponsibilityLevel {
    /// Performs the requirement directly and guarantees its fulfillment.
    Primary,
    /// Facilitates another actor's fulfillment.
    Secondary,
    /// Benefits from or relies on others' fulfillment.
    Tertiary,
    /// No responsibility (a `-` cell).
    #[serde(rename = "none")]
    NoneLevel,
}

impl fmt::Display for ResponsibilityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResponsibilityLevel::Primary => "Primary",
            ResponsibilityLevel::Secondary => "Secondary",
            ResponsibilityLevel::Tertiary => "Tertiary",
            ResponsibilityLevel::NoneLevel => "-",
        })
    }
}

/// Total mapping of (NFR, primary actor) to a responsibility level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponsibilityMatrix {
    // rows indexed by NFR ordinal - 1, columns o, i, v
    cells: [[ResponsibilityLevel; 3]; NfrKey::COUNT],
}

impl ResponsibilityMatrix {
    pub(crate) fn from_rows(cells: [[ResponsibilityLevel; 3]; NfrKey::COUNT]) -> Self {
        Self { cells }
    }

    pub fn get(&self, nfr: NfrKey, actor: ActorKind) -> Result<ResponsibilityLevel, KbError> {
        Ok(self.cells[nfr.index()][actor.column()?])
    }

    /// Primary actors holding `level` on `nfr`, in canonical order.
    pub fn actors_at(&self, nfr: NfrKey, level: ResponsibilityLevel) -> Vec<ActorKind> {
        ActorKind::PRIMARY
            .into_iter()
            .filter(|a| self.cells[nfr.index()][a.column().unwrap()] == level)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnershipMap {
    owners: BTreeMap<NfrKey, BTreeSet<ActorKind>>,
}

impl OwnershipMap {
    pub fn new(owners: BTreeMap<NfrKey, BTreeSet<ActorKind>>) -> Self {
        Self { owners }
    }

    pub fn empty() -> Self {
        Self::new(BTreeMap::new())
    }

    /// Owners of `nfr`; empty when the map has no entry.
    pub fn owners(&self, nfr: NfrKey) -> BTreeSet<ActorKind> {
        self.owners.get(&nfr).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NfrKey, &BTreeSet<ActorKind>)> {
        self.owners.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    #[serde(rename = "builtin")]
    BuiltIn,
    Extension,
    Derived,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::BuiltIn => "builtin",
            Provenance::Extension => "extension",
            Provenance::Derived => "derived",
        }
    }
}

/// Identity of a dependency relation: `depends(depender, dependee, nfr)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub depender: ActorKind,
    pub dependee: ActorKind,
    pub nfr: NfrKey,
}

impl Triple {
    pub fn new(depender: ActorKind, dependee: ActorKind, nfr: NfrKey) -> Self {
        Self {
            depender,
            dependee,
            nfr,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depends({}, {}, {})",
            self.depender.letter(),
            self.dependee.letter(),
            self.nfr
        )
    }
}

/// Actor `depender` relies on actor `dependee` to fulfill `nfr`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DependencyRelation {
    pub depender: ActorKind,
    pub dependee: ActorKind,
    pub nfr: NfrKey,
    pub rationale: String,
    pub provenance: Provenance,
}

impl DependencyRelation {
    pub fn new(
        depender: ActorKind,
        dependee: ActorKind,
        nfr: NfrKey,
        rationale: impl Into<String>,
        provenance: Provenance,
    ) -> Result<Self, KbError> {
        if depender == dependee {
            return Err(KbError::SelfDependency(depender, nfr));
        }
        Ok(Self {
            depender,
            dependee,
            nfr,
            rationale: rationale.into(),
            provenance,
        })
    }

    pub fn triple(&self) -> Triple {
        Triple::new(self.depender, self.dependee, self.nfr)
    }
}

/// Dependency relations keyed by triple; iteration is in triple order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationSet {
    relations: BTreeMap<Triple, DependencyRelation>,
}

impl RelationSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `relation` unless its triple is already present. Returns
    /// whether it was inserted.
    pub fn insert(&mut self, relation: DependencyRelation) -> bool {
        use std::collections::btree_map::Entry;
        match self.relations.entry(relation.triple()) {
            Entry::Vacant(slot) => {
                slot.insert(relation);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    pub fn get(&self, triple: &Triple) -> Option<&DependencyRelation> {
        self.relations.get(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.relations.contains_key(triple)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DependencyRelation> {
        self.relations.values()
    }

    pub fn triples(&self) -> BTreeSet<Triple> {
        self.relations.keys().copied().collect()
    }

    /// Relations whose NFR is in `nfrs`.
    pub fn restricted_to(&self, nfrs: &BTreeSet<NfrKey>) -> RelationSet {
        self.iter().filter(|r| nfrs.contains(&r.nfr)).cloned().collect()
    }

    pub fn for_nfr(&self, nfr: NfrKey) -> impl Iterator<Item = &DependencyRelation> {
        self.iter().filter(move |r| r.nfr == nfr)
    }
}

impl FromIterator<DependencyRelation> for RelationSet {
    fn from_iter<I: IntoIterator<Item = DependencyRelation>>(iter: I) -> Self {
        let mut set = RelationSet::new();
        for r in iter {
            set.insert(r);
        }
        set
    }
}

impl Serialize for RelationSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternSource {
    /// First cited design-pattern catalog.
    CatalogA,
    /// Second cited design-pattern catalog.
    CatalogB,
}

impl PatternSource {
    pub fn letter(self) -> &'static str {
        match self {
            PatternSource::CatalogA => "A",
            PatternSource::CatalogB => "B",
        }
    }
}

impl FromStr for PatternSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(PatternSource::CatalogA),
            "B" => Ok(PatternSource::CatalogB),
            other => Err(format!("unknown pattern source `{other}` (expected A or B)")),
        }
    }
}

impl fmt::Display for PatternSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl Serialize for PatternSource {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PatternEntry {
    pub name: String,
    pub source: PatternSource,
    pub supported_nfrs: BTreeSet<NfrKey>,
}

impl PatternEntry {
    /// Whether this entry is the pattern `(source, name)`; names compare
    /// case-insensitively.
    pub fn is(&self, source: PatternSource, name: &str) -> bool {
        self.source == source && self.name.eq_ignore_ascii_case(name.trim())
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.source, self.name)
    }
}

/// Immutable aggregate of the catalog, responsibility matrix, ownership map,
/// dependency relations and pattern mappings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    catalog: Vec<NfrEntry>,
    matrix: ResponsibilityMatrix,
    ownership: OwnershipMap,
    dependencies: RelationSet,
    patterns: Vec<PatternEntry>,
    dependency_scope: BTreeSet<NfrKey>,
}

impl KnowledgeBase {
    pub fn catalog(&self) -> &[NfrEntry] {
        &self.catalog
    }

    pub fn entry(&self, nfr: NfrKey) -> &NfrEntry {
        &self.catalog[nfr.index()]
    }

    pub fn matrix(&self) -> &ResponsibilityMatrix {
        &self.matrix
    }

    pub fn ownership(&self) -> &OwnershipMap {
        &self.ownership
    }

    /// The authoritative dependency table (built-in plus extensions).
    pub fn dependencies(&self) -> &RelationSet {
        &self.dependencies
    }

    pub fn patterns(&self) -> &[PatternEntry] {
        &self.patterns
    }

    /// NFRs whose dependency rows are documented by the table, including
    /// NFRs documented as having no dependencies.
    pub fn dependency_scope(&self) -> &BTreeSet<NfrKey> {
        &self.dependency_scope
    }

    pub fn lookup_responsibility(
        &self,
        nfr: NfrKey,
        actor: ActorKind,
    ) -> Result<ResponsibilityLevel, KbError> {
        self.matrix.get(nfr, actor)
    }

    pub fn patterns_supporting(&self, nfr: NfrKey) -> Vec<&PatternEntry> {
        self.patterns
            .iter()
            .filter(|p| p.supported_nfrs.contains(&nfr))
            .collect()
    }

    pub fn find_pattern(&self, source: PatternSource, name: &str) -> Option<&PatternEntry> {
        self.patterns.iter().find(|p| p.is(source, name))
    }

    /// Returns a new knowledge base with the delta's dependencies and
    /// pattern mappings added. The catalog, matrix and ownership map are
    /// never touched.
    pub fn merge(&self, delta: &KbDelta) -> Result<KnowledgeBase, KbError> {
        let mut merged = self.clone();
        for incoming in &delta.dependencies {
            let triple = incoming.triple();
            match merged.dependencies.get(&triple) {
                Some(existing) => {
                    let same = existing.rationale == incoming.rationale
                        || existing.rationale.is_empty()
                        || incoming.rationale.is_empty();
                    if !same {
                        return Err(KbError::Collision {
                            triple,
                            existing: existing.rationale.clone(),
                            incoming: incoming.rationale.clone(),
                        });
                    }
                }
                None => {
                    merged.dependencies.insert(incoming.clone());
                }
            }
            merged.dependency_scope.insert(incoming.nfr);
        }
        for pattern in &delta.patterns {
            match merged
                .patterns
                .iter_mut()
                .find(|p| p.is(pattern.source, &pattern.name))
            {
                Some(existing) => existing
                    .supported_nfrs
                    .extend(pattern.supported_nfrs.iter().copied()),
                None => merged.patterns.push(pattern.clone()),
            }
        }
        Ok(merged)
    }
}

pub fn merge(kb: &KnowledgeBase, delta: &KbDelta) -> Result<KnowledgeBase, KbError> {
    kb.merge(delta)
}

pub fn lookup_responsibility(
    kb: &KnowledgeBase,
    nfr: NfrKey,
    actor: ActorKind,
) -> Result<ResponsibilityLevel, KbError> {
    kb.lookup_responsibility(nfr, actor)
}

pub fn patterns_supporting(kb: &KnowledgeBase, nfr: NfrKey) -> Vec<&PatternEntry> {
    kb.patterns_supporting(nfr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use ResponsibilityLevel::*;

    fn k(n: u32) -> NfrKey {
        NfrKey::new(n).unwrap()
    }

    #[test]
    fn nfr_key_range() {
        assert!(NfrKey::new(0).is_err());
        assert!(NfrKey::new(25).is_err());
        assert_eq!(NfrKey::all().count(), 24);
        assert_eq!("NFR24".parse::<NfrKey>().unwrap(), k(24));
        for bad in ["NFR25", "NFR0", "NFR01", "nfr1", "NFR", "NFR1x", "X1"] {
            assert!(bad.parse::<NfrKey>().is_err(), "{bad}");
        }
    }

    #[test]
    fn actor_names_and_aliases() {
        for kind in ActorKind::ALL {
            assert_eq!(kind.name().parse::<ActorKind>().unwrap(), kind);
            assert_eq!(kind.letter().parse::<ActorKind>().unwrap(), kind);
        }
        assert!("holder".parse::<ActorKind>().is_err());
    }

    #[test]
    fn spec_lookup_examples() {
        let kb = builtin_kb();
        assert_eq!(kb.lookup_responsibility(k(2), ActorKind::Issuer).unwrap(), Primary);
        assert_eq!(kb.lookup_responsibility(k(3), ActorKind::Verifier).unwrap(), NoneLevel);
        assert_eq!(kb.lookup_responsibility(k(24), ActorKind::Verifier).unwrap(), Primary);
        assert_eq!(kb.lookup_responsibility(k(9), ActorKind::DataOwner).unwrap(), Tertiary);
        assert_eq!(kb.lookup_responsibility(k(13), ActorKind::Issuer).unwrap(), NoneLevel);
    }

    #[test]
    fn wallet_and_system_have_no_column() {
        let kb = builtin_kb();
        assert_eq!(
            kb.lookup_responsibility(k(1), ActorKind::Wallet),
            Err(KbError::NotAMatrixColumn(ActorKind::Wallet))
        );
        assert!(kb.lookup_responsibility(k(8), ActorKind::GlobalSystem).is_err());
    }

    #[test]
    fn ownership_examples() {
        let kb = builtin_kb();
        assert_eq!(
            kb.ownership().owners(k(8)),
            BTreeSet::from([ActorKind::GlobalSystem])
        );
        for n in [1, 4, 7, 15] {
            assert_eq!(
                kb.ownership().owners(k(n)),
                BTreeSet::from([ActorKind::DataOwner, ActorKind::Wallet])
            );
        }
        for nfr in NfrKey::all() {
            assert!(!kb.ownership().owners(nfr).is_empty());
        }
    }

    #[test]
    fn builtin_dependencies() {
        let kb = builtin_kb();
        assert_eq!(kb.dependencies().len(), 8);
        let rel = kb
            .dependencies()
            .get(&Triple::new(ActorKind::Verifier, ActorKind::Issuer, k(2)))
            .unwrap();
        assert_eq!(rel.provenance, Provenance::BuiltIn);
        assert_eq!(kb.dependency_scope(), &(1..=5).map(k).collect());
    }

    #[test]
    fn pattern_lookup_examples() {
        let kb = builtin_kb();
        let names = |n| {
            kb.patterns_supporting(k(n))
                .into_iter()
                .map(|p| p.name.as_str())
                .collect::<BTreeSet<_>>()
        };
        assert_eq!(
            names(4),
            BTreeSet::from([
                "Status Registry",
                "DID Registry",
                "Public DIDs",
                "Master and Sub Key Generation",
                "Multiple Registration"
            ])
        );
        assert!(names(3).is_empty());
        assert!(names(5).is_empty());
        let nfr2 = kb.patterns_supporting(k(2));
        assert_eq!(nfr2.len(), 4);
        assert!(nfr2.iter().all(|p| p.source == PatternSource::CatalogA));
        assert!(nfr2.iter().any(|p| p.name == "Verifiable ID"));
        assert_eq!(names(1).len(), 7);
    }

    #[test]
    fn self_dependency_rejected() {
        assert!(DependencyRelation::new(
            ActorKind::Issuer,
            ActorKind::Issuer,
            k(2),
            "",
            Provenance::Extension
        )
        .is_err());
    }

    #[test]
    fn merge_identity_and_growth() {
        let kb = builtin_kb();
        assert_eq!(kb.merge(&KbDelta::default()).unwrap(), kb);

        let delta = load_extension("[dependency]\nnfr = NFR6\ndepender = verifier\ndependee = owner\n").unwrap();
        let merged = kb.merge(&delta).unwrap();
        assert_eq!(merged.dependencies().len(), 9);
        assert!(merged.dependency_scope().contains(&k(6)));
        assert_eq!(merged.catalog(), kb.catalog());
        assert_eq!(merged.matrix(), kb.matrix());
        assert_eq!(merged.ownership(), kb.ownership());
    }

    #[test]
    fn merge_dedups_same_rationale_and_rejects_conflicts() {
        let kb = builtin_kb();
        let existing = kb
            .dependencies()
            .get(&Triple::new(ActorKind::DataOwner, ActorKind::Issuer, k(2)))
            .unwrap()
            .rationale
            .clone();
        let same = format!(
            "[dependency]\nnfr = NFR2\ndepender = o\ndependee = i\nrationale = \"{existing}\"\n"
        );
        let merged = kb.merge(&load_extension(&same).unwrap()).unwrap();
        assert_eq!(merged.dependencies().len(), 8);

        let other = "[dependency]\nnfr = NFR2\ndepender = o\ndependee = i\nrationale = something else\n";
        assert!(matches!(
            kb.merge(&load_extension(other).unwrap()),
            Err(KbError::Collision { .. })
        ));
    }

    #[test]
    fn merge_extends_existing_pattern() {
        let kb = builtin_kb();
        let delta = load_extension("[pattern]\nname = status registry\nsource = A\nnfrs = NFR12\n").unwrap();
        let merged = kb.merge(&delta).unwrap();
        assert_eq!(merged.patterns().len(), kb.patterns().len());
        let p = merged.find_pattern(PatternSource::CatalogA, "Status Registry").unwrap();
        assert!(p.supported_nfrs.contains(&k(12)));
        assert!(p.supported_nfrs.contains(&k(1)));
        // same name in the other catalog is a distinct pattern
        let delta = load_extension("[pattern]\nname = Status Registry\nsource = B\nnfrs = NFR12\n").unwrap();
        assert_eq!(kb.merge(&delta).unwrap().patterns().len(), kb.patterns().len() + 1);
    }

    fn arb_delta() -> impl Strategy<Value = KbDelta> {
        let dep = (0usize..5, 0usize..5, 1u32..=24, "[a-z ]{0,12}").prop_filter_map(
            "no self dependency",
            |(a, b, n, r)| {
                DependencyRelation::new(
                    ActorKind::ALL[a],
                    ActorKind::ALL[b],
                    NfrKey::new(n).unwrap(),
                    r,
                    Provenance::Extension,
                )
                .ok()
            },
        );
        proptest::collection::vec(dep, 0..12).prop_map(|deps| {
            let mut seen = BTreeSet::new();
            KbDelta {
                dependencies: deps.into_iter().filter(|d| seen.insert(d.triple())).collect(),
                patterns: Vec::new(),
            }
        })
    }

    proptest! {
        #[test]
        fn merge_is_monotone(delta in arb_delta()) {
            let kb = builtin_kb();
            if let Ok(merged) = kb.merge(&delta) {
                prop_assert!(merged.dependencies().len() >= kb.dependencies().len());
                for r in kb.dependencies().iter() {
                    prop_assert_eq!(merged.dependencies().get(&r.triple()), Some(r));
                }
            }
        }
    }
}
