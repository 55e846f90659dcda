use std::collections::BTreeSet;

use ssiarch_core::analysis::{coverage, derive_in_scope, diff_dependencies};
use ssiarch_core::{builtin_kb, load_extension, KbError, NfrKey, Provenance};

const COMPLETE: &str = include_str!("data/complete_coverage.kb");
const EXTRA: &str = include_str!("data/extra_deps.kb");
const COLLIDES: &str = include_str!("data/collides.kb");

fn keys(ns: &[u32]) -> BTreeSet<NfrKey> {
    ns.iter().map(|&n| NfrKey::new(n).unwrap()).collect()
}

#[test]
fn complete_mapping_leaves_the_known_gaps() {
    let kb = builtin_kb().merge(&load_extension(COMPLETE).unwrap()).unwrap();
    let report = coverage(&kb, None);
    assert_eq!(report.uncovered, keys(&[3, 5, 6, 10, 12, 23]));
}

#[test]
fn merge_order_is_irrelevant_for_disjoint_files() {
    let a = load_extension(COMPLETE).unwrap();
    let b = load_extension(EXTRA).unwrap();
    let ab = builtin_kb().merge(&a).unwrap().merge(&b).unwrap();
    let ba = builtin_kb().merge(&b).unwrap().merge(&a).unwrap();
    assert_eq!(ab, ba);
    assert_eq!(ab.dependencies().len(), 10);
    assert!(ab.dependencies().iter().filter(|r| r.provenance == Provenance::Extension).count() == 2);
    assert!(ab.dependency_scope().contains(&NfrKey::new(6).unwrap()));
}

#[test]
fn extension_rows_enter_the_diff_scope() {
    let kb = builtin_kb().merge(&load_extension(EXTRA).unwrap()).unwrap();
    let diff = diff_dependencies(kb.dependencies(), &derive_in_scope(&kb));
    // (i,o,NFR14) is derived by R1; NFR6 has no derived rows
    let missing: Vec<String> = diff.missing_from_derived.iter().map(|r| r.triple().to_string()).collect();
    assert!(missing.iter().any(|t| t.contains("NFR6")));
    assert!(diff.matched.iter().any(|r| r.nfr == NfrKey::new(14).unwrap()));
}

#[test]
fn conflicting_rationale_is_a_collision() {
    let err = builtin_kb().merge(&load_extension(COLLIDES).unwrap()).unwrap_err();
    assert!(matches!(err, KbError::Collision { .. }));
}
