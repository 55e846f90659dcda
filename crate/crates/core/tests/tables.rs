use std::collections::BTreeSet;

use ssiarch_core::analysis::{classify_constraints, responsibility_stats};
use ssiarch_core::{builtin_kb, ActorKind, NfrKey, ResponsibilityLevel, Triple};

const TABLE3: &str = include_str!("golden/responsibility_matrix.tsv");

fn level(cell: &str) -> ResponsibilityLevel {
    match cell {
        "Primary" => ResponsibilityLevel::Primary,
        "Secondary" => ResponsibilityLevel::Secondary,
        "Tertiary" => ResponsibilityLevel::Tertiary,
        "-" => ResponsibilityLevel::NoneLevel,
        other => panic!("bad cell {other}"),
    }
}

#[test]
fn matrix_and_ownership_match_golden_table() {
    let kb = builtin_kb();
    let mut rows = 0;
    for line in TABLE3.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        let key: NfrKey = cols[0].parse().unwrap();
        assert_eq!(kb.entry(key).name, cols[1]);
        // golden column order is o, v, i
        for (actor, cell) in [ActorKind::DataOwner, ActorKind::Verifier, ActorKind::Issuer].into_iter().zip(&cols[2..5]) {
            assert_eq!(kb.lookup_responsibility(key, actor).unwrap(), level(cell), "{key} {actor}");
        }
        let owners: BTreeSet<ActorKind> = cols[5].split(' ').map(|l| l.parse().unwrap()).collect();
        assert_eq!(kb.ownership().owners(key), owners, "{key}");
        rows += 1;
    }
    assert_eq!(rows, 24);
}

#[test]
fn wallet_and_system_have_no_matrix_column() {
    let kb = builtin_kb();
    for nfr in NfrKey::all() {
        assert!(kb.lookup_responsibility(nfr, ActorKind::Wallet).is_err());
        assert!(kb.lookup_responsibility(nfr, ActorKind::GlobalSystem).is_err());
    }
}

#[test]
fn dependency_table_rows() {
    use ActorKind::*;
    let k = |n| NfrKey::new(n).unwrap();
    let expected: BTreeSet<Triple> = [
        (Verifier, DataOwner, 1),
        (DataOwner, Wallet, 1),
        (DataOwner, Issuer, 2),
        (Verifier, Issuer, 2),
        (Verifier, DataOwner, 4),
        (DataOwner, Wallet, 4),
        (Verifier, Issuer, 5),
        (DataOwner, Issuer, 5),
    ]
    .into_iter()
    .map(|(a, b, n)| Triple::new(a, b, k(n)))
    .collect();
    let kb = builtin_kb();
    assert_eq!(kb.dependencies().triples(), expected);
    assert!(kb.dependencies().iter().all(|r| !r.rationale.is_empty()));
}

#[test]
fn primary_counts_from_golden_table() {
    // count straight from the golden rows, independent of the matrix code
    let mut counts = [0usize; 3];
    for line in TABLE3.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        for (i, cell) in cols[2..5].iter().enumerate() {
            counts[i] += usize::from(*cell == "Primary");
        }
    }
    let s = responsibility_stats(&builtin_kb());
    assert_eq!(counts, [
        s.primary_counts[&ActorKind::DataOwner],
        s.primary_counts[&ActorKind::Verifier],
        s.primary_counts[&ActorKind::Issuer],
    ]);
    assert_eq!(counts, [12, 4, 6]);
}

#[test]
fn constraints_are_the_non_actor_owned_rows() {
    let from_golden: BTreeSet<NfrKey> = TABLE3
        .lines()
        .skip(1)
        .filter_map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            let owners: Vec<&str> = cols[5].split(' ').collect();
            owners.iter().all(|o| *o == "s" || *o == "w").then(|| cols[0].parse().unwrap())
        })
        .collect();
    assert_eq!(classify_constraints(&builtin_kb()), from_golden);
}
