use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssiarch_core::dep_graph::{build_graph, graph_stats, to_dot, to_tsv, Scope};
use ssiarch_core::knowledge_base::OwnershipMap;
use ssiarch_core::{builtin_kb, ActorKind, DependencyRelation, NfrKey, Provenance, RelationSet};

const GOLDEN_DOT: &str = include_str!("golden/builtin.dot");

fn random_set(rng: &mut ChaCha8Rng) -> RelationSet {
    (0..rng.gen_range(0..40))
        .filter_map(|_| {
            let a = ActorKind::ALL[rng.gen_range(0..5)];
            let b = ActorKind::ALL[rng.gen_range(0..5)];
            let n = NfrKey::new(rng.gen_range(1..=24)).unwrap();
            DependencyRelation::new(a, b, n, "", Provenance::Extension).ok()
        })
        .collect()
}

#[test]
fn builtin_dot_matches_golden() {
    let kb = builtin_kb();
    for _ in 0..10 {
        let g = build_graph(kb.dependencies(), kb.ownership(), Scope::KbOnly, None).unwrap();
        assert_eq!(to_dot(&g), GOLDEN_DOT);
    }
}

#[test]
fn degree_conservation_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let kb = builtin_kb();
    for _ in 0..100 {
        let set = random_set(&mut rng);
        let g = build_graph(&set, kb.ownership(), Scope::KbOnly, None).unwrap();
        let s = graph_stats(&g);
        let ins: usize = s.degrees.iter().map(|d| d.in_degree).sum();
        let outs: usize = s.degrees.iter().map(|d| d.out_degree).sum();
        assert_eq!(ins, set.len());
        assert_eq!(outs, set.len());
        assert_eq!(s.dependency_edges, set.len());
        assert!(g.dependency_edges().all(|e| e.from != e.to));
    }
}

#[test]
fn different_edge_sets_render_differently() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let empty = OwnershipMap::empty();
    for _ in 0..100 {
        let a = random_set(&mut rng);
        let b = random_set(&mut rng);
        let ga = build_graph(&a, &empty, Scope::KbOnly, None).unwrap();
        let gb = build_graph(&b, &empty, Scope::KbOnly, None).unwrap();
        assert_eq!(a.triples() == b.triples(), to_dot(&ga) == to_dot(&gb));
        assert_eq!(a.triples() == b.triples(), to_tsv(&ga) == to_tsv(&gb));
    }
}

#[test]
fn tsv_lists_every_edge() {
    let kb = builtin_kb();
    let g = build_graph(kb.dependencies(), kb.ownership(), Scope::KbOnly, None).unwrap();
    let tsv = to_tsv(&g);
    assert_eq!(tsv.lines().count(), g.edges.len());
    assert!(tsv.lines().all(|l| l.split('\t').count() == 4));
    assert!(tsv.contains("v\to\tD\tNFR4\n"));
    assert!(tsv.contains("s\ts\tO\tNFR8\n"));
}
