use graph_qsm::classify::fingerprint;
use graph_qsm::corpus;
use graph_qsm::multigraph::{enumerate_multigraphs, isomorphic, Multigraph};
use proptest::prelude::*;

#[test]
fn enumerated_graphs_round_trip_through_json() {
    for g in enumerate_multigraphs(3, 6).unwrap() {
        let back = Multigraph::parse(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}

#[test]
fn malformed_files_are_rejected() {
    for text in [
        "{",
        r#"{"vertices": ["a"], "edges": [{"id": "e", "ends": ["a", "b"]}]}"#,
        r#"{"vertices": ["a", "a"], "edges": []}"#,
        r#"{"vertices": ["a"], "edges": [{"id": "e", "ends": ["a", "a"]}, {"id": "e", "ends": ["a", "a"]}]}"#,
    ] {
        assert!(Multigraph::parse(text).is_err(), "{text}");
    }
}

fn relabeling() -> impl Strategy<Value = (Multigraph, Vec<usize>, Vec<usize>)> {
    (0usize..5).prop_flat_map(|i| {
        let g = corpus::standard().swap_remove(i).1;
        let vertices = Just((0..g.vertex_count()).collect::<Vec<_>>()).prop_shuffle();
        let edges = Just((0..g.edge_count()).collect::<Vec<_>>()).prop_shuffle();
        (Just(g), vertices, edges)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn relabeling_preserves_isomorphism_class_and_fingerprint((g, perm, edge_perm) in relabeling()) {
        let h = g.relabeled(&perm, &edge_perm);
        prop_assert!(isomorphic(&g, &h).unwrap().is_some());
        prop_assert!(fingerprint(&g, 4).unwrap().matches(&fingerprint(&h, 4).unwrap()));
    }
}
