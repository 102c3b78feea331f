use graph_qsm::boundary_measure::{basepoint_rn_check, PSMeasure};
use graph_qsm::corpus;
use graph_qsm::covering_tree::CoveringTree;
use graph_qsm::nonbacktracking::DirEdge;
use proptest::prelude::*;

fn path(tree: &CoveringTree, choices: &[usize]) -> Vec<DirEdge> {
    let mut p: Vec<DirEdge> = Vec::new();
    for &k in choices {
        let cands = match p.last() {
            None => tree.edges().outgoing(tree.base()),
            Some(&d) => tree.edges().successors(d),
        };
        p.push(cands[k % cands.len()]);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn shifted_measures_are_probability_measures(
        graph in 0usize..5,
        base in prop::collection::vec(0usize..16, 0..4),
        k in 1usize..5,
    ) {
        let g = corpus::standard().swap_remove(graph).1;
        let tree = CoveringTree::new(&g).unwrap();
        let mu = PSMeasure::new(&tree).unwrap();
        let x = tree.vertex(path(&tree, &base)).unwrap();
        let shifted = PSMeasure::at(&tree, x, mu.perron().clone());
        prop_assert!((shifted.partition_mass(k).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn base_change_is_a_busemann_density(
        graph in 0usize..5,
        base in prop::collection::vec(0usize..16, 1..4),
    ) {
        let g = corpus::standard().swap_remove(graph).1;
        let tree = CoveringTree::new(&g).unwrap();
        let x = tree.vertex(path(&tree, &base)).unwrap();
        prop_assert!(basepoint_rn_check(&tree, &x, base.len() + 2).unwrap() <= 1e-12);
    }

    #[test]
    fn children_masses_add_up(
        graph in 0usize..5,
        prefix in prop::collection::vec(0usize..16, 1..6),
    ) {
        let g = corpus::standard().swap_remove(graph).1;
        let tree = CoveringTree::new(&g).unwrap();
        let mu = PSMeasure::new(&tree).unwrap();
        let c = tree.cylinder(path(&tree, &prefix)).unwrap();
        let total: f64 = tree.children(&c).iter().map(|d| mu.measure(d)).sum();
        prop_assert!((total - mu.measure(&c)).abs() <= 1e-15);
    }
}
