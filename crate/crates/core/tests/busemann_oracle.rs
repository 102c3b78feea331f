use graph_qsm::corpus;
use graph_qsm::covering_tree::{CoveringTree, TreeVertex};
use graph_qsm::nonbacktracking::DirEdge;
use proptest::prelude::*;

const RAY_DEPTH: usize = 20;

/// Reduced path from `choices`, each taken modulo the available successors.
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

/// Length of the free reduction of `a⁻¹ b`.
fn distance(tree: &CoveringTree, a: &[DirEdge], b: &[DirEdge]) -> usize {
    let mut stack: Vec<DirEdge> = a.iter().rev().map(|&d| tree.edges().reverse(d)).collect();
    for &d in b {
        if stack.last() == Some(&tree.edges().reverse(d)) {
            stack.pop();
        } else {
            stack.push(d);
        }
    }
    stack.len()
}

fn choices(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..16, 0..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn busemann_equals_distance_difference_along_ray(
        graph in 0usize..5,
        a in choices(8),
        b in choices(8),
        ray in prop::collection::vec(0usize..16, RAY_DEPTH),
    ) {
        let g = corpus::standard().swap_remove(graph).1;
        let tree = CoveringTree::new(&g).unwrap();
        let (pa, pb, pr) = (path(&tree, &a), path(&tree, &b), path(&tree, &ray));
        let c = tree.cylinder(pr.clone()).unwrap();
        let x1 = tree.vertex(pa.clone()).unwrap();
        let x2 = tree.vertex(pb.clone()).unwrap();
        let expected = distance(&tree, &pa, &pr) as i64 - distance(&tree, &pb, &pr) as i64;
        prop_assert_eq!(tree.busemann(&x1, &x2, &c).unwrap(), expected);
        prop_assert_eq!(
            CoveringTree::tree_distance(&x1, &x2),
            distance(&tree, &pa, &pb)
        );
    }

    #[test]
    fn deck_transformations_are_isometries(
        graph in 0usize..5,
        letters in prop::collection::vec(1i32..=3, 0..5),
        signs in prop::collection::vec(any::<bool>(), 5),
        a in choices(6),
        b in choices(6),
    ) {
        let g = corpus::standard().swap_remove(graph).1;
        let tree = CoveringTree::new(&g).unwrap();
        let rank = tree.rank() as i32;
        let word: Vec<i32> = letters
            .iter()
            .zip(&signs)
            .map(|(&l, &s)| {
                let l = (l - 1) % rank + 1;
                if s { l } else { -l }
            })
            .collect();
        let w = tree.word(&word).unwrap();
        let x: TreeVertex = tree.vertex(path(&tree, &a)).unwrap();
        let y: TreeVertex = tree.vertex(path(&tree, &b)).unwrap();
        prop_assert_eq!(
            CoveringTree::tree_distance(&tree.deck_apply(&w, &x), &tree.deck_apply(&w, &y)),
            CoveringTree::tree_distance(&x, &y)
        );
        let t = tree.translation_length(&w);
        prop_assert_eq!(t.am == 0, w.is_identity());
    }
}
