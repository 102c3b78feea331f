use graph_qsm::classify::{build_conjugacy, Pairing};
use graph_qsm::corpus;
use graph_qsm::multigraph::Multigraph;
use proptest::prelude::*;

fn rank_two() -> Vec<Multigraph> {
    vec![corpus::theta(), corpus::dumbbell(), corpus::rose(2)]
}

fn rank_three() -> Vec<Multigraph> {
    vec![corpus::k4(), corpus::rose(3)]
}

fn signed_pairing(rank: usize) -> impl Strategy<Value = Pairing> {
    (
        Just((1..=rank as i32).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(any::<bool>(), rank),
    )
        .prop_map(|(p, s)| {
            Pairing::new(
                p.into_iter()
                    .zip(s)
                    .map(|(l, s)| if s { l } else { -l })
                    .collect(),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_signed_pairing_of_rank_two_graphs_is_equivariant(
        a in 0usize..3,
        b in 0usize..3,
        pairing in signed_pairing(2),
    ) {
        let c = build_conjugacy(&rank_two()[a], &rank_two()[b], &pairing, 4).unwrap();
        prop_assert!(c.report.passed(), "{:?}", c.report);
    }

    #[test]
    fn every_signed_pairing_of_rank_three_graphs_is_equivariant(
        a in 0usize..2,
        b in 0usize..2,
        pairing in signed_pairing(3),
    ) {
        let c = build_conjugacy(&rank_three()[a], &rank_three()[b], &pairing, 3).unwrap();
        prop_assert!(c.report.passed(), "{:?}", c.report);
    }
}

#[test]
fn inverse_map_undoes_the_map() {
    let c = build_conjugacy(
        &corpus::k4(),
        &corpus::rose(3),
        &Pairing::new(vec![3, -1, 2]).unwrap(),
        1,
    )
    .unwrap();
    let inv = c.map.inverse();
    for cyl in c.map.source().partition(3).unwrap() {
        let mut back = Vec::new();
        for d in c.map.image(&cyl) {
            back.extend(inv.image(&inv.source().cylinder(d).unwrap()));
        }
        assert_eq!(
            c.map.source().canonical_union(back),
            vec![cyl.prefix().to_vec()]
        );
    }
}
