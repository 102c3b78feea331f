//! Small named graphs used throughout the tests, the book and the CLI.

use crate::multigraph::Multigraph;

/// Two vertices joined by three parallel edges.
pub fn theta() -> Multigraph {
    Multigraph::from_edge_list(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
}

/// Two vertices, each carrying one loop, joined by a bridge.
pub fn dumbbell() -> Multigraph {
    Multigraph::from_edge_list(2, &[(0, 0), (0, 1), (1, 1)]).unwrap()
}

/// The complete graph on four vertices.
pub fn k4() -> Multigraph {
    Multigraph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// One vertex with `loops` loops.
pub fn rose(loops: usize) -> Multigraph {
    Multigraph::from_edge_list(1, &vec![(0, 0); loops]).unwrap()
}

/// The default verification corpus: theta, dumbbell, K4 and the roses with
/// two and three petals.
pub fn standard() -> Vec<(&'static str, Multigraph)> {
    vec![
        ("theta", theta()),
        ("dumbbell", dumbbell()),
        ("k4", k4()),
        ("rose2", rose(2)),
        ("rose3", rose(3)),
    ]
}
