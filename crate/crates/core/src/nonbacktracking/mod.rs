//! The Bass–Hashimoto (non-backtracking) edge operator of a multigraph, its
//! Perron data, and the reciprocal Ihara zeta function.

mod perron;
mod poly;
mod zeta;

use serde::Serialize;

use crate::error::Result;
use crate::ktheory::IntegerMatrix;
use crate::multigraph::Multigraph;

pub use perron::{perron_root, perron_root_with, PerronData, PerronOptions};
pub use poly::Poly;
pub use zeta::{ihara_zeta_recip, ihara_zeta_vertex_form, zeta_edge_form};

/// Index of a directed edge in a [`DirectedEdgeSet`].
pub type DirEdge = usize;

/// The `2|E|` directed edges of a graph.
///
/// Directed edge `k < |E|` runs along edge `k` from `ends.0` to `ends.1`;
/// directed edge `k + |E|` is its reversal. A loop still yields two distinct
/// directed edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedEdgeSet {
    edge_count: usize,
    origin: Vec<usize>,
    terminus: Vec<usize>,
    #[serde(skip)]
    outgoing: Vec<Vec<DirEdge>>,
    #[serde(skip)]
    successors: Vec<Vec<DirEdge>>,
}

impl DirectedEdgeSet {
    pub fn new(g: &Multigraph) -> Self {
        let n = g.edge_count();
        let mut origin = Vec::with_capacity(2 * n);
        let mut terminus = Vec::with_capacity(2 * n);
        for e in g.edges() {
            origin.push(e.ends.0);
            terminus.push(e.ends.1);
        }
        for e in g.edges() {
            origin.push(e.ends.1);
            terminus.push(e.ends.0);
        }
        let mut outgoing = vec![Vec::new(); g.vertex_count()];
        for (d, &o) in origin.iter().enumerate() {
            outgoing[o].push(d);
        }
        let successors = (0..2 * n)
            .map(|d| {
                outgoing[terminus[d]]
                    .iter()
                    .copied()
                    .filter(|&f| f != (d + n) % (2 * n))
                    .collect()
            })
            .collect();
        DirectedEdgeSet {
            edge_count: n,
            origin,
            terminus,
            outgoing,
            successors,
        }
    }

    pub fn len(&self) -> usize {
        2 * self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    pub fn undirected_count(&self) -> usize {
        self.edge_count
    }

    pub fn reverse(&self, d: DirEdge) -> DirEdge {
        (d + self.edge_count) % (2 * self.edge_count)
    }

    pub fn origin(&self, d: DirEdge) -> usize {
        self.origin[d]
    }

    pub fn terminus(&self, d: DirEdge) -> usize {
        self.terminus[d]
    }

    /// The undirected edge underlying `d`.
    pub fn edge_of(&self, d: DirEdge) -> usize {
        d % self.edge_count
    }

    pub fn is_forward(&self, d: DirEdge) -> bool {
        d < self.edge_count
    }

    /// Directed edges leaving vertex `v`, in index order.
    pub fn outgoing(&self, v: usize) -> &[DirEdge] {
        &self.outgoing[v]
    }

    /// Directed edges that may follow `d` without backtracking.
    pub fn successors(&self, d: DirEdge) -> &[DirEdge] {
        &self.successors[d]
    }
}

/// The `2|E| × 2|E|` matrix with `T(e, f) = 1` iff `f` continues `e`
/// without backtracking.
pub fn bass_hashimoto(g: &Multigraph) -> Result<IntegerMatrix> {
    g.require_admissible()?;
    Ok(bass_hashimoto_unchecked(&DirectedEdgeSet::new(g)))
}

pub(crate) fn bass_hashimoto_unchecked(edges: &DirectedEdgeSet) -> IntegerMatrix {
    let n = edges.len();
    let mut t = IntegerMatrix::zeros(n, n);
    for e in 0..n {
        for &f in edges.successors(e) {
            t[(e, f)] = 1.into();
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::corpus;

    #[test]
    fn reversal_is_a_fixed_point_free_involution() {
        for (_, g) in corpus::standard() {
            let d = DirectedEdgeSet::new(&g);
            for e in 0..d.len() {
                assert_ne!(d.reverse(e), e);
                assert_eq!(d.reverse(d.reverse(e)), e);
                assert_eq!(d.origin(d.reverse(e)), d.terminus(e));
            }
        }
    }

    #[test]
    fn row_sums_are_degree_minus_one() {
        for (_, g) in corpus::standard() {
            let d = DirectedEdgeSet::new(&g);
            let t = bass_hashimoto(&g).unwrap();
            assert_eq!(t.rows(), 2 * g.edge_count());
            for (e, s) in t.row_sums().into_iter().enumerate() {
                assert_eq!(s, BigInt::from(g.degree(d.terminus(e)) - 1));
            }
        }
    }

    #[test]
    fn named_row_sums() {
        let t = bass_hashimoto(&corpus::theta()).unwrap();
        assert_eq!(t.rows(), 6);
        assert!(t.row_sums().iter().all(|s| *s == BigInt::from(2)));
        let t = bass_hashimoto(&corpus::k4()).unwrap();
        assert_eq!(t.rows(), 12);
        assert!(t.row_sums().iter().all(|s| *s == BigInt::from(2)));
        let t = bass_hashimoto(&corpus::rose(2)).unwrap();
        assert_eq!(t.rows(), 4);
        assert!(t.row_sums().iter().all(|s| *s == BigInt::from(3)));
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(bass_hashimoto(&corpus::rose(1)).is_err());
    }
}
