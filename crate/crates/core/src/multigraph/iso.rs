//! Brute-force multigraph isomorphism with degree-class pruning.
//!
//! This is the ground-truth oracle used to check that invariants separate
//! (or fail to separate) graphs. It is exhaustive, so it is guarded by a
//! vertex-count bound.

use serde::Serialize;

use super::Multigraph;
use crate::error::{Error, Result};

pub const DEFAULT_ISO_BOUND: usize = 10;

/// A vertex bijection plus the induced matching of edges.
///
/// `vertex_map[i]` is the image of vertex `i` of the first graph, and
/// `edge_map[k]` the image of its edge `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Searches for an isomorphism with the default size guard.
pub fn isomorphic(g: &Multigraph, h: &Multigraph) -> Result<Option<Isomorphism>> {
    isomorphic_with_bound(g, h, DEFAULT_ISO_BOUND)
}

pub fn isomorphic_with_bound(
    g: &Multigraph,
    h: &Multigraph,
    max_vertices: usize,
) -> Result<Option<Isomorphism>> {
    for graph in [g, h] {
        if graph.vertex_count() > max_vertices {
            return Err(Error::Bound(format!(
                "isomorphism search on {} vertices exceeds the bound {max_vertices}",
                graph.vertex_count()
            )));
        }
    }
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let n = g.vertex_count();
    let mg = multiplicity_matrix(g);
    let mh = multiplicity_matrix(h);
    let dg = g.degrees();
    let dh = h.degrees();
    let class = |deg: &[usize], m: &[Vec<usize>], v: usize| (deg[v], m[v][v]);

    let mut sig_g: Vec<_> = (0..n).map(|v| class(&dg, &mg, v)).collect();
    let mut sig_h: Vec<_> = (0..n).map(|v| class(&dh, &mh, v)).collect();
    sig_g.sort_unstable();
    sig_h.sort_unstable();
    if sig_g != sig_h {
        return Ok(None);
    }

    // Assign high-degree, well-connected vertices first so that
    // multiplicity checks prune early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(dg[v]), v));
    let order = connected_order(&mg, order);

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let search = Search {
        order: &order,
        mg: &mg,
        mh: &mh,
        class_g: (0..n).map(|v| class(&dg, &mg, v)).collect(),
        class_h: (0..n).map(|v| class(&dh, &mh, v)).collect(),
    };
    if !search.extend(0, &mut map, &mut used) {
        return Ok(None);
    }

    // Match edges class by class, in file order on both sides.
    let mut buckets: std::collections::HashMap<(usize, usize), Vec<usize>> =
        std::collections::HashMap::new();
    for (k, e) in h.edges().iter().enumerate() {
        buckets.entry(key(e.ends)).or_default().push(k);
    }
    for list in buckets.values_mut() {
        list.reverse();
    }
    let edge_map = g
        .edges()
        .iter()
        .map(|e| {
            buckets
                .get_mut(&key((map[e.ends.0], map[e.ends.1])))
                .and_then(Vec::pop)
                .expect("vertex bijection preserves multiplicities")
        })
        .collect();
    Ok(Some(Isomorphism {
        vertex_map: map,
        edge_map,
    }))
}

fn key((a, b): (usize, usize)) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn multiplicity_matrix(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edges() {
        let (a, b) = e.ends;
        m[a][b] += 1;
        if a != b {
            m[b][a] += 1;
        }
    }
    m
}

/// Reorders so that each vertex (after the first) is adjacent to an earlier
/// one whenever possible, keeping the degree-sorted order as tie-break.
fn connected_order(m: &[Vec<usize>], seed: Vec<usize>) -> Vec<usize> {
    let n = seed.len();
    let mut out = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while out.len() < n {
        let next = seed
            .iter()
            .copied()
            .filter(|&v| !placed[v])
            .find(|&v| out.iter().any(|&u: &usize| m[u][v] > 0))
            .or_else(|| seed.iter().copied().find(|&v| !placed[v]))
            .unwrap();
        placed[next] = true;
        out.push(next);
    }
    out
}

struct Search<'a> {
    order: &'a [usize],
    mg: &'a [Vec<usize>],
    mh: &'a [Vec<usize>],
    class_g: Vec<(usize, usize)>,
    class_h: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.order.len() {
            if used[w] || self.class_g[v] != self.class_h[w] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.mg[u][v] == self.mh[map[u]][w]);
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.extend(depth + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
}
