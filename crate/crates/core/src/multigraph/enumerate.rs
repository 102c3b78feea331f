//! Exhaustive enumeration of small admissible multigraphs.

use std::collections::BTreeMap;

use super::{isomorphic, Multigraph};
use crate::error::{Error, Result};

pub const MAX_ENUM_VERTICES: usize = 5;
pub const MAX_ENUM_EDGES: usize = 10;

/// All connected multigraphs with minimum degree at least three, at most
/// `max_vertices` vertices and at most `max_edges` edges, one per
/// isomorphism class.
///
/// Output is ordered by vertex count, then edge count, then generation
/// order, so it is stable across runs.
pub fn enumerate_multigraphs(max_vertices: usize, max_edges: usize) -> Result<Vec<Multigraph>> {
    if max_vertices > MAX_ENUM_VERTICES || max_edges > MAX_ENUM_EDGES {
        return Err(Error::Bound(format!(
            "enumeration bounds ({max_vertices}, {max_edges}) exceed \
             ({MAX_ENUM_VERTICES}, {MAX_ENUM_EDGES})"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        // Every degree is at least 3, so 2|E| >= 3|V|.
        let min_edges = (3 * n).div_ceil(2);
        for m in min_edges..=max_edges {
            out.extend(classes_with(n, m));
        }
    }
    Ok(out)
}

fn classes_with(n: usize, m: usize) -> Vec<Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut mult = vec![0usize; pairs.len()];
    let mut candidates = Vec::new();
    fill(&pairs, &mut mult, 0, m, n, &mut candidates);

    // Bucket by a cheap invariant, then dedup with the exact oracle.
    let mut buckets: BTreeMap<Vec<usize>, Vec<Multigraph>> = BTreeMap::new();
    let mut reps = Vec::new();
    for g in candidates {
        let key = invariant_key(&g);
        let bucket = buckets.entry(key).or_default();
        let duplicate = bucket
            .iter()
            .any(|h| isomorphic(&g, h).expect("within size guard").is_some());
        if !duplicate {
            bucket.push(g.clone());
            reps.push(g);
        }
    }
    reps
}

fn fill(
    pairs: &[(usize, usize)],
    mult: &mut [usize],
    pos: usize,
    remaining: usize,
    n: usize,
    out: &mut Vec<Multigraph>,
) {
    if pos == pairs.len() {
        if remaining == 0 {
            if let Some(g) = accept(pairs, mult, n) {
                out.push(g);
            }
        }
        return;
    }
    for k in 0..=remaining {
        mult[pos] = k;
        fill(pairs, mult, pos + 1, remaining - k, n, out);
    }
    mult[pos] = 0;
}

fn accept(pairs: &[(usize, usize)], mult: &[usize], n: usize) -> Option<Multigraph> {
    let mut deg = vec![0usize; n];
    for (&(a, b), &k) in pairs.iter().zip(mult) {
        deg[a] += k;
        deg[b] += k;
    }
    // Every class has a representative with non-increasing degrees.
    if deg.iter().any(|&d| d < 3) || deg.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .zip(mult)
        .flat_map(|(&p, &k)| std::iter::repeat_n(p, k))
        .collect();
    let g = Multigraph::from_edge_list(n, &edges).ok()?;
    g.is_connected().then_some(g)
}

fn invariant_key(g: &Multigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut per_vertex: Vec<(usize, usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut row: Vec<usize> = (0..n)
                .filter(|&w| w != v)
                .map(|w| g.multiplicity(v, w))
                .collect();
            row.sort_unstable();
            (g.degree(v), g.loop_count(v), row)
        })
        .collect();
    per_vertex.sort();
    per_vertex
        .into_iter()
        .flat_map(|(d, l, row)| [d, l].into_iter().chain(row))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn single_vertex_two_edges_is_the_rose() {
        let list = enumerate_multigraphs(1, 2).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].loop_count(0), 2);
    }

    #[test]
    fn theta_is_found() {
        let list = enumerate_multigraphs(2, 3).unwrap();
        let theta = corpus::theta();
        assert!(list
            .iter()
            .any(|g| isomorphic(g, &theta).unwrap().is_some()));
    }

    #[test]
    fn outputs_are_admissible_and_pairwise_distinct() {
        let list = enumerate_multigraphs(3, 6).unwrap();
        assert!(list.iter().all(Multigraph::is_admissible));
        for (i, g) in list.iter().enumerate() {
            for h in &list[i + 1..] {
                assert!(isomorphic(g, h).unwrap().is_none());
            }
        }
    }

    #[test]
    fn known_counts() {
        // Roses with 2 and 3 loops, then theta and dumbbell.
        let list = enumerate_multigraphs(2, 3).unwrap();
        assert_eq!(list.len(), 4);
        // One vertex: roses with 2..=4 loops.
        let one_vertex = enumerate_multigraphs(1, 4).unwrap();
        assert_eq!(one_vertex.len(), 3);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(enumerate_multigraphs(6, 3), Err(Error::Bound(_))));
        assert!(matches!(enumerate_multigraphs(2, 11), Err(Error::Bound(_))));
    }
}
