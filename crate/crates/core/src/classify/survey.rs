//! Pairwise comparison of every enumerated graph: Betti-number classes
//! against fingerprint classes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{fingerprint, Fingerprint};
use crate::error::Result;
use crate::ktheory::theorem1_oracle;
use crate::multigraph::{enumerate_multigraphs, isomorphic, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyGraph {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub g: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SurveyRow {
    pub graph_a: String,
    pub graph_b: String,
    #[serde(rename = "g_equal")]
    pub g_equal: bool,
    #[serde(rename = "k0_equal")]
    pub k0_equal: bool,
    #[serde(rename = "zeta_equal")]
    pub zeta_equal: bool,
    #[serde(rename = "spectrum_equal")]
    pub spectrum_equal: bool,
    pub isomorphic: bool,
    pub theorem1: bool,
    #[serde(rename = "fingerprint_equal")]
    pub fingerprint_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub spectrum_length: usize,
    pub graphs: Vec<SurveyGraph>,
    pub rows: Vec<SurveyRow>,
    /// Classes of the equivalence generated by positive oracle verdicts.
    pub theorem1_classes: Vec<Vec<String>>,
    pub betti_classes: BTreeMap<usize, Vec<String>>,
    pub classes_match_betti: bool,
    /// Number of distinct fingerprints inside each Betti class.
    pub fingerprint_classes: BTreeMap<usize, usize>,
    /// Non-isomorphic pairs with equal fingerprints.
    pub collisions: Vec<(String, String)>,
    /// Isomorphic pairs, including relabeled copies, with unequal fingerprints.
    pub invariance_violations: Vec<(String, String)>,
}

impl SurveyReport {
    pub fn passed(&self) -> bool {
        self.classes_match_betti
            && self.collisions.is_empty()
            && self.invariance_violations.is_empty()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Reverses vertex and edge order.
fn reversed(g: &Multigraph) -> Multigraph {
    let n = g.vertex_count();
    let m = g.edge_count();
    let perm: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
    let edge_perm: Vec<usize> = (0..m).map(|i| m - 1 - i).collect();
    g.relabeled(&perm, &edge_perm)
}

pub fn survey(
    max_vertices: usize,
    max_edges: usize,
    spectrum_length: usize,
) -> Result<SurveyReport> {
    let corpus = enumerate_multigraphs(max_vertices, max_edges)?;
    let names: Vec<String> = corpus
        .iter()
        .enumerate()
        .map(|(i, g)| format!("G{i}_v{}e{}", g.vertex_count(), g.edge_count()))
        .collect();
    let prints: Vec<Fingerprint> = corpus
        .par_iter()
        .map(|g| fingerprint(g, spectrum_length))
        .collect::<Result<_>>()?;

    let invariance_violations: Vec<(String, String)> = corpus
        .par_iter()
        .zip(&prints)
        .zip(&names)
        .map(|((g, p), name)| -> Result<Option<(String, String)>> {
            let q = fingerprint(&reversed(g), spectrum_length)?;
            Ok((!p.matches(&q)).then(|| (name.clone(), format!("{name}_relabeled"))))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let pairs: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|i| (i + 1..corpus.len()).map(move |j| (i, j)))
        .collect();
    let rows: Vec<SurveyRow> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<SurveyRow> {
            let d = prints[i].diff(&prints[j]);
            Ok(SurveyRow {
                graph_a: names[i].clone(),
                graph_b: names[j].clone(),
                g_equal: d.g_equal,
                k0_equal: d.k0_equal,
                zeta_equal: d.zeta_equal,
                spectrum_equal: d.spectrum_equal,
                isomorphic: isomorphic(&corpus[i], &corpus[j])?.is_some(),
                theorem1: theorem1_oracle(&corpus[i], &corpus[j])?.verdict,
                fingerprint_equal: d.all_equal(),
            })
        })
        .collect::<Result<_>>()?;

    let mut parent: Vec<usize> = (0..corpus.len()).collect();
    for (&(i, j), row) in pairs.iter().zip(&rows) {
        if row.theorem1 {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..corpus.len() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().push(i);
    }
    let mut by_betti: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in prints.iter().enumerate() {
        by_betti.entry(p.g.get()).or_default().push(i);
    }
    let mut oracle_sets: Vec<Vec<usize>> = classes.into_values().collect();
    let mut betti_sets: Vec<Vec<usize>> = by_betti.values().cloned().collect();
    oracle_sets.sort();
    betti_sets.sort();
    let classes_match_betti = oracle_sets == betti_sets;

    let fingerprint_classes = by_betti
        .iter()
        .map(|(&g, members)| {
            let mut reps: Vec<usize> = Vec::new();
            for &i in members {
                if !reps.iter().any(|&r| prints[r].matches(&prints[i])) {
                    reps.push(i);
                }
            }
            (g, reps.len())
        })
        .collect();
    let collisions = rows
        .iter()
        .filter(|r| r.fingerprint_equal && !r.isomorphic)
        .map(|r| (r.graph_a.clone(), r.graph_b.clone()))
        .collect();
    let label = |set: &[usize]| set.iter().map(|&i| names[i].clone()).collect::<Vec<_>>();

    Ok(SurveyReport {
        max_vertices,
        max_edges,
        spectrum_length,
        graphs: corpus
            .iter()
            .zip(&names)
            .zip(&prints)
            .map(|((g, name), p)| SurveyGraph {
                name: name.clone(),
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                g: p.g.get(),
            })
            .collect(),
        rows,
        theorem1_classes: oracle_sets.iter().map(|s| label(s)).collect(),
        betti_classes: by_betti.iter().map(|(&g, s)| (g, label(s))).collect(),
        classes_match_betti,
        fingerprint_classes,
        collisions,
        invariance_violations,
    })
}
