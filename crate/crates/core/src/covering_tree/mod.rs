//! The universal covering tree of a multigraph, modelled exactly.
//!
//! A vertex of the tree is a reduced path of directed edges starting at the
//! base vertex; the empty path is the base point `x₀`. The fundamental group
//! is free on the non-tree edges of a BFS spanning tree and acts on the tree
//! by concatenating a closed reduced loop and cancelling backtracks. All
//! distances, Busemann values and translation lengths are exact integers.
//!
//! ```
//! use graph_qsm::corpus;
//! use graph_qsm::covering_tree::CoveringTree;
//!
//! let tree = CoveringTree::new(&corpus::rose(2)).unwrap();
//! let a = tree.word(&[1]).unwrap();
//! let x = tree.deck_apply(&a, &tree.root());
//! assert_eq!(CoveringTree::tree_distance(&tree.root(), &x), 1);
//! assert_eq!(tree.translation_length(&a).am, 1);
//! ```

mod boundary;
mod fixed_points;

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::nonbacktracking::{DirEdge, DirectedEdgeSet};

pub use fixed_points::FixedPointReport;

/// Deepest row of the extension-count table.
const COUNT_TABLE_DEPTH: usize = 128;

/// A vertex of the covering tree: a reduced directed-edge path from the base
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TreeVertex {
    path: Vec<DirEdge>,
}

impl TreeVertex {
    pub fn path(&self) -> &[DirEdge] {
        &self.path
    }

    /// Distance from the base point.
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }
}

/// All boundary rays extending a nonempty reduced path from the base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    prefix: Vec<DirEdge>,
}

impl Cylinder {
    pub fn prefix(&self) -> &[DirEdge] {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn last(&self) -> DirEdge {
        *self.prefix.last().expect("cylinders are nonempty")
    }

    /// The cylinder as a tree vertex (its tip).
    pub fn tip(&self) -> TreeVertex {
        TreeVertex {
            path: self.prefix.clone(),
        }
    }

    /// The ancestor cylinder of depth `k`, `1 <= k <= depth`.
    pub fn truncate(&self, k: usize) -> Cylinder {
        assert!(k >= 1 && k <= self.depth());
        Cylinder {
            prefix: self.prefix[..k].to_vec(),
        }
    }

    /// Whether every ray of `other` lies in `self`.
    pub fn contains(&self, other: &Cylinder) -> bool {
        other.prefix.starts_with(&self.prefix)
    }
}

/// One step of a serialized path: an edge index and its traversal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

/// A freely reduced word in the generators `±1..=±g` with its realization as
/// a closed reduced loop at the base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    letters: Vec<i32>,
    realization: Vec<DirEdge>,
}

impl GroupWord {
    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn realization(&self) -> &[DirEdge] {
        &self.realization
    }

    /// Word length in letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Contains no inverse letter.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&l| l > 0)
    }
}

/// The spanning tree and the free generating set it determines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningTreeData {
    pub base: usize,
    /// Undirected edge indices of the tree, in discovery order.
    pub tree_edges: Vec<usize>,
    /// Forward directed edge of each non-tree edge; generator `i` is the
    /// `i-1`-th entry.
    pub generator_edges: Vec<DirEdge>,
    /// Reduced tree path from the base vertex to each vertex.
    pub tree_paths: Vec<Vec<DirEdge>>,
    /// Closed reduced loop at the base vertex realizing each generator.
    pub generators: Vec<Vec<DirEdge>>,
    /// Signed letter carried by each directed edge; 0 on tree edges.
    #[serde(skip)]
    letter_of: Vec<i32>,
}

impl SpanningTreeData {
    pub fn rank(&self) -> usize {
        self.generator_edges.len()
    }

    /// Signed generator letter of a directed edge, or `None` on a tree edge.
    pub fn letter_of(&self, d: DirEdge) -> Option<i32> {
        match self.letter_of[d] {
            0 => None,
            l => Some(l),
        }
    }
}

/// BFS spanning tree in file order; one generator per non-tree edge.
pub fn generators_from_spanning_tree(g: &Multigraph, base: usize) -> Result<SpanningTreeData> {
    g.require_admissible()?;
    if base >= g.vertex_count() {
        return Err(Error::InvalidPath(format!(
            "base vertex {base} out of range"
        )));
    }
    let edges = DirectedEdgeSet::new(g);
    Ok(spanning_tree(g, &edges, base))
}

fn spanning_tree(g: &Multigraph, edges: &DirectedEdgeSet, base: usize) -> SpanningTreeData {
    let n = g.edge_count();
    let mut tree_paths: Vec<Option<Vec<DirEdge>>> = vec![None; g.vertex_count()];
    tree_paths[base] = Some(Vec::new());
    let mut in_tree = vec![false; n];
    let mut tree_edges = Vec::new();
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for (k, e) in g.edges().iter().enumerate() {
            if e.is_loop() || in_tree[k] {
                continue;
            }
            let (d, w) = match e.ends {
                (a, b) if a == v => (k, b),
                (a, b) if b == v => (k + n, a),
                _ => continue,
            };
            if tree_paths[w].is_some() {
                continue;
            }
            let mut p = tree_paths[v].clone().expect("visited");
            p.push(d);
            tree_paths[w] = Some(p);
            in_tree[k] = true;
            tree_edges.push(k);
            queue.push_back(w);
        }
    }
    let tree_paths: Vec<Vec<DirEdge>> = tree_paths
        .into_iter()
        .map(|p| p.expect("admissible graphs are connected"))
        .collect();

    let mut letter_of = vec![0i32; 2 * n];
    let mut generator_edges = Vec::new();
    let mut generators = Vec::new();
    for k in (0..n).filter(|&k| !in_tree[k]) {
        let letter = generator_edges.len() as i32 + 1;
        letter_of[k] = letter;
        letter_of[k + n] = -letter;
        generator_edges.push(k);
        let mut loop_path = tree_paths[edges.origin(k)].clone();
        loop_path.push(k);
        loop_path.extend(inverse_path(edges, &tree_paths[edges.terminus(k)]));
        generators.push(loop_path);
    }
    SpanningTreeData {
        base,
        tree_edges,
        generator_edges,
        tree_paths,
        generators,
        letter_of,
    }
}

fn inverse_path(edges: &DirectedEdgeSet, p: &[DirEdge]) -> Vec<DirEdge> {
    p.iter().rev().map(|&d| edges.reverse(d)).collect()
}

/// Translation data of a deck transformation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Translation {
    /// Minimal displacement.
    pub am: usize,
    /// Path from the base point to the axis; the realization is
    /// `conjugator · axis_cycle · conjugator⁻¹`.
    pub conjugator: Vec<DirEdge>,
    /// Cyclically reduced loop translated along the axis; `None` for the
    /// identity.
    pub axis_cycle: Option<Vec<DirEdge>>,
}

/// The covering tree of an admissible multigraph with a chosen base vertex.
#[derive(Debug, Clone)]
pub struct CoveringTree {
    graph: Multigraph,
    edges: DirectedEdgeSet,
    spanning: SpanningTreeData,
    /// `counts[r][d]`: reduced paths of `r` further edges following `d`.
    counts: Vec<Vec<u128>>,
}

impl CoveringTree {
    /// Covering tree based at the first vertex in file order.
    pub fn new(g: &Multigraph) -> Result<Self> {
        Self::with_base(g, 0)
    }

    pub fn with_base(g: &Multigraph, base: usize) -> Result<Self> {
        let spanning = generators_from_spanning_tree(g, base)?;
        let edges = DirectedEdgeSet::new(g);
        let mut counts = vec![vec![1u128; edges.len()]];
        for r in 1..=COUNT_TABLE_DEPTH {
            let prev = &counts[r - 1];
            let row = (0..edges.len())
                .map(|d| {
                    edges
                        .successors(d)
                        .iter()
                        .fold(0u128, |acc, &f| acc.saturating_add(prev[f]))
                })
                .collect();
            counts.push(row);
        }
        Ok(CoveringTree {
            graph: g.clone(),
            edges,
            spanning,
            counts,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn edges(&self) -> &DirectedEdgeSet {
        &self.edges
    }

    pub fn spanning(&self) -> &SpanningTreeData {
        &self.spanning
    }

    pub fn base(&self) -> usize {
        self.spanning.base
    }

    /// Rank of the free fundamental group.
    pub fn rank(&self) -> usize {
        self.spanning.rank()
    }

    /// The base point `x₀`.
    pub fn root(&self) -> TreeVertex {
        TreeVertex::default()
    }

    pub fn vertex(&self, path: Vec<DirEdge>) -> Result<TreeVertex> {
        self.check_path(&path)?;
        Ok(TreeVertex { path })
    }

    pub fn cylinder(&self, prefix: Vec<DirEdge>) -> Result<Cylinder> {
        if prefix.is_empty() {
            return Err(Error::InvalidPath("cylinder prefix is empty".into()));
        }
        self.check_path(&prefix)?;
        Ok(Cylinder { prefix })
    }

    fn check_path(&self, path: &[DirEdge]) -> Result<()> {
        let mut at = self.base();
        let mut prev: Option<DirEdge> = None;
        for (i, &d) in path.iter().enumerate() {
            if d >= self.edges.len() {
                return Err(Error::InvalidPath(format!(
                    "directed edge {d} out of range"
                )));
            }
            if self.edges.origin(d) != at {
                return Err(Error::InvalidPath(format!(
                    "step {i} does not start where step {} ends",
                    i.wrapping_sub(1)
                )));
            }
            if prev == Some(self.edges.reverse(d)) {
                return Err(Error::InvalidPath(format!("step {i} backtracks")));
            }
            at = self.edges.terminus(d);
            prev = Some(d);
        }
        Ok(())
    }

    /// Serializable form of a path.
    pub fn steps(&self, path: &[DirEdge]) -> Vec<Step> {
        path.iter()
            .map(|&d| Step {
                edge: self.edges.edge_of(d),
                forward: self.edges.is_forward(d),
            })
            .collect()
    }

    pub(crate) fn inverse_path(&self, p: &[DirEdge]) -> Vec<DirEdge> {
        inverse_path(&self.edges, p)
    }

    /// Appends `d` to a reduced path, cancelling a backtrack.
    fn push_reduced(&self, buf: &mut Vec<DirEdge>, d: DirEdge) {
        if buf.last() == Some(&self.edges.reverse(d)) {
            buf.pop();
        } else {
            buf.push(d);
        }
    }

    pub(crate) fn reduce_concat(&self, a: &[DirEdge], b: &[DirEdge]) -> Vec<DirEdge> {
        let j = self.cancellation(a, b);
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * j);
        out.extend_from_slice(&a[..a.len() - j]);
        out.extend_from_slice(&b[j..]);
        out
    }

    /// Number of edge pairs cancelled when concatenating two reduced paths.
    pub(crate) fn cancellation(&self, a: &[DirEdge], b: &[DirEdge]) -> usize {
        a.iter()
            .rev()
            .zip(b)
            .take_while(|&(&x, &y)| y == self.edges.reverse(x))
            .count()
    }

    /// Extension count `counts[r][d]`.
    pub fn extension_count(&self, d: DirEdge, r: usize) -> u128 {
        self.counts[r][d]
    }

    pub(crate) fn count_table_depth(&self) -> usize {
        COUNT_TABLE_DEPTH
    }

    pub fn identity(&self) -> GroupWord {
        GroupWord {
            letters: Vec::new(),
            realization: Vec::new(),
        }
    }

    /// The `i`-th generator, `1 <= i <= g`.
    pub fn generator(&self, i: usize) -> Result<GroupWord> {
        self.word(&[i as i32])
    }

    /// Freely reduces `letters` and realizes the result.
    pub fn word(&self, letters: &[i32]) -> Result<GroupWord> {
        let g = self.rank() as i32;
        let mut reduced: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l.abs() > g {
                return Err(Error::InvalidLetter {
                    letter: l,
                    rank: self.rank(),
                });
            }
            if reduced.last() == Some(&-l) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        let mut realization = Vec::new();
        for &l in &reduced {
            let loop_path = &self.spanning.generators[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                for &d in loop_path {
                    self.push_reduced(&mut realization, d);
                }
            } else {
                for &d in loop_path.iter().rev() {
                    self.push_reduced(&mut realization, self.edges.reverse(d));
                }
            }
        }
        Ok(GroupWord {
            letters: reduced,
            realization,
        })
    }

    pub fn inverse(&self, w: &GroupWord) -> GroupWord {
        GroupWord {
            letters: w.letters.iter().rev().map(|l| -l).collect(),
            realization: self.inverse_path(&w.realization),
        }
    }

    pub fn multiply(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        let mut letters = a.letters.clone();
        for &l in &b.letters {
            if letters.last() == Some(&-l) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        GroupWord {
            letters,
            realization: self.reduce_concat(&a.realization, &b.realization),
        }
    }

    /// All reduced words of length at most `max_len`, in shortlex order with
    /// letters ordered `1, -1, 2, -2, ...`.
    pub fn words_up_to(&self, max_len: usize) -> Vec<GroupWord> {
        let g = self.rank() as i32;
        let alphabet: Vec<i32> = (1..=g).flat_map(|i| [i, -i]).collect();
        let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
        let mut all = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &alphabet {
                    if w.last() != Some(&-l) {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        all.iter()
            .map(|w| self.word(w).expect("letters in range"))
            .collect()
    }

    /// `w · v`: the realization of `w` followed by `v`, freely reduced.
    pub fn deck_apply(&self, w: &GroupWord, v: &TreeVertex) -> TreeVertex {
        TreeVertex {
            path: self.reduce_concat(&w.realization, &v.path),
        }
    }

    pub fn tree_distance(v1: &TreeVertex, v2: &TreeVertex) -> usize {
        let lcp = common_prefix(&v1.path, &v2.path);
        v1.len() + v2.len() - 2 * lcp
    }

    /// Exact Busemann value `B(x1, x2, ξ)` for every ray `ξ` through `c`.
    ///
    /// Fails if `c` is a proper prefix of either vertex path, since the
    /// value then depends on the ray beyond `c`.
    pub fn busemann(&self, x1: &TreeVertex, x2: &TreeVertex, c: &Cylinder) -> Result<i64> {
        Ok(busemann_term(x1.path(), &c.prefix)? - busemann_term(x2.path(), &c.prefix)?)
    }

    pub fn translation_length(&self, w: &GroupWord) -> Translation {
        let r = &w.realization;
        if r.is_empty() {
            return Translation {
                am: 0,
                conjugator: Vec::new(),
                axis_cycle: None,
            };
        }
        let mut k = 0;
        while 2 * k + 2 <= r.len() && r[r.len() - 1 - k] == self.edges.reverse(r[k]) {
            k += 1;
        }
        let cycle = r[k..r.len() - k].to_vec();
        Translation {
            am: cycle.len(),
            conjugator: r[..k].to_vec(),
            axis_cycle: Some(cycle),
        }
    }

    /// Depth-`depth` cylinder around the attracting (or repelling) fixed
    /// point of `w`; `None` for the identity.
    pub fn axis_endpoint(&self, w: &GroupWord, depth: usize, attracting: bool) -> Option<Cylinder> {
        let t = self.translation_length(w);
        let cycle = t.axis_cycle?;
        let cycle = if attracting {
            cycle
        } else {
            self.inverse_path(&cycle)
        };
        let prefix: Vec<DirEdge> = t
            .conjugator
            .iter()
            .chain(cycle.iter().cycle())
            .copied()
            .take(depth)
            .collect();
        (!prefix.is_empty()).then_some(Cylinder { prefix })
    }

    /// Tree vertices within distance `radius` of the base point, in
    /// breadth-first order.
    pub fn vertices_within(&self, radius: usize) -> Vec<TreeVertex> {
        let mut out = vec![self.root()];
        let mut layer = vec![self.root()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for v in &layer {
                let candidates: &[DirEdge] = match v.path.last() {
                    None => self.edges.outgoing(self.base()),
                    Some(&d) => self.edges.successors(d),
                };
                for &f in candidates {
                    let mut p = v.path.clone();
                    p.push(f);
                    next.push(TreeVertex { path: p });
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

pub(crate) fn common_prefix(a: &[DirEdge], b: &[DirEdge]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `lim d(x, x₃) - |x₃|` as `x₃` runs out along `c`.
fn busemann_term(x: &[DirEdge], c: &[DirEdge]) -> Result<i64> {
    let p = common_prefix(x, c);
    if p == c.len() && x.len() > c.len() {
        return Err(Error::InsufficientDepth {
            need: x.len(),
            have: c.len(),
        });
    }
    Ok(x.len() as i64 - 2 * p as i64)
}
