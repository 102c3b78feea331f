//! Finite unoriented multigraphs with loops and parallel edges.
//!
//! A [`Multigraph`] keeps its vertices and edges in file order, which is what
//! every downstream construction (spanning trees, directed-edge numbering,
//! cylinder enumeration) keys on. Degrees follow the usual multigraph
//! convention: a loop contributes 2.
//!
//! Graphs are read from and written to a small JSON format:
//!
//! ```json
//! { "vertices": ["u", "v"],
//!   "edges": [ {"id": "a", "ends": ["u", "v"]},
//!              {"id": "l", "ends": ["u", "u"]} ] }
//! ```

mod enumerate;
mod iso;

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{enumerate_multigraphs, MAX_ENUM_EDGES, MAX_ENUM_VERTICES};
pub use iso::{isomorphic, isomorphic_with_bound, Isomorphism, DEFAULT_ISO_BOUND};

/// An edge of a [`Multigraph`]; `ends` are vertex indices, equal for a loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub ends: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// First Betti number `|E| - |V| + 1` of a connected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiNumber(pub usize);

impl BettiNumber {
    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for BettiNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    id: String,
    ends: [String; 2],
}

impl Multigraph {
    /// Builds a graph from named vertices and `(edge id, end, end)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (id, a, b) in edges {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateEdge(id));
            }
            let lookup = |name: &String| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::DanglingEndpoint {
                        edge: id.clone(),
                        vertex: name.clone(),
                    })
            };
            let ends = (lookup(&a)?, lookup(&b)?);
            out.push(Edge { id, ends });
        }
        Ok(Multigraph {
            vertices,
            edges: out,
        })
    }

    /// Builds a graph on vertices `v0..v{n-1}` with edges `e0, e1, ...` given
    /// as index pairs.
    pub fn from_edge_list(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let vertices: Vec<String> = (0..vertex_count).map(|i| format!("v{i}")).collect();
        let named = edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                let name = |i: usize| vertices.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
                (format!("e{k}"), name(a), name(b))
            })
            .collect::<Vec<_>>();
        Multigraph::new(vertices.clone(), named)
    }

    /// Parses the JSON graph format.
    pub fn parse(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Multigraph::new(
            file.vertices,
            file.edges.into_iter().map(|e| {
                let [a, b] = e.ends;
                (e.id, a, b)
            }),
        )
    }

    /// Serializes to the JSON graph format, preserving order.
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    ends: [
                        self.vertices[e.ends.0].clone(),
                        self.vertices[e.ends.1].clone(),
                    ],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Degree of `v`: twice its loops plus its non-loop incidences.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends.0 == v) as usize + (e.ends.1 == v) as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for e in &self.edges {
            deg[e.ends.0] += 1;
            deg[e.ends.1] += 1;
        }
        deg
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.is_loop() && e.ends.0 == v)
            .count()
    }

    /// Number of edges joining `u` and `v` (loops at `u` when `u == v`).
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| (e.ends == (u, v)) || (e.ends == (v, u)))
            .count()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.degrees().into_iter().min()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.ends.0].push(e.ends.1);
            adj[e.ends.1].push(e.ends.0);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Connected with every degree at least three.
    pub fn is_admissible(&self) -> bool {
        self.is_connected() && self.min_degree().is_some_and(|d| d >= 3)
    }

    pub fn betti(&self) -> Result<BettiNumber> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(BettiNumber(self.edge_count() + 1 - self.vertex_count()))
    }

    /// Checks the standing hypotheses of the boundary-algebra theory:
    /// connected, minimum degree at least three and Betti number at least two.
    pub fn require_admissible(&self) -> Result<BettiNumber> {
        if !self.is_connected() {
            return Err(Error::Inadmissible("graph is disconnected".into()));
        }
        let degrees = self.degrees();
        if let Some((v, d)) = degrees.iter().enumerate().find(|(_, &d)| d < 3) {
            return Err(Error::Inadmissible(format!(
                "vertex `{}` has degree {d}",
                self.vertices[v]
            )));
        }
        let g = self.betti()?;
        if g.0 < 2 {
            return Err(Error::BettiTooSmall(g.0));
        }
        Ok(g)
    }

    /// Returns a copy with vertices renamed and reordered by `perm`
    /// (`perm[i]` is the new position of old vertex `i`) and edges reordered
    /// by `edge_perm` likewise.
    pub fn relabeled(&self, perm: &[usize], edge_perm: &[usize]) -> Multigraph {
        let n = self.vertex_count();
        let mut vertices = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            vertices[new] = format!("r{}", self.vertices[old]);
        }
        let mut edges = vec![None; self.edge_count()];
        for (old, &new) in edge_perm.iter().enumerate() {
            let e = &self.edges[old];
            edges[new] = Some(Edge {
                id: format!("r{}", e.id),
                ends: (perm[e.ends.0], perm[e.ends.1]),
            });
        }
        Multigraph {
            vertices,
            edges: edges.into_iter().map(Option::unwrap).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    const THETA: &str = r#"{"vertices":["u","v"],"edges":[
        {"id":"a","ends":["u","v"]},{"id":"b","ends":["u","v"]},{"id":"c","ends":["u","v"]}]}"#;

    #[test]
    fn parses_theta() {
        let g = Multigraph::parse(THETA).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_admissible());
        assert_eq!(g.betti().unwrap(), BettiNumber(2));
    }

    #[test]
    fn degree_two_vertex_is_parsed_but_inadmissible() {
        let text = r#"{"vertices":["u","w"],"edges":[
            {"id":"a","ends":["u","u"]},{"id":"b","ends":["u","w"]},{"id":"c","ends":["u","w"]}]}"#;
        let g = Multigraph::parse(text).unwrap();
        assert_eq!(g.degree(1), 2);
        assert!(!g.is_admissible());
        assert!(matches!(
            g.require_admissible(),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn k4_read_back() {
        let k4 = corpus::k4();
        let g = Multigraph::parse(&k4.to_json()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
        assert!(g.is_admissible());
        assert_eq!(g, k4);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Multigraph::parse("{not json"),
            Err(Error::Malformed(_))
        ));
        let dangling = r#"{"vertices":["u"],"edges":[{"id":"a","ends":["u","x"]}]}"#;
        assert!(matches!(
            Multigraph::parse(dangling),
            Err(Error::DanglingEndpoint { .. })
        ));
        let dup_v = r#"{"vertices":["u","u"],"edges":[]}"#;
        assert_eq!(
            Multigraph::parse(dup_v),
            Err(Error::DuplicateVertex("u".into()))
        );
        let dup_e = r#"{"vertices":["u"],"edges":[{"id":"a","ends":["u","u"]},{"id":"a","ends":["u","u"]}]}"#;
        assert_eq!(
            Multigraph::parse(dup_e),
            Err(Error::DuplicateEdge("a".into()))
        );
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(corpus::theta().betti().unwrap().get(), 2);
        assert_eq!(corpus::k4().betti().unwrap().get(), 3);
        assert_eq!(corpus::rose(2).betti().unwrap().get(), 2);
        let split = Multigraph::from_edge_list(2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(split.betti(), Err(Error::Disconnected));
    }

    #[test]
    fn loops_count_twice() {
        let rose = corpus::rose(3);
        assert_eq!(rose.degree(0), 6);
        assert_eq!(rose.loop_count(0), 3);
        let db = corpus::dumbbell();
        assert_eq!(db.degrees(), vec![3, 3]);
    }

    #[test]
    fn one_loop_rose_is_not_interesting() {
        let r = corpus::rose(1);
        assert!(matches!(
            r.require_admissible(),
            Err(Error::Inadmissible(_))
        ));
    }
}
