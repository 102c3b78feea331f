//! Cylinder partitions of the boundary and the boundary action of words.

use std::collections::{BTreeMap, BTreeSet};

use super::{CoveringTree, Cylinder, GroupWord};
use crate::error::{Error, Result};
use crate::nonbacktracking::DirEdge;

/// Receives `(R, prefix, cancelled)` for each piece of an image.
type PieceVisitor<'a> = dyn FnMut(&[DirEdge], &[DirEdge], usize) + 'a;

impl CoveringTree {
    fn first_steps(&self) -> &[DirEdge] {
        self.edges.outgoing(self.base())
    }

    fn candidates(&self, prefix: &[DirEdge]) -> &[DirEdge] {
        match prefix.last() {
            None => self.first_steps(),
            Some(&d) => self.edges.successors(d),
        }
    }

    /// Number of depth-`k` cylinders.
    pub fn partition_size(&self, k: usize) -> u128 {
        if k == 0 {
            return 1;
        }
        self.first_steps().iter().fold(0u128, |acc, &d| {
            acc.saturating_add(self.extension_count(d, k - 1))
        })
    }

    /// The depth-`k` cylinders in lexicographic order of directed-edge
    /// indices; position in this list is [`CoveringTree::rank_of`].
    pub fn partition(&self, k: usize) -> Result<Vec<Cylinder>> {
        if k == 0 {
            return Err(Error::Bound("partition depth must be at least 1".into()));
        }
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(k);
        self.extend_all(&mut buf, k, &mut |p| {
            out.push(Cylinder { prefix: p.to_vec() })
        });
        Ok(out)
    }

    /// Calls `f` on every reduced extension of `buf` to length `k`, in order.
    pub(crate) fn extend_all(
        &self,
        buf: &mut Vec<DirEdge>,
        k: usize,
        f: &mut dyn FnMut(&[DirEdge]),
    ) {
        if buf.len() >= k {
            f(buf);
            return;
        }
        let cands = self.candidates(buf);
        for &d in cands {
            buf.push(d);
            self.extend_all(buf, k, f);
            buf.pop();
        }
    }

    /// Calls `f(index, path)` for every depth-`k` cylinder, in partition
    /// order, without materializing the partition.
    pub fn visit_partition(&self, k: usize, f: &mut dyn FnMut(usize, &[DirEdge])) {
        let mut i = 0;
        let mut buf = Vec::with_capacity(k);
        self.extend_all(&mut buf, k, &mut |p| {
            f(i, p);
            i += 1;
        });
    }

    /// Index of a depth-`k` path in the depth-`k` partition.
    pub fn rank_of(&self, path: &[DirEdge]) -> usize {
        let k = path.len();
        let mut rank = 0u128;
        for (i, &d) in path.iter().enumerate() {
            for &s in self.candidates(&path[..i]) {
                if s == d {
                    break;
                }
                rank += self.extension_count(s, k - 1 - i);
            }
        }
        rank as usize
    }

    /// Immediate refinements of `c`.
    pub fn children(&self, c: &Cylinder) -> Vec<Cylinder> {
        self.edges
            .successors(c.last())
            .iter()
            .map(|&f| {
                let mut prefix = c.prefix.clone();
                prefix.push(f);
                Cylinder { prefix }
            })
            .collect()
    }

    /// The image `w·C` as a disjoint union of cylinders of varying depth.
    pub fn image_pieces(&self, w: &GroupWord, c: &Cylinder) -> Vec<Cylinder> {
        let mut out = Vec::new();
        let mut buf = c.prefix.clone();
        self.image_walk(&w.realization, &mut buf, &mut |r, p, j| {
            out.push(Cylinder {
                prefix: r[..r.len() - j].iter().chain(&p[j..]).copied().collect(),
            })
        });
        out
    }

    /// Walks the pieces of `R·C`, calling `f(R, prefix, cancelled)` for each
    /// refinement `prefix` of `C` whose image is the single cylinder
    /// `R[..|R|-cancelled] · prefix[cancelled..]`.
    pub(crate) fn image_walk(
        &self,
        r: &[DirEdge],
        buf: &mut Vec<DirEdge>,
        f: &mut PieceVisitor<'_>,
    ) {
        let j = self.cancellation(r, buf);
        if j < buf.len() {
            f(r, buf, j);
            return;
        }
        let last = *buf.last().expect("nonempty prefix");
        for &s in self.edges.successors(last) {
            buf.push(s);
            self.image_walk(r, buf, f);
            buf.pop();
        }
    }

    /// `w·C` as a disjoint union of depth-`out_depth` cylinders, sorted.
    pub fn boundary_image_cylinder(
        &self,
        w: &GroupWord,
        c: &Cylinder,
        out_depth: usize,
    ) -> Result<Vec<Cylinder>> {
        if out_depth == 0 {
            return Err(Error::Bound("output depth must be at least 1".into()));
        }
        let pieces = self.image_pieces(w, c);
        self.express_at_depth(pieces, out_depth)
    }

    /// Rewrites a disjoint union of cylinders at a single depth.
    pub(crate) fn express_at_depth(
        &self,
        pieces: Vec<Cylinder>,
        out_depth: usize,
    ) -> Result<Vec<Cylinder>> {
        let mut out = Vec::new();
        let mut deep: BTreeMap<Vec<DirEdge>, Vec<Cylinder>> = BTreeMap::new();
        for p in pieces {
            if p.depth() <= out_depth {
                let mut buf = p.prefix;
                self.extend_all(&mut buf, out_depth, &mut |q| {
                    out.push(Cylinder { prefix: q.to_vec() })
                });
            } else {
                deep.entry(p.prefix[..out_depth].to_vec())
                    .or_default()
                    .push(p);
            }
        }
        for (prefix, group) in deep {
            let d = group.iter().map(Cylinder::depth).max().expect("nonempty");
            if d - out_depth > self.count_table_depth() {
                return Err(Error::OutDepthTooShallow(out_depth));
            }
            let covered: u128 = group
                .iter()
                .map(|q| self.extension_count(q.last(), d - q.depth()))
                .sum();
            let whole = self.extension_count(*prefix.last().expect("nonempty"), d - out_depth);
            if covered != whole {
                return Err(Error::OutDepthTooShallow(out_depth));
            }
            out.push(Cylinder { prefix });
        }
        out.sort();
        Ok(out)
    }

    /// Coarsest representation of a disjoint union of cylinders: complete
    /// sibling sets are merged into their parent, bottom-up. The whole
    /// boundary is the empty prefix.
    pub fn canonical_union(
        &self,
        pieces: impl IntoIterator<Item = Vec<DirEdge>>,
    ) -> Vec<Vec<DirEdge>> {
        let mut set: BTreeSet<Vec<DirEdge>> = pieces.into_iter().collect();
        let max = set.iter().map(Vec::len).max().unwrap_or(0);
        for depth in (1..=max).rev() {
            let mut groups: BTreeMap<Vec<DirEdge>, usize> = BTreeMap::new();
            for p in set.iter().filter(|p| p.len() == depth) {
                *groups.entry(p[..depth - 1].to_vec()).or_default() += 1;
            }
            for (parent, n) in groups {
                let siblings = self.candidates(&parent);
                if n == siblings.len() {
                    for &s in siblings {
                        let mut child = parent.clone();
                        child.push(s);
                        set.remove(&child);
                    }
                    set.insert(parent);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Signed generator letters of the non-tree edges crossed by `C`.
    pub fn cayley_encode(&self, c: &Cylinder) -> Vec<i32> {
        self.encode_path(&c.prefix)
    }

    pub(crate) fn encode_path(&self, path: &[DirEdge]) -> Vec<i32> {
        path.iter()
            .filter_map(|&d| self.spanning.letter_of(d))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn partition_sizes_and_ranks() {
        for (_, g) in corpus::standard() {
            let t = CoveringTree::new(&g).unwrap();
            for k in 1..=4 {
                let part = t.partition(k).unwrap();
                assert_eq!(part.len() as u128, t.partition_size(k));
                for (i, c) in part.iter().enumerate() {
                    assert_eq!(t.rank_of(c.prefix()), i);
                }
            }
        }
    }

    #[test]
    fn rose_image_is_concatenation() {
        let t = CoveringTree::new(&corpus::rose(2)).unwrap();
        let a = t.word(&[1]).unwrap();
        let cb = t.cylinder(vec![1]).unwrap();
        let image = t.boundary_image_cylinder(&a, &cb, 2).unwrap();
        assert_eq!(image, vec![t.cylinder(vec![0, 1]).unwrap()]);
    }

    #[test]
    fn identity_image_refines() {
        let t = CoveringTree::new(&corpus::theta()).unwrap();
        let c = t.cylinder(vec![0]).unwrap();
        let image = t.boundary_image_cylinder(&t.identity(), &c, 3).unwrap();
        assert_eq!(image.len(), 4);
        assert!(image.iter().all(|q| c.contains(q)));
    }

    #[test]
    fn images_of_a_partition_partition() {
        for (_, g) in corpus::standard() {
            let t = CoveringTree::new(&g).unwrap();
            for w in t.words_up_to(2) {
                let k = 3;
                let out = k + w.realization().len();
                let mut all: Vec<Cylinder> = Vec::new();
                for c in t.partition(k).unwrap() {
                    all.extend(t.boundary_image_cylinder(&w, &c, out).unwrap());
                }
                all.sort();
                assert_eq!(all, t.partition(out).unwrap());
            }
        }
    }

    #[test]
    fn shallow_output_is_reported() {
        let t = CoveringTree::new(&corpus::rose(2)).unwrap();
        let a = t.word(&[1, 1]).unwrap();
        let c = t.cylinder(vec![2, 3]).unwrap();
        // a²·(ā b̄) = a b̄, which does not fill the depth-1 cylinder "a".
        assert_eq!(
            t.boundary_image_cylinder(&a, &c, 1),
            Err(Error::OutDepthTooShallow(1))
        );
    }

    #[test]
    fn canonical_union_merges_siblings() {
        let t = CoveringTree::new(&corpus::theta()).unwrap();
        let whole = t
            .partition(3)
            .unwrap()
            .into_iter()
            .map(|c| c.prefix().to_vec());
        assert_eq!(t.canonical_union(whole), vec![Vec::<usize>::new()]);
        let c = t.cylinder(vec![0, 4]).unwrap();
        let kids = t.children(&c).into_iter().map(|d| d.prefix().to_vec());
        assert_eq!(t.canonical_union(kids), vec![vec![0, 4]]);
        let partial = vec![vec![0, 4, 2], vec![1]];
        assert_eq!(t.canonical_union(partial.clone()), partial);
    }

    #[test]
    fn encodings() {
        let t = CoveringTree::new(&corpus::rose(2)).unwrap();
        assert_eq!(t.cayley_encode(&t.cylinder(vec![0]).unwrap()), vec![1]);
        let t = CoveringTree::new(&corpus::theta()).unwrap();
        assert!(t.cayley_encode(&t.cylinder(vec![0]).unwrap()).is_empty());
        assert_eq!(t.cayley_encode(&t.cylinder(vec![0, 4]).unwrap()), vec![-1]);
    }
}
