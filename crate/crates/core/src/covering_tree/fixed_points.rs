//! Density of fixed points of deck transformations in the boundary, and of
//! their complement.

use std::collections::HashSet;

use serde::Serialize;

use super::{CoveringTree, Step};
use crate::error::{Error, Result};
use crate::nonbacktracking::DirEdge;

const MAX_DEPTH: usize = 8;
const MAX_WORD_LEN: usize = 6;
/// Extra length used to separate an aperiodic witness from axis endpoints.
const SEPARATION: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub depth: usize,
    pub maxlen: usize,
    pub cylinders: usize,
    /// Cylinders containing an axis endpoint of a word of length `<= maxlen`.
    pub fixed_found: usize,
    /// Cylinders containing a certified non-fixed point.
    pub nonfixed_found: usize,
    pub missing_fixed: Vec<Vec<Step>>,
    pub missing_nonfixed: Vec<Vec<Step>>,
}

impl FixedPointReport {
    pub fn passed(&self) -> bool {
        self.missing_fixed.is_empty() && self.missing_nonfixed.is_empty()
    }
}

/// Parity of the number of set bits.
fn thue_morse(n: usize) -> usize {
    (n.count_ones() % 2) as usize
}

impl CoveringTree {
    /// Checks, for every depth-`depth` cylinder, that it contains a fixed point
    /// of some nontrivial word of length `<= maxlen` and a point fixed by none.
    ///
    /// The non-fixed witness continues the cylinder by choosing successor
    /// `0` or `1` according to the Thue–Morse sequence; such a ray is not
    /// eventually periodic, whereas every fixed point of a nontrivial deck
    /// transformation is. The report additionally confirms that its
    /// length-`depth + 64` prefix differs from every axis endpoint.
    pub fn fixed_point_density_check(
        &self,
        depth: usize,
        maxlen: usize,
    ) -> Result<FixedPointReport> {
        if depth > MAX_DEPTH || maxlen > MAX_WORD_LEN {
            return Err(Error::Bound(format!(
                "fixed-point check requires depth <= {MAX_DEPTH} and maxlen <= {MAX_WORD_LEN}"
            )));
        }
        let words: Vec<_> = self
            .words_up_to(maxlen)
            .into_iter()
            .filter(|w| !w.is_identity())
            .collect();
        let long = depth + SEPARATION;
        let mut short_endpoints: HashSet<Vec<DirEdge>> = HashSet::new();
        let mut long_endpoints: HashSet<Vec<DirEdge>> = HashSet::new();
        for w in &words {
            for attracting in [true, false] {
                let c = self.axis_endpoint(w, long, attracting).expect("nontrivial");
                short_endpoints.insert(c.prefix[..depth].to_vec());
                long_endpoints.insert(c.prefix);
            }
        }

        let cylinders: Vec<Vec<DirEdge>> = if depth == 0 {
            vec![Vec::new()]
        } else {
            self.partition(depth)?
                .into_iter()
                .map(|c| c.prefix)
                .collect()
        };
        let mut report = FixedPointReport {
            depth,
            maxlen,
            cylinders: cylinders.len(),
            fixed_found: 0,
            nonfixed_found: 0,
            missing_fixed: Vec::new(),
            missing_nonfixed: Vec::new(),
        };
        for c in &cylinders {
            if short_endpoints.contains(c) {
                report.fixed_found += 1;
            } else {
                report.missing_fixed.push(self.steps(c));
            }
            let ray = self.aperiodic_continuation(c, long);
            if long_endpoints.contains(&ray) {
                report.missing_nonfixed.push(self.steps(c));
            } else {
                report.nonfixed_found += 1;
            }
        }
        Ok(report)
    }

    /// Extends `prefix` to length `len` along Thue–Morse successor choices.
    pub fn aperiodic_continuation(&self, prefix: &[DirEdge], len: usize) -> Vec<DirEdge> {
        let mut ray = prefix.to_vec();
        let mut n = 0;
        while ray.len() < len {
            let cands = match ray.last() {
                None => self.edges.outgoing(self.base()),
                Some(&d) => self.edges.successors(d),
            };
            ray.push(cands[thue_morse(n) % cands.len()]);
            n += 1;
        }
        ray
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn rose_product_axis_lies_in_its_cylinder() {
        let t = CoveringTree::new(&corpus::rose(2)).unwrap();
        let ab = t.word(&[1, 2]).unwrap();
        let c = t.axis_endpoint(&ab, 2, true).unwrap();
        assert_eq!(c.prefix(), &[0, 1]);
    }

    #[test]
    fn depth_zero_is_trivial() {
        let t = CoveringTree::new(&corpus::theta()).unwrap();
        let r = t.fixed_point_density_check(0, 1).unwrap();
        assert_eq!(r.cylinders, 1);
        assert!(r.passed());
    }

    #[test]
    fn small_corpus_passes() {
        for (_, g) in corpus::standard() {
            let t = CoveringTree::new(&g).unwrap();
            let r = t.fixed_point_density_check(3, 4).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn bounds_are_enforced() {
        let t = CoveringTree::new(&corpus::rose(2)).unwrap();
        assert!(t.fixed_point_density_check(9, 2).is_err());
        assert!(t.fixed_point_density_check(2, 7).is_err());
    }
}
