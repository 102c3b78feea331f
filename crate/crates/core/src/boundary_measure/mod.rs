//! Patterson–Sullivan measures on the boundary, built from Perron data.
//!
//! The measure of the cylinder through a reduced path `e₁…eₙ` is
//! `Z⁻¹ λ^{-(n-1)} r(eₙ)`, with `r` the unit-sum right Perron vector of the
//! Bass–Hashimoto matrix and `Z` the sum of `r` over edges leaving the base
//! vertex. Additivity under refinement is `T r = λ r`.
//!
//! ```
//! use graph_qsm::boundary_measure::PSMeasure;
//! use graph_qsm::corpus;
//! use graph_qsm::covering_tree::CoveringTree;
//!
//! let tree = CoveringTree::new(&corpus::k4()).unwrap();
//! let mu = PSMeasure::new(&tree).unwrap();
//! let c = tree.partition(2).unwrap()[0].clone();
//! assert!((mu.measure(&c) - 1.0 / 6.0).abs() < 1e-15);
//! ```

use rayon::prelude::*;
use serde::Serialize;

use crate::covering_tree::{CoveringTree, Cylinder, GroupWord, Step, TreeVertex};
use crate::error::Result;
use crate::nonbacktracking::{perron_root, DirEdge, PerronData};

/// Sign `s` in `μ_{x'}(C) = λ^{s·B(x', x₀, ξ)} μ_{x₀}(C) · Z/Z'`.
pub const BASEPOINT_SIGN: i32 = -1;

/// A conformal density evaluated at one base point of the covering tree.
#[derive(Debug, Clone)]
pub struct PSMeasure<'t> {
    tree: &'t CoveringTree,
    base: TreeVertex,
    /// `base.path()` reversed, i.e. the path from the base point back to `x₀`.
    back: Vec<DirEdge>,
    perron: PerronData,
    normalization: f64,
}

/// One evaluated conformality identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRecord {
    pub word: Vec<i32>,
    pub cylinder: Vec<Step>,
    pub residual: f64,
}

/// Worst case over a sweep of words and cylinders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformalitySweep {
    pub checked: usize,
    pub max_residual: f64,
    pub worst: Option<ResidualRecord>,
}

/// A pair `(w, C)` on which `B ≠ 0`, so that conformality pins the exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentWitness {
    pub word: Vec<i32>,
    pub cylinder: Vec<Step>,
    pub busemann: i64,
    #[serde(skip)]
    pub(crate) word_value: GroupWord,
    #[serde(skip)]
    pub(crate) cylinder_value: Cylinder,
}

impl<'t> PSMeasure<'t> {
    /// The measure based at `x₀`.
    pub fn new(tree: &'t CoveringTree) -> Result<Self> {
        let t = crate::nonbacktracking::bass_hashimoto(tree.graph())?;
        let perron = perron_root(&t)?;
        Ok(Self::at(tree, tree.root(), perron))
    }

    /// The measure based at an arbitrary tree vertex.
    pub fn at(tree: &'t CoveringTree, base: TreeVertex, perron: PerronData) -> Self {
        let back = tree.inverse_path(base.path());
        let vertex = match base.path().last() {
            None => tree.base(),
            Some(&d) => tree.edges().terminus(d),
        };
        let normalization = tree
            .edges()
            .outgoing(vertex)
            .iter()
            .map(|&d| perron.right_eigenvector[d])
            .sum();
        PSMeasure {
            tree,
            base,
            back,
            perron,
            normalization,
        }
    }

    pub fn tree(&self) -> &'t CoveringTree {
        self.tree
    }

    pub fn base(&self) -> &TreeVertex {
        &self.base
    }

    pub fn perron(&self) -> &PerronData {
        &self.perron
    }

    pub fn lambda(&self) -> f64 {
        self.perron.lambda
    }

    pub fn delta(&self) -> f64 {
        self.perron.delta
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Measure of the cylinder through a reduced path starting at this
    /// measure's own base point.
    fn local(&self, len: usize, last: DirEdge) -> f64 {
        self.perron.right_eigenvector[last] * self.lambda().powi(1 - len as i32)
            / self.normalization
    }

    /// Measure of a cylinder (paths from `x₀`).
    pub fn measure(&self, c: &Cylinder) -> f64 {
        if self.back.is_empty() {
            return self.local(c.depth(), c.last());
        }
        let mut buf = c.prefix().to_vec();
        let mut total = 0.0;
        self.tree.image_walk(&self.back, &mut buf, &mut |r, p, j| {
            total += self.local(r.len() + p.len() - 2 * j, *p.last().expect("nonempty"));
        });
        total
    }

    /// Total mass of the depth-`k` partition.
    pub fn partition_mass(&self, k: usize) -> Result<f64> {
        Ok(compensated_sum(
            self.tree.partition(k)?.iter().map(|c| self.measure(c)),
        ))
    }

    /// `|μ(wC) - ∫_C λ^{B(x, w⁻¹x, ξ)} dμ(ξ)|` for this measure's base `x`.
    ///
    /// When `B` is not constant on `C` the right side is summed over the
    /// coarsest refinement on which it is.
    pub fn conformality_residual(&self, w: &GroupWord, c: &Cylinder) -> f64 {
        self.residual_with_factor(w, c, self.lambda())
    }

    /// The same identity with `λ` replaced by `exp(beta)`.
    pub fn conformality_residual_at(&self, w: &GroupWord, c: &Cylinder, beta: f64) -> f64 {
        self.residual_with_factor(w, c, beta.exp())
    }

    fn residual_with_factor(&self, w: &GroupWord, c: &Cylinder, factor: f64) -> f64 {
        let x2 = self.tree.deck_apply(&self.tree.inverse(w), &self.base);
        let lhs = self.measure_image(w, c);
        let mut buf = c.prefix().to_vec();
        let rhs = self.integrate_exponential(self.base.path(), x2.path(), &mut buf, factor);
        (lhs - rhs).abs()
    }

    /// `μ(wC)`.
    pub fn measure_image(&self, w: &GroupWord, c: &Cylinder) -> f64 {
        let mut buf = c.prefix().to_vec();
        let mut total = 0.0;
        if self.back.is_empty() {
            self.tree
                .image_walk(w.realization(), &mut buf, &mut |r, p, j| {
                    total += self.local(r.len() + p.len() - 2 * j, *p.last().expect("nonempty"));
                });
        } else {
            for piece in self.tree.image_pieces(w, c) {
                total += self.measure(&piece);
            }
        }
        total
    }

    /// `∫_C factor^{B(x1, x2, ξ)} dμ(ξ)`, refining `C` until `B` is exact.
    fn integrate_exponential(
        &self,
        x1: &[DirEdge],
        x2: &[DirEdge],
        buf: &mut Vec<DirEdge>,
        factor: f64,
    ) -> f64 {
        match busemann_of_paths(x1, x2, buf) {
            Some(b) => {
                let m = if self.back.is_empty() {
                    self.local(buf.len(), *buf.last().expect("nonempty"))
                } else {
                    self.measure(&self.tree.cylinder(buf.clone()).expect("valid prefix"))
                };
                factor.powi(b as i32) * m
            }
            None => {
                let last = *buf.last().expect("nonempty");
                let mut total = 0.0;
                for &s in self.tree.edges().successors(last) {
                    buf.push(s);
                    total += self.integrate_exponential(x1, x2, buf, factor);
                    buf.pop();
                }
                total
            }
        }
    }

    /// Max conformality residual over `words` and every cylinder of depth
    /// `1..=max_depth`.
    pub fn conformality_sweep(&self, words: &[GroupWord], max_depth: usize) -> ConformalitySweep {
        let per_word: Vec<(usize, f64, Option<Vec<DirEdge>>, usize)> = words
            .par_iter()
            .enumerate()
            .map(|(wi, w)| {
                let x2 = self.tree.deck_apply(&self.tree.inverse(w), &self.base);
                let mut worst = (0usize, 0.0f64, None);
                let mut buf = Vec::with_capacity(max_depth);
                self.sweep_cylinders(&mut buf, max_depth, &mut |buf| {
                    let lhs = self.measure_image_buf(w, buf);
                    let mut scratch = buf.to_vec();
                    let rhs = self.integrate_exponential(
                        self.base.path(),
                        x2.path(),
                        &mut scratch,
                        self.lambda(),
                    );
                    let r = (lhs - rhs).abs();
                    worst.0 += 1;
                    if r > worst.1 || worst.2.is_none() {
                        worst.1 = r;
                        worst.2 = Some(buf.to_vec());
                    }
                });
                (worst.0, worst.1, worst.2, wi)
            })
            .collect();
        let checked = per_word.iter().map(|p| p.0).sum();
        let best = per_word.into_iter().filter(|p| p.2.is_some()).fold(
            None::<(f64, Vec<DirEdge>, usize)>,
            |acc, (_, r, c, wi)| match acc {
                Some(a) if a.0 >= r => Some(a),
                _ => Some((r, c.expect("filtered"), wi)),
            },
        );
        ConformalitySweep {
            checked,
            max_residual: best.as_ref().map_or(0.0, |b| b.0),
            worst: best.map(|(r, c, wi)| ResidualRecord {
                word: words[wi].letters().to_vec(),
                cylinder: self.tree.steps(&c),
                residual: r,
            }),
        }
    }

    fn measure_image_buf(&self, w: &GroupWord, prefix: &[DirEdge]) -> f64 {
        let c = self.tree.cylinder(prefix.to_vec()).expect("valid prefix");
        self.measure_image(w, &c)
    }

    fn sweep_cylinders(
        &self,
        buf: &mut Vec<DirEdge>,
        max_depth: usize,
        f: &mut dyn FnMut(&[DirEdge]),
    ) {
        if !buf.is_empty() {
            f(buf);
        }
        if buf.len() == max_depth {
            return;
        }
        let cands: Vec<DirEdge> = match buf.last() {
            None => self.tree.edges().outgoing(self.tree.base()).to_vec(),
            Some(&d) => self.tree.edges().successors(d).to_vec(),
        };
        for d in cands {
            buf.push(d);
            self.sweep_cylinders(buf, max_depth, f);
            buf.pop();
        }
    }

    /// A generator and a cylinder with `B(x₀, w⁻¹x₀, C) ≠ 0` on which a
    /// perturbed exponent is most visible.
    pub fn exponent_witness(&self) -> Result<ExponentWitness> {
        let delta = self.delta();
        let mut best: Option<(f64, ExponentWitness)> = None;
        for i in 1..=self.tree.rank() {
            let w = self.tree.generator(i)?;
            let x2 = self.tree.deck_apply(&self.tree.inverse(&w), &self.base);
            let depth = w.realization().len() + self.base.len() + 1;
            for c in self.tree.partition(depth)? {
                let b = self.tree.busemann(&self.base, &x2, &c)?;
                if b == 0 {
                    continue;
                }
                let score = [delta - 0.1, delta + 0.1]
                    .iter()
                    .map(|&beta| self.conformality_residual_at(&w, &c, beta))
                    .fold(f64::INFINITY, f64::min);
                if best.as_ref().is_none_or(|(s, _)| score > *s) {
                    best = Some((
                        score,
                        ExponentWitness {
                            word: w.letters().to_vec(),
                            cylinder: self.tree.steps(c.prefix()),
                            busemann: b,
                            word_value: w.clone(),
                            cylinder_value: c,
                        },
                    ));
                }
            }
        }
        Ok(best
            .expect("admissible graphs have hyperbolic generators")
            .1)
    }

    /// Conformality residual of the witness with exponent `beta`.
    pub fn witness_residual(&self, witness: &ExponentWitness, beta: f64) -> f64 {
        self.conformality_residual_at(&witness.word_value, &witness.cylinder_value, beta)
    }
}

/// Neumaier summation.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// `B(x1, x2, ξ)` on the cylinder `c`, or `None` if `c` is too shallow.
fn busemann_of_paths(x1: &[DirEdge], x2: &[DirEdge], c: &[DirEdge]) -> Option<i64> {
    let term = |x: &[DirEdge]| {
        let p = x.iter().zip(c).take_while(|(a, b)| a == b).count();
        (p < c.len() || x.len() <= c.len()).then_some(x.len() as i64 - 2 * p as i64)
    };
    Some(term(x1)? - term(x2)?)
}

/// Max over the depth-`depth` partition of
/// `|μ_{x'}(C) - λ^{-B(x', x₀, C)} μ_{x₀}(C) Z/Z'|`.
pub fn basepoint_rn_check(tree: &CoveringTree, x0p: &TreeVertex, depth: usize) -> Result<f64> {
    let mu = PSMeasure::new(tree)?;
    let mu_p = PSMeasure::at(tree, x0p.clone(), mu.perron().clone());
    let ratio = mu.normalization() / mu_p.normalization();
    let mut worst = 0.0f64;
    for c in tree.partition(depth)? {
        let b = tree.busemann(x0p, &tree.root(), &c)?;
        let predicted = mu.lambda().powi(BASEPOINT_SIGN * b as i32) * mu.measure(&c) * ratio;
        worst = worst.max((mu_p.measure(&c) - predicted).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::error::Error;

    #[test]
    fn k4_cylinder_values() {
        let t = CoveringTree::new(&corpus::k4()).unwrap();
        let mu = PSMeasure::new(&t).unwrap();
        for c in t.partition(1).unwrap() {
            assert!((mu.measure(&c) - 1.0 / 3.0).abs() < 1e-15);
        }
        for c in t.partition(2).unwrap() {
            assert!((mu.measure(&c) - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn masses_and_additivity() {
        for (_, g) in corpus::standard() {
            let t = CoveringTree::new(&g).unwrap();
            let mu = PSMeasure::new(&t).unwrap();
            for k in 1..=6 {
                assert!((mu.partition_mass(k).unwrap() - 1.0).abs() < 1e-12);
            }
            for c in t.partition(3).unwrap() {
                let m = mu.measure(&c);
                assert!(m > 0.0);
                let split: f64 = t.children(&c).iter().map(|d| mu.measure(d)).sum();
                assert!((m - split).abs() <= 1e-14 * m);
            }
        }
    }

    #[test]
    fn rose_conformality_closed_form() {
        let t = CoveringTree::new(&corpus::rose(2)).unwrap();
        let mu = PSMeasure::new(&t).unwrap();
        let a = t.word(&[1]).unwrap();
        let cb = t.cylinder(vec![1]).unwrap();
        // μ(C_ab) = 1/12 and λ^{-1} μ(C_b) = 1/12.
        assert!((mu.measure_image(&a, &cb) - 1.0 / 12.0).abs() < 1e-15);
        assert!(mu.conformality_residual(&a, &cb) <= 1e-12);
        assert_eq!(mu.conformality_residual(&t.identity(), &cb), 0.0);
    }

    #[test]
    fn perturbed_exponent_breaks_conformality() {
        let t = CoveringTree::new(&corpus::rose(2)).unwrap();
        let mu = PSMeasure::new(&t).unwrap();
        let w = mu.exponent_witness().unwrap();
        assert_ne!(w.busemann, 0);
        let shifted = (mu.lambda() + 0.3).ln();
        assert!(mu.witness_residual(&w, shifted) > 1e-3);
        assert!(mu.witness_residual(&w, mu.delta()) < 1e-12);
    }

    #[test]
    fn basepoint_change() {
        let t = CoveringTree::new(&corpus::k4()).unwrap();
        assert_eq!(basepoint_rn_check(&t, &t.root(), 3).unwrap(), 0.0);
        let x = t.vertex(vec![0]).unwrap();
        assert!(basepoint_rn_check(&t, &x, 4).unwrap() <= 1e-10);
        let far = t.vertex(vec![0, 3, 5]).unwrap();
        assert!(basepoint_rn_check(&t, &far, 5).unwrap() <= 1e-10);
        assert!(matches!(
            basepoint_rn_check(&t, &far, 2),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn shifted_base_is_a_probability_measure() {
        let t = CoveringTree::new(&corpus::dumbbell()).unwrap();
        let mu = PSMeasure::new(&t).unwrap();
        let x = t.vertex(vec![1, 2]).unwrap();
        let mu_p = PSMeasure::at(&t, x, mu.perron().clone());
        assert!((mu_p.partition_mass(4).unwrap() - 1.0).abs() < 1e-12);
    }
}
