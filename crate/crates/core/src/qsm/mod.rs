//! The algebraic crossed product of locally constant boundary functions by
//! the deck group, its Busemann time evolution and the KMS state.
//!
//! An element is a finite sum `Σ f_γ μ_γ` whose coefficients are constant on
//! the cylinders of one fixed depth. Multiplication follows the covariance
//! rule `(f μ_α)(g μ_β) = f · (g ∘ α⁻¹) μ_{αβ}`. The time evolution scales the
//! `γ`-term by `exp(i t c_γ)` with the cocycle `c_γ(ξ) = B(x₀, γ x₀, ξ)`,
//! which is the orientation that makes `σ_t` multiplicative for this product.
//!
//! ```
//! use graph_qsm::boundary_measure::PSMeasure;
//! use graph_qsm::corpus;
//! use graph_qsm::covering_tree::CoveringTree;
//! use graph_qsm::qsm::QsmSystem;
//!
//! let tree = CoveringTree::new(&corpus::rose(2)).unwrap();
//! let sys = QsmSystem::new(PSMeasure::new(&tree).unwrap());
//! let a = sys.group_element(&[1]).unwrap();
//! let b = sys.group_element(&[-1]).unwrap();
//! let ab = sys.multiply(&a, &b).unwrap();
//! assert!(sys.max_abs_diff(&ab, &sys.unit()) < 1e-15);
//! assert!(sys.kms_residual(&a, &b, sys.delta()).unwrap() < 1e-12);
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::boundary_measure::PSMeasure;
use crate::covering_tree::{CoveringTree, Cylinder, GroupWord};
use crate::error::{Error, Result};
use crate::nonbacktracking::DirEdge;

/// Default bound on word length in a support.
pub const DEFAULT_WORD_BOUND: usize = 4;
/// Default bound on the number of cylinders at the working depth.
pub const DEFAULT_PARTITION_BOUND: u128 = 1 << 21;

/// `Σ f_γ μ_γ` with coefficients constant on depth-`depth` cylinders.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedProductElement {
    depth: usize,
    /// Reduced word letters to coefficient values in partition order.
    terms: BTreeMap<Vec<i32>, Vec<Complex64>>,
    dagger: bool,
}

impl CrossedProductElement {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, Vec<Complex64>> {
        &self.terms
    }

    /// Coefficient function of a word, if present.
    pub fn coefficient(&self, word: &[i32]) -> Option<&[Complex64]> {
        self.terms.get(word).map(Vec::as_slice)
    }

    /// Supported on positive words only.
    pub fn is_dagger(&self) -> bool {
        self.dagger
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    word: Vec<i32>,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ElementRecord {
    depth: usize,
    dagger: bool,
    terms: Vec<TermRecord>,
}

impl Serialize for CrossedProductElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRecord {
            depth: self.depth,
            dagger: self.dagger,
            terms: self
                .terms
                .iter()
                .map(|(w, v)| TermRecord {
                    word: w.clone(),
                    values: v.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Complex time `t + i b`: the `γ`-term is scaled by `exp(i t c) e^{-b c}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeParameter {
    pub t: f64,
    pub b: f64,
}

impl TimeParameter {
    pub fn real(t: f64) -> Self {
        TimeParameter { t, b: 0.0 }
    }

    pub fn imaginary(b: f64) -> Self {
        TimeParameter { t: 0.0, b }
    }
}

/// Crossed product over a covering tree together with its KMS data.
#[derive(Debug, Clone)]
pub struct QsmSystem<'t> {
    measure: PSMeasure<'t>,
    word_bound: usize,
    partition_bound: u128,
}

impl<'t> QsmSystem<'t> {
    pub fn new(measure: PSMeasure<'t>) -> Self {
        Self::with_bounds(measure, DEFAULT_WORD_BOUND, DEFAULT_PARTITION_BOUND)
    }

    pub fn with_bounds(measure: PSMeasure<'t>, word_bound: usize, partition_bound: u128) -> Self {
        QsmSystem {
            measure,
            word_bound,
            partition_bound,
        }
    }

    pub fn tree(&self) -> &'t CoveringTree {
        self.measure.tree()
    }

    pub fn measure(&self) -> &PSMeasure<'t> {
        &self.measure
    }

    pub fn delta(&self) -> f64 {
        self.measure.delta()
    }

    pub fn word_bound(&self) -> usize {
        self.word_bound
    }

    fn word(&self, letters: &[i32]) -> Result<GroupWord> {
        self.tree().word(letters)
    }

    fn check_depth(&self, depth: usize) -> Result<()> {
        if depth == 0 {
            return Err(Error::Bound("resolution depth must be at least 1".into()));
        }
        if self.tree().partition_size(depth) > self.partition_bound {
            let mut bound = depth;
            while bound > 1 && self.tree().partition_size(bound) > self.partition_bound {
                bound -= 1;
            }
            return Err(Error::DepthOverflow { need: depth, bound });
        }
        Ok(())
    }

    fn size(&self, depth: usize) -> usize {
        self.tree().partition_size(depth) as usize
    }

    /// Smallest depth at which every word of `words` satisfies the depth
    /// invariant.
    fn min_depth<'a>(&self, words: impl IntoIterator<Item = &'a Vec<i32>>) -> Result<usize> {
        let mut k = 1;
        for w in words {
            k = k.max(self.word(w)?.realization().len() + 1);
        }
        Ok(k)
    }

    /// Validated element from explicit terms.
    pub fn element(
        &self,
        depth: usize,
        terms: Vec<(Vec<i32>, Vec<Complex64>)>,
        dagger: bool,
    ) -> Result<CrossedProductElement> {
        self.check_depth(depth)?;
        let expected = self.size(depth);
        let mut map: BTreeMap<Vec<i32>, Vec<Complex64>> = BTreeMap::new();
        for (letters, values) in terms {
            let w = self.word(&letters)?;
            if w.letters() != letters.as_slice() {
                return Err(Error::Bound(format!(
                    "word {letters:?} is not freely reduced"
                )));
            }
            if w.len() > self.word_bound {
                return Err(Error::WordTooLong {
                    len: w.len(),
                    bound: self.word_bound,
                });
            }
            if dagger && !w.is_positive() {
                return Err(Error::NotDagger(letters));
            }
            if w.realization().len() >= depth {
                return Err(Error::InsufficientDepth {
                    need: w.realization().len() + 1,
                    have: depth,
                });
            }
            if values.len() != expected {
                return Err(Error::CoefficientLength {
                    depth,
                    expected,
                    got: values.len(),
                });
            }
            let slot = map
                .entry(letters)
                .or_insert_with(|| vec![Complex64::new(0.0, 0.0); expected]);
            for (s, v) in slot.iter_mut().zip(values) {
                *s += v;
            }
        }
        Ok(CrossedProductElement {
            depth,
            terms: map,
            dagger,
        })
    }

    /// Parses the JSON form `{depth, dagger, terms: [{word, values}]}`.
    pub fn element_from_json(&self, text: &str) -> Result<CrossedProductElement> {
        let rec: ElementRecord =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let terms = rec
            .terms
            .into_iter()
            .map(|t| {
                let values = t
                    .values
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                (t.word, values)
            })
            .collect();
        self.element(rec.depth, terms, rec.dagger)
    }

    /// `f μ_e` with `f` evaluated on the depth-`depth` cylinders.
    pub fn function(
        &self,
        depth: usize,
        f: impl Fn(&[DirEdge]) -> Complex64,
    ) -> Result<CrossedProductElement> {
        self.check_depth(depth)?;
        let mut values = Vec::with_capacity(self.size(depth));
        self.tree()
            .visit_partition(depth, &mut |_, p| values.push(f(p)));
        self.element(depth, vec![(Vec::new(), values)], true)
    }

    /// The indicator of a cylinder, as a multiplication element.
    pub fn indicator(&self, c: &Cylinder) -> Result<CrossedProductElement> {
        let prefix = c.prefix().to_vec();
        self.function(c.depth(), |p| {
            Complex64::new(if p == prefix.as_slice() { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// The unit `1 μ_e` at depth 1.
    pub fn unit(&self) -> CrossedProductElement {
        self.function(1, |_| Complex64::new(1.0, 0.0))
            .expect("depth 1 is always representable")
    }

    /// `1 μ_γ` at the smallest admissible depth.
    pub fn group_element(&self, letters: &[i32]) -> Result<CrossedProductElement> {
        let w = self.word(letters)?;
        let depth = w.realization().len() + 1;
        self.check_depth(depth)?;
        let n = self.size(depth);
        self.element(
            depth,
            vec![(w.letters().to_vec(), vec![Complex64::new(1.0, 0.0); n])],
            w.is_positive(),
        )
    }

    /// Refines the coefficient functions to depth `k >= a.depth`.
    pub fn refine(&self, a: &CrossedProductElement, k: usize) -> Result<CrossedProductElement> {
        if k < a.depth {
            return Err(Error::Bound(format!(
                "cannot coarsen depth {} to {k}",
                a.depth
            )));
        }
        if k == a.depth {
            return Ok(a.clone());
        }
        self.check_depth(k)?;
        // Extensions of one cylinder are contiguous in the finer partition.
        let mut repeats = Vec::with_capacity(self.size(a.depth));
        let tree = self.tree();
        tree.visit_partition(a.depth, &mut |_, p| {
            repeats.push(tree.extension_count(*p.last().expect("nonempty"), k - a.depth) as usize)
        });
        let terms = a
            .terms
            .iter()
            .map(|(w, vals)| {
                let mut out = Vec::with_capacity(self.size(k));
                for (v, &r) in vals.iter().zip(&repeats) {
                    out.extend(std::iter::repeat_n(*v, r));
                }
                (w.clone(), out)
            })
            .collect();
        Ok(CrossedProductElement {
            depth: k,
            terms,
            dagger: a.dagger,
        })
    }

    /// `a · b` under the covariance rule, refining as needed.
    pub fn multiply(
        &self,
        a: &CrossedProductElement,
        b: &CrossedProductElement,
    ) -> Result<CrossedProductElement> {
        let tree = self.tree();
        let mut words_a = Vec::new();
        for w in a.terms.keys() {
            words_a.push(self.word(w)?);
        }
        let shift = words_a
            .iter()
            .map(|w| w.realization().len())
            .max()
            .unwrap_or(0);
        let depth = a.depth.max(b.depth + shift);
        self.check_depth(depth)?;
        let a = self.refine(a, depth)?;
        let n = self.size(depth);

        let mut out: BTreeMap<Vec<i32>, Vec<Complex64>> = BTreeMap::new();
        for (alpha, (alpha_letters, f)) in words_a.iter().zip(&a.terms) {
            // Index in b's partition of the depth-b.depth prefix of α⁻¹·C.
            let inv = tree.inverse(alpha);
            let mut pull = Vec::with_capacity(n);
            let mut q = Vec::with_capacity(depth + inv.realization().len());
            tree.visit_partition(depth, &mut |_, c| {
                let r = inv.realization();
                let j = tree.cancellation(r, c);
                q.clear();
                q.extend_from_slice(&r[..r.len() - j]);
                q.extend_from_slice(&c[j..]);
                pull.push(tree.rank_of(&q[..b.depth]));
            });
            for (beta_letters, g) in &b.terms {
                let product = self.word(&[alpha_letters.as_slice(), beta_letters].concat())?;
                if product.len() > self.word_bound {
                    return Err(Error::WordTooLong {
                        len: product.len(),
                        bound: self.word_bound,
                    });
                }
                let slot = out
                    .entry(product.letters().to_vec())
                    .or_insert_with(|| vec![Complex64::new(0.0, 0.0); n]);
                for ((s, fv), &pi) in slot.iter_mut().zip(f).zip(&pull) {
                    *s += fv * g[pi];
                }
            }
        }
        Ok(CrossedProductElement {
            depth,
            terms: out,
            dagger: a.dagger && b.dagger,
        })
    }

    /// `c_γ(C) = B(x₀, γ x₀, C)` for every depth-`depth` cylinder.
    fn cocycle(&self, letters: &[i32], depth: usize) -> Result<Vec<i64>> {
        let tree = self.tree();
        let w = self.word(letters)?;
        let moved = tree.deck_apply(&w, &tree.root());
        let r = moved.path();
        let mut out = Vec::with_capacity(self.size(depth));
        tree.visit_partition(depth, &mut |_, c| {
            let p = r.iter().zip(c).take_while(|(x, y)| x == y).count();
            out.push(2 * p as i64 - r.len() as i64);
        });
        debug_assert!(r.len() < depth);
        Ok(out)
    }

    /// `σ_{t + ib}(a)`.
    pub fn time_evolve(
        &self,
        a: &CrossedProductElement,
        p: TimeParameter,
    ) -> Result<CrossedProductElement> {
        let lambda = self.measure.lambda();
        let at_delta = p.b == self.delta();
        let mut terms = BTreeMap::new();
        for (w, vals) in &a.terms {
            if w.is_empty() {
                terms.insert(w.clone(), vals.clone());
                continue;
            }
            let cocycle = self.cocycle(w, a.depth)?;
            let scaled = vals
                .iter()
                .zip(&cocycle)
                .map(|(v, &c)| {
                    let damping = if at_delta {
                        lambda.powi(-(c as i32))
                    } else {
                        (-p.b * c as f64).exp()
                    };
                    v * Complex64::from_polar(damping, p.t * c as f64)
                })
                .collect();
            terms.insert(w.clone(), scaled);
        }
        Ok(CrossedProductElement {
            depth: a.depth,
            terms,
            dagger: a.dagger,
        })
    }

    /// `τ(a) = Σ_C f_e(C) μ(C)`.
    pub fn kms_state(&self, a: &CrossedProductElement) -> Complex64 {
        let Some(f) = a.terms.get(&Vec::new()) else {
            return Complex64::new(0.0, 0.0);
        };
        let mut total = Complex64::new(0.0, 0.0);
        let tree = self.tree();
        let lambda = self.measure.lambda();
        let z = self.measure.normalization();
        let r = &self.measure.perron().right_eigenvector;
        let scale = lambda.powi(1 - a.depth as i32) / z;
        tree.visit_partition(a.depth, &mut |i, c| {
            total += f[i] * (r[*c.last().expect("nonempty")] * scale);
        });
        total
    }

    /// `|τ(a b) - τ(b σ_{iβ}(a))|`.
    pub fn kms_residual(
        &self,
        a: &CrossedProductElement,
        b: &CrossedProductElement,
        beta: f64,
    ) -> Result<f64> {
        let ab = self.multiply(a, b)?;
        let evolved = self.time_evolve(a, TimeParameter::imaginary(beta))?;
        let ba = self.multiply(b, &evolved)?;
        Ok((self.kms_state(&ab) - self.kms_state(&ba)).norm())
    }

    /// Seeded random element: 1 to 3 terms on words of length `<= max_len`,
    /// coefficients uniform in the unit disc.
    pub fn random_element<R: Rng>(
        &self,
        rng: &mut R,
        max_len: usize,
        dagger: bool,
    ) -> Result<CrossedProductElement> {
        let words: Vec<Vec<i32>> = self
            .tree()
            .words_up_to(max_len)
            .into_iter()
            .filter(|w| !dagger || w.is_positive())
            .map(|w| w.letters().to_vec())
            .collect();
        let count = rng.gen_range(1..=3);
        let chosen: Vec<Vec<i32>> = (0..count)
            .map(|_| words[rng.gen_range(0..words.len())].clone())
            .collect();
        let depth = self.min_depth(&chosen)?;
        self.check_depth(depth)?;
        let n = self.size(depth);
        let terms = chosen
            .into_iter()
            .map(|w| {
                let values = (0..n)
                    .map(|_| {
                        let r: f64 = rng.gen::<f64>().sqrt();
                        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                        Complex64::from_polar(r, theta)
                    })
                    .collect();
                (w, values)
            })
            .collect();
        self.element(depth, terms, dagger)
    }

    /// Max-norm distance between two elements, compared at a common depth.
    pub fn max_abs_diff(&self, a: &CrossedProductElement, b: &CrossedProductElement) -> f64 {
        let k = a.depth.max(b.depth);
        let a = self.refine(a, k).expect("refinable");
        let b = self.refine(b, k).expect("refinable");
        let zero = vec![Complex64::new(0.0, 0.0); self.size(k)];
        let mut worst = 0.0f64;
        for w in a.terms.keys().chain(b.terms.keys()) {
            let x = a.terms.get(w).unwrap_or(&zero);
            let y = b.terms.get(w).unwrap_or(&zero);
            for (u, v) in x.iter().zip(y) {
                worst = worst.max((u - v).norm());
            }
        }
        worst
    }

    /// `f ∘ γ⁻¹` for the identity-word coefficient `f` of `a`, at depth
    /// `a.depth + |γ|`.
    pub fn pullback(
        &self,
        a: &CrossedProductElement,
        letters: &[i32],
    ) -> Result<CrossedProductElement> {
        let tree = self.tree();
        let inv = tree.inverse(&self.word(letters)?);
        let r = inv.realization();
        let depth = a.depth + r.len();
        self.check_depth(depth)?;
        let zero = vec![Complex64::new(0.0, 0.0); self.size(a.depth)];
        let f = a.terms.get(&Vec::new()).unwrap_or(&zero);
        let mut values = Vec::with_capacity(self.size(depth));
        tree.visit_partition(depth, &mut |_, c| {
            let q = tree.reduce_concat(r, c);
            values.push(f[tree.rank_of(&q[..a.depth])]);
        });
        self.element(depth, vec![(Vec::new(), values)], a.dagger)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn system(tree: &CoveringTree) -> QsmSystem<'_> {
        QsmSystem::new(PSMeasure::new(tree).unwrap())
    }

    #[test]
    fn unit_is_neutral() {
        let tree = CoveringTree::new(&corpus::dumbbell()).unwrap();
        let sys = system(&tree);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = sys.random_element(&mut rng, 2, false).unwrap();
        let u = sys.unit();
        assert!(sys.max_abs_diff(&sys.multiply(&u, &a).unwrap(), &a) == 0.0);
        assert!(sys.max_abs_diff(&sys.multiply(&a, &u).unwrap(), &a) == 0.0);
        assert_eq!(sys.kms_state(&u), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rose_cylinder_pullback() {
        let tree = CoveringTree::new(&corpus::rose(2)).unwrap();
        let sys = system(&tree);
        let a = sys.group_element(&[1]).unwrap();
        let chi_b = sys.indicator(&tree.cylinder(vec![1]).unwrap()).unwrap();
        let b = sys.group_element(&[2]).unwrap();
        let chi_b_mu_b = sys.multiply(&chi_b, &b).unwrap();
        let lhs = sys.multiply(&a, &chi_b_mu_b).unwrap();
        let chi_ab = sys.indicator(&tree.cylinder(vec![0, 1]).unwrap()).unwrap();
        let mu_ab = sys.group_element(&[1, 2]).unwrap();
        let rhs = sys.multiply(&chi_ab, &mu_ab).unwrap();
        assert_eq!(sys.max_abs_diff(&lhs, &rhs), 0.0);
        assert!(lhs.is_dagger());
    }

    #[test]
    fn covariance_relation() {
        let tree = CoveringTree::new(&corpus::theta()).unwrap();
        let sys = system(&tree);
        let f = sys
            .function(3, |p| {
                Complex64::new(p.len() as f64 + p[1] as f64, p[2] as f64)
            })
            .unwrap();
        let g = sys.group_element(&[1]).unwrap();
        let g_inv = sys.group_element(&[-1]).unwrap();
        let lhs = sys
            .multiply(&sys.multiply(&g, &f).unwrap(), &g_inv)
            .unwrap();
        assert_eq!(lhs.terms().len(), 1);
        let rhs = sys.pullback(&f, &[1]).unwrap();
        assert_eq!(sys.max_abs_diff(&lhs, &rhs), 0.0);
        // f ∘ γ⁻¹ on a cylinder C is f on the prefix of γ⁻¹C.
        let vals = lhs.coefficient(&[]).unwrap();
        let w = tree.word(&[-1]).unwrap();
        let fv = f.coefficient(&[]).unwrap();
        tree.visit_partition(lhs.depth(), &mut |i, c| {
            let q = tree.reduce_concat(w.realization(), c);
            assert_eq!(vals[i], fv[tree.rank_of(&q[..3])]);
        });
    }

    #[test]
    fn time_evolution_group_and_homomorphism() {
        for (_, g) in corpus::standard() {
            let tree = CoveringTree::new(&g).unwrap();
            let sys = system(&tree);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..5 {
                let a = sys.random_element(&mut rng, 2, false).unwrap();
                let b = sys.random_element(&mut rng, 2, false).unwrap();
                let (s, t) = (0.37, -1.3);
                let st = sys
                    .time_evolve(
                        &sys.time_evolve(&a, TimeParameter::real(s)).unwrap(),
                        TimeParameter::real(t),
                    )
                    .unwrap();
                let direct = sys.time_evolve(&a, TimeParameter::real(s + t)).unwrap();
                assert!(sys.max_abs_diff(&st, &direct) <= 1e-12);
                let lhs = sys
                    .time_evolve(&sys.multiply(&a, &b).unwrap(), TimeParameter::real(t))
                    .unwrap();
                let rhs = sys
                    .multiply(
                        &sys.time_evolve(&a, TimeParameter::real(t)).unwrap(),
                        &sys.time_evolve(&b, TimeParameter::real(t)).unwrap(),
                    )
                    .unwrap();
                assert!(sys.max_abs_diff(&lhs, &rhs) <= 1e-10);
            }
        }
    }

    #[test]
    fn identity_terms_do_not_evolve() {
        let tree = CoveringTree::new(&corpus::k4()).unwrap();
        let sys = system(&tree);
        let f = sys
            .function(2, |p| Complex64::new(p[0] as f64, 1.0))
            .unwrap();
        let e = sys
            .time_evolve(&f, TimeParameter { t: 3.0, b: 0.4 })
            .unwrap();
        assert_eq!(e, f);
    }

    #[test]
    fn kms_state_values() {
        let tree = CoveringTree::new(&corpus::k4()).unwrap();
        let sys = system(&tree);
        let c = tree.partition(2).unwrap()[3].clone();
        let chi = sys.indicator(&c).unwrap();
        assert!((sys.kms_state(&chi).re - sys.measure().measure(&c)).abs() < 1e-15);
        assert_eq!(
            sys.kms_state(&sys.group_element(&[2]).unwrap()),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn kms_condition_at_critical_exponent_only() {
        for (_, g) in corpus::standard() {
            let tree = CoveringTree::new(&g).unwrap();
            let sys = system(&tree);
            let delta = sys.delta();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..10 {
                let a = sys.random_element(&mut rng, 2, false).unwrap();
                let b = sys.random_element(&mut rng, 2, false).unwrap();
                assert!(sys.kms_residual(&a, &b, delta).unwrap() <= 1e-9);
            }
            let a = sys.group_element(&[1]).unwrap();
            let b = sys.group_element(&[-1]).unwrap();
            for shift in [-0.5, -0.1, 0.1, 0.5] {
                assert!(sys.kms_residual(&a, &b, delta + shift).unwrap() > 1e-3);
            }
        }
    }

    #[test]
    fn commutative_pairs_satisfy_kms_at_every_beta() {
        let tree = CoveringTree::new(&corpus::theta()).unwrap();
        let sys = system(&tree);
        let f = sys
            .function(2, |p| Complex64::new(p[1] as f64, 0.0))
            .unwrap();
        let g = sys
            .function(3, |p| Complex64::new(1.0, p[2] as f64))
            .unwrap();
        for beta in [0.0, 0.3, 2.0] {
            assert!(sys.kms_residual(&f, &g, beta).unwrap() < 1e-15);
        }
    }

    #[test]
    fn associativity_on_short_words() {
        let tree = CoveringTree::new(&corpus::dumbbell()).unwrap();
        let sys = system(&tree);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let a = sys.random_element(&mut rng, 1, false).unwrap();
            let b = sys.random_element(&mut rng, 1, false).unwrap();
            let c = sys.random_element(&mut rng, 1, false).unwrap();
            let l = sys.multiply(&sys.multiply(&a, &b).unwrap(), &c).unwrap();
            let r = sys.multiply(&a, &sys.multiply(&b, &c).unwrap()).unwrap();
            assert!(sys.max_abs_diff(&l, &r) <= 1e-12);
        }
    }

    #[test]
    fn dagger_closure_and_validation() {
        let tree = CoveringTree::new(&corpus::rose(3)).unwrap();
        let sys = system(&tree);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = sys.random_element(&mut rng, 2, true).unwrap();
        let b = sys.random_element(&mut rng, 2, true).unwrap();
        assert!(sys.multiply(&a, &b).unwrap().is_dagger());
        let n = tree.partition_size(2) as usize;
        let bad = sys.element(2, vec![(vec![-1], vec![Complex64::new(1.0, 0.0); n])], true);
        assert_eq!(bad, Err(Error::NotDagger(vec![-1])));
        let short = sys.element(2, vec![(vec![1], vec![Complex64::new(1.0, 0.0); 3])], false);
        assert!(matches!(short, Err(Error::CoefficientLength { .. })));
        let long = sys.group_element(&[1, 2, 3]).unwrap();
        assert!(matches!(
            sys.multiply(&long, &long),
            Err(Error::WordTooLong { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let tree = CoveringTree::new(&corpus::theta()).unwrap();
        let sys = system(&tree);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = sys.random_element(&mut rng, 2, false).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(sys.element_from_json(&text).unwrap(), a);
    }
}
