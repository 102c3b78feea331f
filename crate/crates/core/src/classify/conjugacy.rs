//! Boundary conjugacies between covering trees of equal rank.
//!
//! A boundary point of `X` is coded by the infinite reduced word of
//! non-tree edges its ray crosses. Relabelling letters through a pairing of
//! generators and realizing the new word in `Y` gives a homeomorphism
//! `Φ: Λ_X → Λ_Y` intertwining the two deck actions. At finite resolution a
//! cylinder of `X` is a finite union of Cayley cylinders, each of which maps
//! to a single cylinder of `Y`.

use serde::Serialize;

use crate::covering_tree::{CoveringTree, Cylinder, Step};
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::nonbacktracking::DirEdge;
use crate::qsm::{CrossedProductElement, QsmSystem};

/// A signed permutation: generator `i` of `X` goes to the letter
/// `pairing[i - 1]` of `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Pairing(Vec<i32>);

impl Pairing {
    pub fn identity(rank: usize) -> Self {
        Pairing((1..=rank as i32).collect())
    }

    pub fn new(images: Vec<i32>) -> Result<Self> {
        let g = images.len() as i32;
        let mut seen = vec![false; images.len()];
        for &l in &images {
            if l == 0 || l.abs() > g {
                return Err(Error::InvalidPairing(format!("letter {l} out of range")));
            }
            let slot = &mut seen[(l.unsigned_abs() - 1) as usize];
            if *slot {
                return Err(Error::InvalidPairing(format!("letter {l} used twice")));
            }
            *slot = true;
        }
        Ok(Pairing(images))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[i32] {
        &self.0
    }

    /// Image of a signed letter.
    pub fn apply(&self, letter: i32) -> i32 {
        letter.signum() * self.0[(letter.unsigned_abs() - 1) as usize]
    }

    pub fn apply_word(&self, word: &[i32]) -> Vec<i32> {
        word.iter().map(|&l| self.apply(l)).collect()
    }

    pub fn inverse(&self) -> Pairing {
        let mut inv = vec![0; self.0.len()];
        for (i, &l) in self.0.iter().enumerate() {
            inv[(l.unsigned_abs() - 1) as usize] = l.signum() * (i as i32 + 1);
        }
        Pairing(inv)
    }
}

/// `Φ` at cylinder resolution.
#[derive(Debug, Clone)]
pub struct ConjugacyMap {
    source: CoveringTree,
    target: CoveringTree,
    pairing: Pairing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivarianceViolation {
    pub letter: i32,
    pub cylinder: Vec<Step>,
}

/// Set-level comparison of `Φ(γ·C)` with `σ(γ)·Φ(C)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub max_depth: usize,
    pub checked: usize,
    pub violations: usize,
    /// The first few violations.
    pub examples: Vec<EquivarianceViolation>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// A conjugacy together with its equivariance report.
#[derive(Debug, Clone)]
pub struct Conjugacy {
    pub map: ConjugacyMap,
    pub report: EquivarianceReport,
}

const MAX_EXAMPLES: usize = 5;

/// Builds `Φ` for a generator pairing and checks equivariance on every
/// cylinder of depth `1..=max_depth`.
pub fn build_conjugacy(
    gx: &Multigraph,
    gy: &Multigraph,
    pairing: &Pairing,
    max_depth: usize,
) -> Result<Conjugacy> {
    let bx = gx.require_admissible()?.get();
    let by = gy.require_admissible()?.get();
    if bx != by {
        return Err(Error::BettiMismatch(bx, by));
    }
    if pairing.rank() != bx {
        return Err(Error::InvalidPairing(format!(
            "pairing has {} letters for rank {bx}",
            pairing.rank()
        )));
    }
    let map = ConjugacyMap::new(
        CoveringTree::new(gx)?,
        CoveringTree::new(gy)?,
        pairing.clone(),
    );
    let report = map.equivariance(max_depth);
    Ok(Conjugacy { map, report })
}

impl ConjugacyMap {
    pub fn new(source: CoveringTree, target: CoveringTree, pairing: Pairing) -> Self {
        assert_eq!(source.rank(), pairing.rank());
        assert_eq!(target.rank(), pairing.rank());
        ConjugacyMap {
            source,
            target,
            pairing,
        }
    }

    pub fn source(&self) -> &CoveringTree {
        &self.source
    }

    pub fn target(&self) -> &CoveringTree {
        &self.target
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    /// `Φ⁻¹`, built from the inverse pairing.
    pub fn inverse(&self) -> ConjugacyMap {
        ConjugacyMap::new(
            self.target.clone(),
            self.source.clone(),
            self.pairing.inverse(),
        )
    }

    /// `Φ(C)` as a canonical union of target cylinder prefixes.
    pub fn image(&self, c: &Cylinder) -> Vec<Vec<DirEdge>> {
        self.image_path(c.prefix())
    }

    fn image_path(&self, path: &[DirEdge]) -> Vec<Vec<DirEdge>> {
        let x = &self.source;
        let edges = x.edges();
        let span = x.spanning();
        let last_cut = path.iter().rposition(|&d| span.letter_of(d).is_some());
        let (vertex, tail) = match last_cut {
            Some(i) => (edges.terminus(path[i]), &path[i + 1..]),
            None => (x.base(), path),
        };
        let code = x.encode_path(path);
        let to_vertex = x.inverse_path(&span.tree_paths[vertex]);
        let g = x.rank() as i32;
        let mut pieces = Vec::new();
        for letter in (1..=g).flat_map(|i| [i, -i]) {
            if code.last() == Some(&-letter) {
                continue;
            }
            let forward = span.generator_edges[(letter.unsigned_abs() - 1) as usize];
            let f = if letter > 0 {
                forward
            } else {
                edges.reverse(forward)
            };
            let approach = x.reduce_concat(&to_vertex, &span.tree_paths[edges.origin(f)]);
            if !approach.starts_with(tail) {
                continue;
            }
            let mut word = code.clone();
            word.push(letter);
            pieces.push(self.target_prefix(&self.pairing.apply_word(&word)));
        }
        self.target.canonical_union(pieces)
    }

    /// Realization of a nonempty reduced target word, cut after its last
    /// non-tree edge: the cylinder of rays whose code starts with `word`.
    fn target_prefix(&self, word: &[i32]) -> Vec<DirEdge> {
        let w = self
            .target
            .word(word)
            .expect("pairing preserves the alphabet");
        let r = w.realization();
        let span = self.target.spanning();
        let end = r
            .iter()
            .rposition(|&d| span.letter_of(d).is_some())
            .expect("nonempty words cross a non-tree edge");
        r[..=end].to_vec()
    }

    /// `Φ` applied to a union of source cylinder prefixes.
    fn image_union(&self, pieces: &[Vec<DirEdge>]) -> Vec<Vec<DirEdge>> {
        let mut out = Vec::new();
        for p in pieces {
            if p.is_empty() {
                return vec![Vec::new()];
            }
            out.extend(self.image_path(p));
        }
        self.target.canonical_union(out)
    }

    pub fn equivariance(&self, max_depth: usize) -> EquivarianceReport {
        let x = &self.source;
        let y = &self.target;
        let g = x.rank() as i32;
        let mut report = EquivarianceReport {
            max_depth,
            checked: 0,
            violations: 0,
            examples: Vec::new(),
        };
        for depth in 1..=max_depth {
            for c in x.partition(depth).expect("depth >= 1") {
                let phi_c = self.image(&c);
                for letter in (1..=g).flat_map(|i| [i, -i]) {
                    let gx = x.word(&[letter]).expect("letter in range");
                    let gy = y
                        .word(&[self.pairing.apply(letter)])
                        .expect("letter in range");
                    let moved: Vec<Vec<DirEdge>> = x
                        .image_pieces(&gx, &c)
                        .into_iter()
                        .map(|p| p.prefix().to_vec())
                        .collect();
                    let lhs = self.image_union(&moved);
                    let mut rhs = Vec::new();
                    for d in &phi_c {
                        let d = y.cylinder(d.clone()).expect("valid target prefix");
                        rhs.extend(
                            y.image_pieces(&gy, &d)
                                .into_iter()
                                .map(|p| p.prefix().to_vec()),
                        );
                    }
                    let rhs = y.canonical_union(rhs);
                    report.checked += 1;
                    if lhs != rhs {
                        report.violations += 1;
                        if report.examples.len() < MAX_EXAMPLES {
                            report.examples.push(EquivarianceViolation {
                                letter,
                                cylinder: x.steps(c.prefix()),
                            });
                        }
                    }
                }
            }
        }
        report
    }
}

/// `Σ f_w μ_w ↦ Σ (f_w ∘ Φ⁻¹) μ_{σ(w)}`, an element of the target system.
///
/// The target resolution is the smallest depth at which every target
/// cylinder pulls back into a single cylinder of the source resolution.
pub fn algebra_transport(
    phi: &ConjugacyMap,
    target: &QsmSystem<'_>,
    a: &CrossedProductElement,
) -> Result<CrossedProductElement> {
    let y = target.tree();
    if y.graph() != phi.target().graph() || y.base() != phi.target().base() {
        return Err(Error::InvalidPairing(
            "target system does not match the conjugacy".into(),
        ));
    }
    let x = phi.source();
    let inverse = phi.inverse();
    let words: Vec<Vec<i32>> = a
        .terms()
        .keys()
        .map(|w| phi.pairing().apply_word(w))
        .collect();
    let mut depth = a.depth();
    for w in &words {
        depth = depth.max(y.word(w)?.realization().len() + 1);
    }
    let n_y = loop {
        let size = y.partition_size(depth);
        if size > crate::qsm::DEFAULT_PARTITION_BOUND {
            return Err(Error::DepthOverflow {
                need: depth,
                bound: depth - 1,
            });
        }
        let mut ok = true;
        let mut source_rank = Vec::with_capacity(size as usize);
        y.visit_partition(depth, &mut |_, d| {
            if !ok {
                return;
            }
            let pre = inverse.image_path(d);
            let first = &pre[0];
            if first.len() < a.depth()
                || pre
                    .iter()
                    .any(|p| p.len() < a.depth() || p[..a.depth()] != first[..a.depth()])
            {
                ok = false;
                return;
            }
            source_rank.push(x.rank_of(&first[..a.depth()]));
        });
        if ok {
            break source_rank;
        }
        depth += 1;
    };
    let terms = a
        .terms()
        .iter()
        .zip(&words)
        .map(|((_, f), w)| (w.clone(), n_y.iter().map(|&i| f[i]).collect()))
        .collect();
    let dagger = a.is_dagger() && words.iter().all(|w| w.iter().all(|&l| l > 0));
    target.element(depth, terms, dagger)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::boundary_measure::PSMeasure;
    use crate::corpus;

    #[test]
    fn pairing_validation_and_inverse() {
        assert!(Pairing::new(vec![1, 1]).is_err());
        assert!(Pairing::new(vec![3, 1]).is_err());
        let p = Pairing::new(vec![-2, 1]).unwrap();
        let q = p.inverse();
        for l in [1, -1, 2, -2] {
            assert_eq!(q.apply(p.apply(l)), l);
        }
    }

    #[test]
    fn identity_conjugacy_is_identity() {
        let g = corpus::dumbbell();
        let c = build_conjugacy(&g, &g, &Pairing::identity(2), 5).unwrap();
        assert!(c.report.passed());
        for cyl in c.map.source().partition(4).unwrap() {
            assert_eq!(c.map.image(&cyl), vec![cyl.prefix().to_vec()]);
        }
    }

    #[test]
    fn rose_to_theta_is_equivariant() {
        let c =
            build_conjugacy(&corpus::rose(2), &corpus::theta(), &Pairing::identity(2), 6).unwrap();
        assert!(c.report.passed(), "{:?}", c.report);
        assert!(c.report.checked > 0);
    }

    #[test]
    fn signed_pairing_is_equivariant() {
        let p = Pairing::new(vec![-2, 1]).unwrap();
        let c = build_conjugacy(&corpus::theta(), &corpus::dumbbell(), &p, 5).unwrap();
        assert!(c.report.passed(), "{:?}", c.report);
    }

    #[test]
    fn images_partition_the_target() {
        let c = build_conjugacy(
            &corpus::dumbbell(),
            &corpus::theta(),
            &Pairing::identity(2),
            1,
        )
        .unwrap();
        let all: Vec<Vec<DirEdge>> = c
            .map
            .source()
            .partition(4)
            .unwrap()
            .iter()
            .flat_map(|cyl| c.map.image(cyl))
            .collect();
        assert_eq!(
            c.map.target().canonical_union(all),
            vec![Vec::<DirEdge>::new()]
        );
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        assert_eq!(
            build_conjugacy(&corpus::k4(), &corpus::theta(), &Pairing::identity(3), 2).err(),
            Some(Error::BettiMismatch(3, 2))
        );
    }

    #[test]
    fn transport_is_a_homomorphism() {
        let c =
            build_conjugacy(&corpus::theta(), &corpus::rose(2), &Pairing::identity(2), 1).unwrap();
        let sx = QsmSystem::new(PSMeasure::new(c.map.source()).unwrap());
        let sy = QsmSystem::new(PSMeasure::new(c.map.target()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let a = sx.random_element(&mut rng, 1, false).unwrap();
            let b = sx.random_element(&mut rng, 1, false).unwrap();
            let ab = sx.multiply(&a, &b).unwrap();
            let lhs = algebra_transport(&c.map, &sy, &ab).unwrap();
            let rhs = sy
                .multiply(
                    &algebra_transport(&c.map, &sy, &a).unwrap(),
                    &algebra_transport(&c.map, &sy, &b).unwrap(),
                )
                .unwrap();
            assert!(sy.max_abs_diff(&lhs, &rhs) <= 1e-10);
        }
        let unit = algebra_transport(&c.map, &sy, &sx.unit()).unwrap();
        assert_eq!(sy.max_abs_diff(&unit, &sy.unit()), 0.0);
    }

    #[test]
    fn identity_transport_preserves_elements_and_state() {
        let g = corpus::k4();
        let c = build_conjugacy(&g, &g, &Pairing::identity(3), 1).unwrap();
        let sx = QsmSystem::new(PSMeasure::new(c.map.source()).unwrap());
        let sy = QsmSystem::new(PSMeasure::new(c.map.target()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = sx.random_element(&mut rng, 2, false).unwrap();
        let t = algebra_transport(&c.map, &sy, &a).unwrap();
        assert_eq!(sy.max_abs_diff(&t, &a), 0.0);
        let f = sx
            .function(3, |p| Complex64::new(p[2] as f64, -(p[0] as f64)))
            .unwrap();
        let tf = algebra_transport(&c.map, &sy, &f).unwrap();
        assert!((sy.kms_state(&tf) - sx.kms_state(&f)).norm() < 1e-15);
    }
}
