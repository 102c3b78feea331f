//! Exact integer linear algebra and the K-theoretic classification verdicts.
//!
//! K₀ of a Cuntz–Krieger algebra `O_A` is computed as the cokernel of
//! `I - Aᵀ` on the free abelian group indexed by the states of `A`. For the
//! boundary algebra of a graph with Betti number `g`, `A` is the
//! `2g × 2g` non-backtracking matrix of the rose with `g` petals:
//!
//! ```text
//!     ⎡ J      J - I ⎤
//!     ⎣ J - I  J     ⎦      (J = all-ones g × g)
//! ```
//!
//! and the answer is `Z^g ⊕ Z/(g-1)`, with the unit class generating the
//! cyclic part.

mod matrix;
mod snf;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, SmithForm};

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d₁ ⊕ ... ⊕ Z/d_k` with
/// `d₁ | d₂ | ... | d_k` and every `dᵢ ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// # Panics
    ///
    /// If the torsion list is not an invariant-factor chain.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        assert!(
            torsion.iter().all(|d| *d >= BigInt::from(2)),
            "torsion factor < 2"
        );
        assert!(
            torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])),
            "torsion is not a divisibility chain"
        );
        AbelianGroup { free_rank, torsion }
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub(crate) fn serialize_bigints<S: Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(small) => seq.serialize_element(&small)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// K₀ of the boundary algebra together with the order of the unit class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryK0 {
    pub group: AbelianGroup,
    #[serde(serialize_with = "serialize_bigint")]
    pub unit_class_order: BigInt,
    /// Whether the unit class generates the torsion subgroup.
    pub unit_generates_torsion: bool,
}

fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(small) => s.serialize_i64(small),
        None => s.serialize_str(&x.to_string()),
    }
}

/// The `2g × 2g` Cuntz–Krieger matrix of the boundary algebra.
pub fn boundary_ck_matrix(g: usize) -> IntegerMatrix {
    let n = 2 * g;
    let mut a = IntegerMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let same_block = (i < g) == (j < g);
            let diagonal = i % g == j % g;
            let v = if same_block || !diagonal { 1 } else { 0 };
            a[(i, j)] = BigInt::from(v);
        }
    }
    a
}

/// K₀ of the boundary algebra of a graph with Betti number `g`.
pub fn k0_boundary_algebra(g: usize) -> Result<BoundaryK0> {
    if g < 2 {
        return Err(Error::BettiTooSmall(g));
    }
    let a = boundary_ck_matrix(g);
    let m = ck_relation_matrix(&a.transpose());
    let snf = smith_normal_form(&m);
    let group = snf.cokernel();
    let unit = vec![BigInt::one(); 2 * g];
    let unit_class_order = snf
        .class_order(&unit)
        .expect("the unit has finite order in K0 of the boundary algebra");
    let unit_generates_torsion =
        unit_class_order == group.torsion_order() && group.torsion.len() <= 1;
    Ok(BoundaryK0 {
        group,
        unit_class_order,
        unit_generates_torsion,
    })
}

/// `I - a` for a square matrix `a`.
fn ck_relation_matrix(a: &IntegerMatrix) -> IntegerMatrix {
    let mut m = IntegerMatrix::identity(a.rows());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m[(i, j)] -= &a[(i, j)];
        }
    }
    m
}

/// Direction of one edge: `Forward` runs from `ends.0` to `ends.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeDirection {
    Forward,
    Backward,
}

/// Directed vertex adjacency matrix: entry `(u, v)` counts edges oriented
/// `u → v`; a loop counts once.
pub fn directed_adjacency(g: &Multigraph, orientation: &[EdgeDirection]) -> Result<IntegerMatrix> {
    if orientation.len() != g.edge_count() {
        return Err(Error::Orientation {
            expected: g.edge_count(),
            got: orientation.len(),
        });
    }
    let n = g.vertex_count();
    let mut a = IntegerMatrix::zeros(n, n);
    for (e, dir) in g.edges().iter().zip(orientation) {
        let (s, t) = match dir {
            EdgeDirection::Forward => e.ends,
            EdgeDirection::Backward => (e.ends.1, e.ends.0),
        };
        a[(s, t)] += 1;
    }
    Ok(a)
}

/// K₀ of the vertex Cuntz–Krieger (graph) algebra of an oriented graph:
/// `Z^|V| / im(1 - A)`.
pub fn k0_vertex_ck(g: &Multigraph, orientation: &[EdgeDirection]) -> Result<AbelianGroup> {
    let a = directed_adjacency(g, orientation)?;
    Ok(smith_normal_form(&ck_relation_matrix(&a)).cokernel())
}

/// The nine equivalent conditions, in order (a) through (i).
pub const THEOREM1_CONDITIONS: [(&str, &str); 9] = [
    ("a", "boundary algebras strictly isomorphic"),
    ("b", "boundary algebras stably isomorphic"),
    ("c", "boundary algebras strongly Morita equivalent"),
    ("d", "dagger algebras isomorphic"),
    ("e", "boundary systems piecewise conjugate"),
    ("f", "boundary systems conjugate"),
    ("g", "boundary actions locally isomorphic"),
    ("h", "boundary actions isomorphic"),
    ("i", "equal first Betti numbers"),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub verdict: bool,
    pub conditions: BTreeMap<String, ConditionVerdict>,
    pub g_x: usize,
    pub g_y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub statement: String,
    pub holds: bool,
}

/// Decides every boundary-algebra equivalence between two admissible graphs
/// through the Betti number criterion.
pub fn theorem1_oracle(x: &Multigraph, y: &Multigraph) -> Result<Theorem1Report> {
    let g_x = x.require_admissible()?.get();
    let g_y = y.require_admissible()?.get();
    let verdict = g_x == g_y;
    let conditions = THEOREM1_CONDITIONS
        .iter()
        .map(|(label, statement)| {
            (
                label.to_string(),
                ConditionVerdict {
                    statement: statement.to_string(),
                    holds: verdict,
                },
            )
        })
        .collect();
    Ok(Theorem1Report {
        verdict,
        conditions,
        g_x,
        g_y,
    })
}

/// `gcd(|E|, g - 1)`, the invariant separating strict from stable
/// isomorphism of edge Cuntz–Krieger algebras.
pub fn edge_gcd_invariant(g: &Multigraph) -> Result<usize> {
    let betti = g.require_admissible()?.get();
    Ok(g.edge_count().gcd(&(betti - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeCkVerdict {
    pub stable: bool,
    pub strict: bool,
}

/// Stable and strict isomorphism of the Cuntz–Krieger algebras of the
/// Bass–Hashimoto operators.
pub fn edge_ck_strict_iso(x: &Multigraph, y: &Multigraph) -> Result<EdgeCkVerdict> {
    let g_x = x.require_admissible()?.get();
    let g_y = y.require_admissible()?.get();
    let stable = g_x == g_y;
    let strict = stable && edge_gcd_invariant(x)? == edge_gcd_invariant(y)?;
    Ok(EdgeCkVerdict { stable, strict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn boundary_k0_small_cases() {
        let k = k0_boundary_algebra(2).unwrap();
        assert_eq!(k.group, AbelianGroup::new(2, vec![]));
        assert!(k.unit_class_order.is_one());

        let k = k0_boundary_algebra(3).unwrap();
        assert_eq!(k.group, AbelianGroup::new(3, ints(&[2])));
        assert_eq!(k.unit_class_order, BigInt::from(2));
        assert!(k.unit_generates_torsion);
    }

    #[test]
    fn boundary_k0_rejects_small_g() {
        assert_eq!(k0_boundary_algebra(1), Err(Error::BettiTooSmall(1)));
    }

    #[test]
    fn boundary_matrix_is_rose_nonbacktracking() {
        let a = boundary_ck_matrix(3);
        assert!(a.row_sums().iter().all(|s| *s == BigInt::from(5)));
        assert_eq!(a[(0, 3)], BigInt::from(0));
        assert_eq!(a[(0, 4)], BigInt::from(1));
    }

    #[test]
    fn vertex_ck_examples() {
        let rose = corpus::rose(3);
        let k = k0_vertex_ck(&rose, &[EdgeDirection::Forward; 3]).unwrap();
        assert_eq!(k, AbelianGroup::new(0, ints(&[2])));

        let cycle = Multigraph::from_edge_list(2, &[(0, 1), (1, 0)]).unwrap();
        let k = k0_vertex_ck(&cycle, &[EdgeDirection::Forward; 2]).unwrap();
        assert_eq!(k, AbelianGroup::new(1, vec![]));

        let loops = Multigraph::from_edge_list(3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let k = k0_vertex_ck(&loops, &[EdgeDirection::Backward; 3]).unwrap();
        assert_eq!(k, AbelianGroup::new(3, vec![]));

        assert!(matches!(
            k0_vertex_ck(&loops, &[EdgeDirection::Forward]),
            Err(Error::Orientation { .. })
        ));
    }

    #[test]
    fn vertex_ck_of_rose_matches_boundary_torsion() {
        for g in 2..6 {
            let k = k0_vertex_ck(&corpus::rose(g), &vec![EdgeDirection::Forward; g]).unwrap();
            let expected = if g == 2 {
                vec![]
            } else {
                vec![BigInt::from(g - 1)]
            };
            assert_eq!(k, AbelianGroup::new(0, expected));
        }
    }

    #[test]
    fn betti_oracle_examples() {
        let r = theorem1_oracle(&corpus::theta(), &corpus::dumbbell()).unwrap();
        assert!(r.verdict);
        assert_eq!(r.conditions.len(), 9);
        assert!(r.conditions.values().all(|c| c.holds));
        let r = theorem1_oracle(&corpus::k4(), &corpus::theta()).unwrap();
        assert!(!r.verdict);
        assert!(r.conditions.values().all(|c| !c.holds));
        assert_eq!((r.g_x, r.g_y), (3, 2));
        let k4 = corpus::k4();
        assert!(theorem1_oracle(&k4, &k4).unwrap().verdict);
        assert!(theorem1_oracle(&corpus::rose(1), &k4).is_err());
    }

    #[test]
    fn edge_ck_examples() {
        let v = edge_ck_strict_iso(&corpus::k4(), &corpus::rose(3)).unwrap();
        assert_eq!(
            v,
            EdgeCkVerdict {
                stable: true,
                strict: false
            }
        );
        let v = edge_ck_strict_iso(&corpus::theta(), &corpus::dumbbell()).unwrap();
        assert_eq!(
            v,
            EdgeCkVerdict {
                stable: true,
                strict: true
            }
        );
        let k4 = corpus::k4();
        assert_eq!(
            edge_ck_strict_iso(&k4, &k4).unwrap(),
            EdgeCkVerdict {
                stable: true,
                strict: true
            }
        );
    }
}
