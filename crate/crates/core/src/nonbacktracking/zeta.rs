//! Reciprocal Ihara zeta function, by two independent exact routes.
//!
//! Edge form: `det(I - uT)` from the characteristic polynomial of the
//! Bass–Hashimoto matrix (Faddeev–LeVerrier, exact integer division).
//!
//! Vertex form: `(1 - u²)^(|E|-|V|) det(I - uA + u²(D - I))` by
//! fraction-free elimination over `Z[u]`, where `A` is the undirected
//! adjacency matrix with loops counted twice on the diagonal and `D` the
//! degree matrix.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{bass_hashimoto_unchecked, DirectedEdgeSet, Poly};
use crate::error::{Error, Result};
use crate::ktheory::IntegerMatrix;
use crate::multigraph::Multigraph;

/// `det(I - uT)` with exact coefficients; `ihara_zeta_vertex_form` must agree
/// coefficient for coefficient, otherwise this fails hard.
pub fn ihara_zeta_recip(g: &Multigraph) -> Result<Poly> {
    g.require_admissible()?;
    let t = bass_hashimoto_unchecked(&DirectedEdgeSet::new(g));
    let edge = zeta_edge_form(&t);
    let vertex = ihara_zeta_vertex_form(g);
    if edge != vertex {
        return Err(Error::ZetaMismatch {
            edge_form: edge.coeffs().iter().map(ToString::to_string).collect(),
            vertex_form: vertex.coeffs().iter().map(ToString::to_string).collect(),
        });
    }
    Ok(edge)
}

/// `det(I - uT)` for any square integer matrix `T`.
pub fn zeta_edge_form(t: &IntegerMatrix) -> Poly {
    let n = t.rows();
    let charpoly = characteristic_polynomial(t);
    // det(I - uT) = u^n · charpoly(1/u): reverse the coefficients.
    Poly::new((0..=n).map(|j| charpoly[n - j].clone()).collect())
}

/// Coefficients `c_0..=c_n` of `det(xI - A)`.
fn characteristic_polynomial(a: &IntegerMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = 1.into();
    let mut m = IntegerMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        let am = a * &next;
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        let k_big = BigInt::from(k);
        debug_assert!((&trace % &k_big).is_zero());
        c[n - k] = -(trace / k_big);
        m = next;
    }
    c
}

/// The three-term determinant form of the reciprocal zeta function.
pub fn ihara_zeta_vertex_form(g: &Multigraph) -> Poly {
    let n = g.vertex_count();
    let mut adj = vec![vec![0i64; n]; n];
    for e in g.edges() {
        let (a, b) = e.ends;
        adj[a][b] += 1;
        adj[b][a] += 1;
    }
    let degrees = g.degrees();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Poly::from_i64(&[1, -adj[i][i], degrees[i] as i64 - 1])
                    } else {
                        Poly::from_i64(&[0, -adj[i][j]])
                    }
                })
                .collect()
        })
        .collect();

    // Leading principal minors are 1 at u = 0, so no pivoting is needed
    // and every Bareiss divisor has constant term 1.
    let mut prev = Poly::one();
    for k in 0..n.saturating_sub(1) {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 {
        Poly::one()
    } else {
        m[n - 1][n - 1].clone()
    };

    let exponent = g.edge_count() as i64 - n as i64;
    let one_minus_u2 = Poly::from_i64(&[1, 0, -1]);
    if exponent >= 0 {
        &one_minus_u2.pow(exponent as usize) * &det
    } else {
        det.div_exact(&one_minus_u2.pow((-exponent) as usize))
            .expect("vertex form divisible for trees and cycles")
    }
}
