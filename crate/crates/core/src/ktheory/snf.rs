//! Smith normal form over the integers with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AbelianGroup, IntegerMatrix};

/// `u * m * v == d` with `d` diagonal, `d[i][i] | d[i+1][i+1]`, nonnegative
/// diagonal, and `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Cokernel `Z^rows / im(M)` in invariant-factor form.
    pub fn cokernel(&self) -> AbelianGroup {
        let rank = self.rank();
        let torsion = self
            .diagonal()
            .into_iter()
            .take(rank)
            .filter(|d| !d.is_one())
            .collect();
        AbelianGroup::new(self.d.rows() - rank, torsion)
    }

    /// Order of the class of `x` in the cokernel; `None` if it has infinite
    /// order.
    pub fn class_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let y = self.u.apply(x);
        let diag = self.diagonal();
        let mut order = BigInt::one();
        for (i, yi) in y.iter().enumerate() {
            let di = diag.get(i).cloned().unwrap_or_default();
            if di.is_zero() {
                if !yi.is_zero() {
                    return None;
                }
                continue;
            }
            let g = yi.gcd(&di);
            let local = &di / g;
            order = order.lcm(&local);
        }
        Some(order)
    }

    /// Coordinates of the class of `x` in the decomposition
    /// `Z/d_1 + ... + Z/d_r + Z^(rows - r)`, reduced modulo each factor.
    pub fn class_coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.u.apply(x);
        let diag = self.diagonal();
        y.into_iter()
            .enumerate()
            .map(|(i, yi)| match diag.get(i) {
                Some(d) if !d.is_zero() => yi.mod_floor(d),
                _ => yi,
            })
            .collect()
    }
}

/// Computes the Smith normal form of `m` exactly.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                while !d[(i, t)].is_zero() {
                    let q = -(&d[(i, t)] / &d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        d.swap_rows(i, t);
                        u.swap_rows(i, t);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                while !d[(t, j)].is_zero() {
                    let q = -(&d[(t, j)] / &d[(t, t)]);
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(j, t);
                        v.swap_cols(j, t);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { d, u, v }
}

fn min_abs_entry(d: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                best = Some((a, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        // Invariant factors: gcd of entries = 2, |det| / 2 = 4.
        let s = check(&IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), ints(&[2, 4]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntegerMatrix::zeros(2, 3));
        assert_eq!(s.d, IntegerMatrix::zeros(2, 3));
        assert_eq!(s.cokernel(), AbelianGroup::new(2, vec![]));
    }

    #[test]
    fn rectangular_and_negative() {
        let s = check(&IntegerMatrix::from_rows(&[
            vec![-3, 0, 6],
            vec![0, 9, -12],
        ]));
        assert_eq!(s.diagonal(), ints(&[3, 3]));
        let s = check(&IntegerMatrix::from_rows(&[vec![4], vec![6], vec![10]]));
        assert_eq!(s.diagonal(), ints(&[2]));
        assert_eq!(s.cokernel(), AbelianGroup::new(2, ints(&[2])));
    }

    #[test]
    fn class_order_in_cyclic_group() {
        let s = check(&IntegerMatrix::from_rows(&[vec![6]]));
        assert_eq!(s.class_order(&ints(&[4])), Some(BigInt::from(3)));
        assert_eq!(s.class_order(&ints(&[6])), Some(BigInt::one()));
        let free = check(&IntegerMatrix::zeros(1, 1));
        assert_eq!(free.class_order(&ints(&[1])), None);
    }
}
