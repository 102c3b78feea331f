use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ktheory::IntegerMatrix;

/// Perron root and right eigenvector of a non-backtracking matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronData {
    pub lambda: f64,
    /// Positive, normalized to unit sum, indexed by directed edge.
    pub right_eigenvector: Vec<f64>,
    /// Critical exponent `ln lambda`.
    pub delta: f64,
    /// `‖T r - λ r‖∞`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PerronOptions {
    pub max_iterations: usize,
    /// Target for `‖T r - λ r‖∞ / (λ ‖r‖∞)`.
    pub tolerance: f64,
}

impl Default for PerronOptions {
    fn default() -> Self {
        PerronOptions {
            max_iterations: 200_000,
            tolerance: 1e-14,
        }
    }
}

pub fn perron_root(t: &IntegerMatrix) -> Result<PerronData> {
    perron_root_with(t, PerronOptions::default())
}

/// Shifted power iteration on `T + I` from the all-ones vector.
///
/// The shift makes an irreducible but periodic `T` (e.g. the theta graph,
/// where every closed non-backtracking walk has even length) primitive
/// without moving its Perron vector.
pub fn perron_root_with(t: &IntegerMatrix, opts: PerronOptions) -> Result<PerronData> {
    let n = t.rows();
    assert_eq!(n, t.cols(), "Perron root of a non-square matrix");
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|j| {
                    let v = t[(i, j)].to_f64().unwrap_or(f64::NAN);
                    (v != 0.0).then_some((j, v))
                })
                .collect()
        })
        .collect();
    let apply = |x: &[f64], y: &mut [f64]| {
        for (yi, row) in y.iter_mut().zip(&rows) {
            *yi = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
    };

    let mut x = vec![1.0 / n as f64; n];
    let mut tx = vec![0.0; n];
    for _ in 0..opts.max_iterations {
        apply(&x, &mut tx);
        let lambda: f64 = tx.iter().sum();
        let residual = tx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b).abs())
            .fold(0.0, f64::max);
        let scale = lambda * x.iter().copied().fold(0.0, f64::max);
        if residual <= opts.tolerance * scale {
            if lambda <= 0.0 || x.iter().any(|&v| v <= 0.0) {
                break;
            }
            return Ok(PerronData {
                lambda,
                delta: lambda.ln(),
                right_eigenvector: x,
                residual,
            });
        }
        let total = lambda + 1.0;
        for (xi, ti) in x.iter_mut().zip(&tx) {
            *xi = (*xi + ti) / total;
        }
    }
    Err(Error::NoConvergence(opts.max_iterations))
}
