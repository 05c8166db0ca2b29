//! Nonnegative least squares by the Lawson-Hanson active-set method.
//!
//! Problem sizes here are tiny (the number of estimated sinusoids), so the
//! passive-set least-squares subproblems are solved densely with an SVD.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

/// Minimizes `||a x - b||_2` subject to `x >= 0`.
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let cols = a.ncols();
    let mut x = DVector::zeros(cols);
    if cols == 0 {
        return x;
    }
    let mut passive = alloc::vec![false; cols];
    let tol = 1e-12 * (1.0 + a.norm()) * (1.0 + b.norm());
    let max_rounds = 3 * cols + 10;

    for _ in 0..max_rounds {
        // gradient of the residual at the current iterate
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..cols)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&p, &q| w[p].partial_cmp(&w[q]).expect("finite gradient"));
        let Some(j) = candidate else { break };
        passive[j] = true;

        loop {
            let z = solve_passive(a, b, &passive);
            let violating: Vec<usize> = (0..cols).filter(|&k| passive[k] && z[k] <= 0.0).collect();
            if violating.is_empty() {
                for k in 0..cols {
                    x[k] = if passive[k] { z[k] } else { 0.0 };
                }
                break;
            }
            // step toward z until the first passive variable hits zero
            let alpha = violating
                .iter()
                .map(|&k| x[k] / (x[k] - z[k]))
                .fold(f64::INFINITY, f64::min);
            for k in 0..cols {
                if passive[k] {
                    x[k] += alpha * (z[k] - x[k]);
                    if x[k] <= tol {
                        x[k] = 0.0;
                        passive[k] = false;
                    }
                }
            }
        }
    }
    x
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let idx: Vec<usize> = (0..a.ncols()).filter(|&k| passive[k]).collect();
    let sub = a.select_columns(idx.iter());
    let sol = sub
        .svd(true, true)
        .solve(b, 1e-12)
        .expect("SVD least squares on a dense passive set");
    let mut z = DVector::zeros(a.ncols());
    for (slot, &k) in idx.iter().enumerate() {
        z[k] = sol[slot];
    }
    z
}
