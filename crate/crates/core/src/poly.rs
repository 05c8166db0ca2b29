//! Polynomial root finding for the noise-subspace polynomial.
//!
//! Aberth-Ehrlich simultaneous iteration with Horner evaluation: cubic-free,
//! derivative-implicit, and robust for the moderate degrees (a few tens)
//! that root-MUSIC produces. Roots of multiplicity two — the on-circle
//! signal roots split by rounding — converge linearly but comfortably within
//! the sweep budget.

use alloc::vec::Vec;

use num_traits::Float;

use crate::C64;

const MAX_SWEEPS: usize = 300;
const STEP_TOL: f64 = 1e-13;

/// All complex roots of `sum_m coeffs[m] z^m` (ascending powers).
/// Leading/trailing numerically-zero coefficients are trimmed; trailing
/// low-order zeros contribute exact zero roots.
pub(crate) fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let cutoff = 1e-14 * scale;
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() <= cutoff {
        hi -= 1;
    }
    let mut lo = 0;
    while lo < hi && coeffs[lo].norm() <= cutoff {
        lo += 1;
    }
    let mut roots: Vec<C64> = (0..lo).map(|_| C64::new(0.0, 0.0)).collect();
    let c = &coeffs[lo..hi];
    let degree = c.len().saturating_sub(1);
    match degree {
        0 => {}
        1 => roots.push(-c[0] / c[1]),
        2 => roots.extend(quadratic(c[0], c[1], c[2])),
        _ => roots.extend(aberth(c)),
    }
    roots
}

fn quadratic(c0: C64, c1: C64, c2: C64) -> [C64; 2] {
    let disc = (c1 * c1 - c2 * c0 * C64::new(4.0, 0.0)).sqrt();
    // pick the sign that avoids cancellation
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() {
        -(c1 + disc) * C64::new(0.5, 0.0)
    } else {
        -(c1 - disc) * C64::new(0.5, 0.0)
    };
    [q / c2, c0 / q]
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn aberth(c: &[C64]) -> Vec<C64> {
    let degree = c.len() - 1;
    let lead = c[degree];
    // Cauchy bound on root magnitudes
    let bound = 1.0 + c[..degree].iter().map(|x| (x / lead).norm()).fold(0.0, f64::max);
    // start on a ring at the geometric-mean radius, angles offset so no
    // initial point is a root of the symmetrized polynomial
    let r0 = {
        let c0 = c[0].norm();
        if c0 > 0.0 {
            Float::powf(c0 / lead.norm(), 1.0 / degree as f64).min(bound)
        } else {
            bound * 0.5
        }
    };
    let mut z: Vec<C64> = (0..degree)
        .map(|j| {
            let angle = core::f64::consts::TAU * (j as f64 + 0.37) / degree as f64 + 0.5;
            C64::from_polar(r0.max(1e-8), angle)
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                // saddle: nudge off and retry next sweep
                z[i] += C64::new(1e-8, 1e-8);
                max_step = f64::MAX;
                continue;
            };
            let mut repulsion = C64::new(0.0, 0.0);
            for j in 0..degree {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += C64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < STEP_TOL {
            break;
        }
    }
    // Newton polish
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}
