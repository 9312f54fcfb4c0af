//! Singular values by one-sided Jacobi.
//!
//! The near-kernel counts in this crate (rank thresholds at 1e-8 of
//! the largest singular value, section diagnostics at 1e-9) need the
//! smallest singular values at high relative accuracy; one-sided
//! Jacobi provides that, and an exactly zero column stays an exactly
//! zero singular value.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::Matrix;

const PAIR_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 48;

/// All singular values, descending. Works for any shape.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let work = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.adjoint()
    };
    let (m, n) = (work.rows(), work.cols());
    // column-major copy for cache-friendly column ops
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| work[(i, j)]).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex64::ZERO;
                for i in 0..m {
                    app += cols[p][i].norm_sqr();
                    aqq += cols[q][i].norm_sqr();
                    apq += cols[p][i].conj() * cols[q][i];
                }
                let g = apq.norm();
                if g <= PAIR_TOL * Float::sqrt(app * aqq) || app == 0.0 || aqq == 0.0 {
                    continue;
                }
                rotated = true;
                let sigma = apq / g;
                let zeta = (aqq - app) / (2.0 * g);
                let t = {
                    let u = 1.0 / (Float::abs(zeta) + Float::sqrt(1.0 + zeta * zeta));
                    if zeta >= 0.0 {
                        -u
                    } else {
                        u
                    }
                };
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = t * c;
                let ms_sigma = sigma * s;
                let s_conj_sigma = sigma.conj() * s;
                for i in 0..m {
                    let bp = cols[p][i];
                    let bq = cols[q][i];
                    cols[p][i] = c * bp + s_conj_sigma * bq;
                    cols[q][i] = -ms_sigma * bp + c * bq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|col| Float::sqrt(col.iter().map(|z| z.norm_sqr()).sum::<f64>()))
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Largest singular value (the operator 2-norm).
pub fn spectral_norm(a: &Matrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Smallest singular value.
pub fn smallest_singular_value(a: &Matrix) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Number of singular values strictly above `rel_tol * max`.
/// Zero matrix has rank 0.
pub fn rank_with_tolerance(sv: &[f64], rel_tol: f64) -> usize {
    match sv.first() {
        None => 0,
        Some(&s0) => {
            if s0 == 0.0 {
                0
            } else {
                sv.iter().filter(|&&s| s > rel_tol * s0).count()
            }
        }
    }
}
