//! Householder QR with a full unitary factor.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::Matrix;

/// Householder reflector data: `H = I - beta * v * v^H`.
pub(crate) struct Reflector {
    pub v: Vec<Complex64>,
    pub beta: f64,
}

/// Builds the reflector mapping `x` to `alpha * e_1` and returns
/// `(reflector, alpha)`. Identity (beta = 0) when `x` is already there.
pub(crate) fn reflector_for(x: &[Complex64]) -> (Reflector, Complex64) {
    let norm = Float::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let mut v = x.to_vec();
    if norm == 0.0 {
        return (Reflector { v, beta: 0.0 }, Complex64::ZERO);
    }
    let phase = if x[0] == Complex64::ZERO {
        Complex64::ONE
    } else {
        x[0] / x[0].norm()
    };
    let alpha = -phase * norm;
    v[0] -= alpha;
    let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if vnorm_sqr == 0.0 {
        // x was already a multiple of e_1 pointing the right way
        return (Reflector { v, beta: 0.0 }, alpha);
    }
    (
        Reflector {
            v,
            beta: 2.0 / vnorm_sqr,
        },
        alpha,
    )
}

impl Reflector {
    /// Applies `H` from the left to rows `r0..r0+len(v)` of `m`,
    /// columns `c0..`.
    pub fn apply_left(&self, m: &mut Matrix, r0: usize, c0: usize) {
        if self.beta == 0.0 {
            return;
        }
        let k = self.v.len();
        for c in c0..m.cols() {
            let mut dot = Complex64::ZERO;
            for i in 0..k {
                dot += self.v[i].conj() * m[(r0 + i, c)];
            }
            dot *= self.beta;
            for i in 0..k {
                let sub = dot * self.v[i];
                m[(r0 + i, c)] -= sub;
            }
        }
    }

    /// Applies `H` from the right to columns `c0..c0+len(v)` of `m`,
    /// rows `0..r_end`.
    pub fn apply_right(&self, m: &mut Matrix, c0: usize, r_end: usize) {
        if self.beta == 0.0 {
            return;
        }
        let k = self.v.len();
        for r in 0..r_end {
            let mut dot = Complex64::ZERO;
            for i in 0..k {
                dot += m[(r, c0 + i)] * self.v[i];
            }
            dot *= self.beta;
            for i in 0..k {
                let sub = dot * self.v[i].conj();
                m[(r, c0 + i)] -= sub;
            }
        }
    }
}

/// Full QR factorization `A = Q R` with `Q` m-by-m unitary and `R`
/// m-by-n upper triangular.
pub fn qr(a: &Matrix) -> (Matrix, Matrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut reflectors = Vec::new();
    for k in 0..n.min(m.saturating_sub(1)) {
        let x: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
        let (h, alpha) = reflector_for(&x);
        h.apply_left(&mut r, k, k);
        // clean the annihilated entries exactly
        r[(k, k)] = alpha;
        for i in k + 1..m {
            r[(i, k)] = Complex64::ZERO;
        }
        reflectors.push((k, h));
    }
    let mut q = Matrix::identity(m);
    for (k, h) in reflectors.iter().rev() {
        h.apply_left(&mut q, *k, 0);
    }
    (q, r)
}

/// Orthonormal basis extension: given full-column-rank `v` (n-by-k),
/// returns a unitary `u` whose first k columns span range(v).
pub fn complete_basis(v: &Matrix) -> Matrix {
    let (q, _) = qr(v);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_reconstructs_and_q_unitary() {
        let a = Matrix::from_fn(5, 3, |r, c| {
            Complex64::new(((r + 2 * c) % 4) as f64 - 1.5, ((r * c) % 3) as f64)
        });
        let (q, r) = qr(&a);
        let qa = q.mul(&r);
        assert!(qa.sub(&a).norm_fro() < 1e-12);
        let qtq = q.adjoint().mul(&q);
        assert!(qtq.sub(&Matrix::identity(5)).norm_fro() < 1e-12);
        // R upper triangular
        for i in 0..5 {
            for j in 0..3.min(i) {
                assert_eq!(r[(i, j)], Complex64::ZERO);
            }
        }
    }

    #[test]
    fn completion_spans_input() {
        let v = Matrix::from_fn(4, 2, |r, c| Complex64::new((r == c) as u8 as f64, 0.3 * r as f64));
        let u = complete_basis(&v);
        // first two columns of U and columns of V span the same subspace:
        // projector from U-columns applied to V leaves V unchanged.
        let q1 = u.block(0, 0, 4, 2);
        let proj = q1.mul(&q1.adjoint());
        assert!(proj.mul(&v).sub(&v).norm_fro() < 1e-12);
    }
}
