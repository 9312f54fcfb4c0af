//! Dense nonsymmetric eigensolver: Householder reduction to Hessenberg
//! form followed by the shifted QR iteration, in complex arithmetic
//! throughout. Produces a Schur factorization `A = Q T Q^H`; eigenvalues
//! are read off the triangular diagonal and eigenvectors recovered by
//! back-substitution.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::qr::reflector_for;
use super::{lu, Matrix};

const EPS: f64 = f64::EPSILON;
const MAX_ITERS_PER_EIG: usize = 60;

/// Complex Schur factorization `A = Q T Q^H`, `T` upper triangular.
pub struct Schur {
    pub t: Matrix,
    pub q: Matrix,
}

/// Reduces `A` to Hessenberg form: returns `(H, Q)` with `H = Q^H A Q`.
pub fn hessenberg(a: &Matrix) -> (Matrix, Matrix) {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut reflectors = Vec::new();
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let (refl, alpha) = reflector_for(&x);
        refl.apply_left(&mut h, k + 1, k);
        refl.apply_right(&mut h, k + 1, n);
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::ZERO;
        }
        reflectors.push((k + 1, refl));
    }
    for (r0, refl) in reflectors.iter().rev() {
        refl.apply_left(&mut q, *r0, 0);
    }
    (h, q)
}

// Givens rotation [c, s; -conj(s), c] with real c mapping (f, g) to (r, 0).
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    if g == Complex64::ZERO {
        return (1.0, Complex64::ZERO, f);
    }
    if f == Complex64::ZERO {
        let gn = g.norm();
        return (0.0, g.conj() / gn, Complex64::new(gn, 0.0));
    }
    let fn_ = f.norm();
    let d = Float::sqrt(fn_ * fn_ + g.norm_sqr());
    let c = fn_ / d;
    let phase = f / fn_;
    let s = phase * g.conj() / d;
    (c, s, phase * d)
}

// Eigenvalue of [[a, b], [c, d]] closer to d (Wilkinson shift).
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur factorization via shifted QR. `None` when the
/// iteration fails to converge (not observed on finite input in
/// practice, but the cap is enforced).
pub fn schur(a: &Matrix) -> Option<Schur> {
    assert!(a.is_square());
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n < 2 {
        return Some(Schur { t: h, q });
    }

    let scale = h.norm_fro().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let mut total_iters = 0usize;
    let budget = MAX_ITERS_PER_EIG * n;

    while hi > 0 {
        // deflate negligible subdiagonal entries
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= EPS * local.max(scale * 1e-3) || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = Complex64::ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            // 1x1 block converged
            hi -= 1;
            stalled = 0;
            continue;
        }

        total_iters += 1;
        if total_iters > budget {
            return None;
        }
        stalled += 1;
        let mu = if stalled.is_multiple_of(12) {
            // exceptional shift to break rare limit cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        // QR: rotate away the subdiagonal, remembering the rotations
        let mut rots = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s, r) = givens(h[(i, i)], h[(i + 1, i)]);
            h[(i, i)] = r;
            h[(i + 1, i)] = Complex64::ZERO;
            for col in i + 1..n {
                let x = h[(i, col)];
                let y = h[(i + 1, col)];
                h[(i, col)] = c * x + s * y;
                h[(i + 1, col)] = -s.conj() * x + c * y;
            }
            rots.push((c, s));
        }
        // RQ: apply the adjoint rotations from the right
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = lo + idx;
            for row in 0..=(i + 1).min(hi) {
                let x = h[(row, i)];
                let y = h[(row, i + 1)];
                h[(row, i)] = c * x + s.conj() * y;
                h[(row, i + 1)] = -s * x + c * y;
            }
            for row in 0..n {
                let x = q[(row, i)];
                let y = q[(row, i + 1)];
                q[(row, i)] = c * x + s.conj() * y;
                q[(row, i + 1)] = -s * x + c * y;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }

    Some(Schur { t: h, q })
}

/// Eigenvalues with multiplicity, unordered.
pub fn eigenvalues(a: &Matrix) -> Option<Vec<Complex64>> {
    let s = schur(a)?;
    Some((0..s.t.rows()).map(|i| s.t[(i, i)]).collect())
}

impl Schur {
    /// Right eigenvector matrix: column j is a unit eigenvector for
    /// `t[(j,j)]`. For defective matrices the returned columns still
    /// satisfy the residual bound only for non-defective eigenvalues.
    pub fn right_eigenvectors(&self) -> Matrix {
        let n = self.t.rows();
        let tnorm = self.t.norm_fro().max(f64::MIN_POSITIVE);
        let mut vecs = Matrix::zeros(n, n);
        for j in 0..n {
            let lambda = self.t[(j, j)];
            let mut y = alloc::vec![Complex64::ZERO; n];
            y[j] = Complex64::ONE;
            for r in (0..j).rev() {
                let mut acc = Complex64::ZERO;
                for k in r + 1..=j {
                    acc += self.t[(r, k)] * y[k];
                }
                let mut den = self.t[(r, r)] - lambda;
                if den.norm() < EPS * tnorm {
                    den = Complex64::new(EPS * tnorm, 0.0);
                }
                y[r] = -acc / den;
            }
            let norm = Float::sqrt(y.iter().map(|z| z.norm_sqr()).sum::<f64>());
            for v in y.iter_mut() {
                *v /= norm;
            }
            for i in 0..n {
                vecs[(i, j)] = y[i];
            }
        }
        self.q.mul(&vecs)
    }
}

/// Spectral projector onto the eigenvalues selected by `select`,
/// computed from the eigendecomposition: `P = V diag(select) V^{-1}`.
/// Valid for matrices whose selected and unselected eigenvalues are
/// disjoint and non-defective. `None` if the eigenvector matrix is
/// numerically singular.
pub fn eigen_projector(a: &Matrix, select: impl Fn(Complex64) -> bool) -> Option<Matrix> {
    let s = schur(a)?;
    let v = s.right_eigenvectors();
    let vinv = lu::lu(&v).inverse()?;
    let n = a.rows();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        if select(s.t[(i, i)]) {
            d[(i, i)] = Complex64::ONE;
        }
    }
    Some(v.mul(&d).mul(&vinv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sort_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    #[test]
    fn triangular_matrix_eigenvalues() {
        let a = Matrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let e = sort_by_re(eigenvalues(&a).unwrap());
        assert!((e[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((e[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn companion_cube_roots_of_unity() {
        // companion matrix of z^3 - 1
        let a = Matrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let eigs = eigenvalues(&a).unwrap();
        for e in &eigs {
            assert!((e.powu(3) - c(1.0, 0.0)).norm() < 1e-10, "cube {e}");
        }
        // distinct roots
        for i in 0..3 {
            for j in 0..i {
                assert!((eigs[i] - eigs[j]).norm() > 0.5);
            }
        }
    }

    #[test]
    fn schur_residual_and_unitarity() {
        let n = 24;
        let a = Matrix::from_fn(n, n, |r, c_| {
            Complex64::new(
                (((r * 31 + c_ * 17) % 13) as f64 - 6.0) / 6.0,
                (((r * 7 + c_ * 29) % 11) as f64 - 5.0) / 5.0,
            )
        });
        let s = schur(&a).unwrap();
        let recon = s.q.mul(&s.t).mul(&s.q.adjoint());
        assert!(recon.sub(&a).norm_fro() < 1e-10 * a.norm_fro().max(1.0));
        let qtq = s.q.adjoint().mul(&s.q);
        assert!(qtq.sub(&Matrix::identity(n)).norm_fro() < 1e-11);
        // strictly lower part of T is zero
        for r in 0..n {
            for col in 0..r {
                assert_eq!(s.t[(r, col)], Complex64::ZERO);
            }
        }
    }

    #[test]
    fn eigenpair_residuals() {
        let n = 16;
        let a = Matrix::from_fn(n, n, |r, c_| {
            Complex64::new(
                (((r * 23 + c_ * 5) % 9) as f64 - 4.0) / 4.0,
                (((r * 3 + c_ * 13) % 7) as f64 - 3.0) / 3.0,
            )
        });
        let s = schur(&a).unwrap();
        let v = s.right_eigenvectors();
        let anorm = a.norm_fro();
        for j in 0..n {
            let lambda = s.t[(j, j)];
            let col: Vec<Complex64> = (0..n).map(|i| v[(i, j)]).collect();
            let av = a.matvec(&col);
            let res = Float::sqrt(
                av.iter()
                    .zip(&col)
                    .map(|(&avi, &vi)| (avi - lambda * vi).norm_sqr())
                    .sum::<f64>(),
            );
            assert!(res / anorm < 1e-10, "eigenpair residual {res}");
        }
    }

    #[test]
    fn eigenpair_residuals_at_contract_size() {
        // the stability contract extends to n = 200
        let n = 200;
        let a = Matrix::from_fn(n, n, |r, c_| {
            Complex64::new(
                (((r * 31 + c_ * 17) % 97) as f64 - 48.0) / 48.0,
                (((r * 7 + c_ * 29) % 83) as f64 - 41.0) / 41.0,
            )
        });
        let s = schur(&a).unwrap();
        let v = s.right_eigenvectors();
        let anorm = a.norm_fro();
        let mut worst = 0.0f64;
        for j in 0..n {
            let lambda = s.t[(j, j)];
            let col: Vec<Complex64> = (0..n).map(|i| v[(i, j)]).collect();
            let av = a.matvec(&col);
            let res = Float::sqrt(
                av.iter()
                    .zip(&col)
                    .map(|(&x, &y)| (x - lambda * y).norm_sqr())
                    .sum::<f64>(),
            );
            worst = worst.max(res / anorm);
        }
        assert!(worst <= 1e-8, "worst relative residual {worst:.3e}");
    }

    #[test]
    fn eigen_projector_idempotent() {
        let a = Matrix::from_rows(&[
            vec![c(0.5, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let p = eigen_projector(&a, |z| (z - c(0.5, 0.0)).norm() < 0.1).unwrap();
        // hand-computed projector onto eigvec (1,0) along (0.37..., 0.92...)
        assert!((p[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((p[(0, 1)] - c(-0.4, 0.0)).norm() < 1e-12);
        assert!(p[(1, 0)].norm() < 1e-12);
        assert!(p[(1, 1)].norm() < 1e-12);
        assert!(p.mul(&p).sub(&p).norm_fro() < 1e-12);
    }
}
