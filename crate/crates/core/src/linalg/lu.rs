//! LU factorization with partial pivoting.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::Matrix;

/// Packed LU factors of a square matrix, `P*A = L*U`.
pub struct Lu {
    factors: Matrix,
    // pivot[k] = source row swapped into position k at step k
    pivots: Vec<usize>,
    singular: bool,
}

pub fn lu(a: &Matrix) -> Lu {
    assert!(a.is_square(), "lu requires a square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut pivots = Vec::with_capacity(n);
    let mut singular = false;

    for k in 0..n {
        let mut p = k;
        let mut best = m[(k, k)].norm();
        for r in k + 1..n {
            let v = m[(r, k)].norm();
            if v > best {
                best = v;
                p = r;
            }
        }
        pivots.push(p);
        if p != k {
            for c in 0..n {
                let tmp = m[(k, c)];
                m[(k, c)] = m[(p, c)];
                m[(p, c)] = tmp;
            }
        }
        let piv = m[(k, k)];
        if piv == Complex64::ZERO {
            singular = true;
            continue;
        }
        for r in k + 1..n {
            let f = m[(r, k)] / piv;
            m[(r, k)] = f;
            if f == Complex64::ZERO {
                continue;
            }
            for c in k + 1..n {
                let sub = f * m[(k, c)];
                m[(r, c)] -= sub;
            }
        }
    }

    Lu {
        factors: m,
        pivots,
        singular,
    }
}

impl Lu {
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Smallest |U_kk|; zero for exactly singular input.
    pub fn min_pivot(&self) -> f64 {
        let n = self.factors.rows();
        (0..n)
            .map(|k| self.factors[(k, k)].norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves `A x = b` in place of a copy of `b`. `None` if singular.
    pub fn solve_vec(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.singular {
            return None;
        }
        let n = self.factors.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = b.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        // forward: L y = Pb
        for r in 1..n {
            let mut acc = x[r];
            for c in 0..r {
                acc -= self.factors[(r, c)] * x[c];
            }
            x[r] = acc;
        }
        // backward: U x = y
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in r + 1..n {
                acc -= self.factors[(r, c)] * x[c];
            }
            x[r] = acc / self.factors[(r, r)];
        }
        Some(x)
    }

    pub fn solve_mat(&self, b: &Matrix) -> Option<Matrix> {
        let n = self.factors.rows();
        assert_eq!(b.rows(), n);
        let mut out = Matrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col: Vec<Complex64> = (0..n).map(|i| b[(i, j)]).collect();
            let x = self.solve_vec(&col)?;
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        Some(out)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        self.solve_mat(&Matrix::identity(self.factors.rows()))
    }
}

/// One-norm condition estimate via the explicit inverse.
/// Returns `f64::INFINITY` for singular matrices.
pub fn condition_one_norm(a: &Matrix) -> f64 {
    match lu(a).inverse() {
        Some(inv) => a.norm_one() * inv.norm_one(),
        None => f64::INFINITY,
    }
}
