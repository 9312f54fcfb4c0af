//! Deterministic seeded generators for operator corpora.
//!
//! Everything random in this crate flows through the `SplitMix64`
//! generator below, so a recorded seed reproduces a corpus bit for
//! bit, on any platform.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{lu, Matrix};
use crate::operators::{CouplingBlock, OperatorSpec};
use crate::symbols::Symbol;

/// SplitMix64: tiny, fast, and good enough for corpus generation.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in the centered box `[-half, half)^2`.
    pub fn next_complex(&mut self, half: f64) -> Complex64 {
        Complex64::new(self.next_in(-half, half), self.next_in(-half, half))
    }

    pub fn next_usize(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + (self.next_u64() % (hi_inclusive - lo + 1) as u64) as usize
    }
}

/// Random analytic trigonometric polynomial: degree between 1 and
/// `max_degree`, coefficients in the unit box, leading coefficient
/// bounded away from zero so the degree is genuine.
pub fn random_analytic_symbol(rng: &mut SplitMix64, max_degree: usize) -> Symbol {
    let degree = rng.next_usize(1, max_degree.max(1));
    let mut terms = Vec::with_capacity(degree + 1);
    for m in 0..=degree {
        let mut c = rng.next_complex(1.0);
        if m == degree {
            while c.norm() < 0.2 {
                c = rng.next_complex(1.0);
            }
        }
        terms.push((m as i64, c));
    }
    Symbol::from_terms(&terms, 1).expect("multiplicity 1 is valid")
}

/// Dense random matrix with entries in the centered box.
pub fn random_matrix(rng: &mut SplitMix64, n: usize, half: f64) -> Matrix {
    Matrix::from_fn(n, n, |_, _| rng.next_complex(half))
}

/// Random block-triangular spec `[[A, B], [0, C]]` with dense blocks.
pub fn random_block_triangular(
    rng: &mut SplitMix64,
    dim_a: usize,
    dim_c: usize,
    label: &str,
) -> OperatorSpec {
    let a = random_matrix(rng, dim_a, 1.0);
    let c = random_matrix(rng, dim_c, 1.0);
    let b = Matrix::from_fn(dim_a, dim_c, |_, _| rng.next_complex(1.0));
    OperatorSpec::block_triangular(
        alloc::vec![
            OperatorSpec::finite(a, format!("{label}.A")),
            OperatorSpec::finite(c, format!("{label}.C")),
        ],
        alloc::vec![CouplingBlock {
            row: 0,
            col: 1,
            matrix: b,
        }],
        label,
    )
}

/// A matrix with prescribed eigenvalues: `T = S D S^{-1}` where
/// `S = I + strength * R`. Returns `(T, S)`; the exact spectral
/// projector onto any eigenvalue subset is `S E_sel S^{-1}`, which
/// makes the construction its own oracle.
pub fn diagonalizable_matrix(
    rng: &mut SplitMix64,
    eigenvalues: &[Complex64],
    strength: f64,
) -> (Matrix, Matrix) {
    let n = eigenvalues.len();
    let r = random_matrix(rng, n, 1.0);
    let s = Matrix::identity(n).add(&r.scale(Complex64::new(strength, 0.0)));
    let d = Matrix::diag(eigenvalues);
    let s_inv = lu(&s).inverse().expect("perturbed identity is invertible");
    (s.mul(&d).mul(&s_inv), s)
}

/// Exact spectral projector of a `diagonalizable_matrix` construction:
/// `S diag(select) S^{-1}` over the prescribed eigenvalues.
pub fn construction_projector(
    s: &Matrix,
    eigenvalues: &[Complex64],
    select: impl Fn(Complex64) -> bool,
) -> Matrix {
    let n = eigenvalues.len();
    let mut e = Matrix::zeros(n, n);
    for (i, &ev) in eigenvalues.iter().enumerate() {
        if select(ev) {
            e[(i, i)] = Complex64::ONE;
        }
    }
    let s_inv = lu(s).inverse().expect("construction basis is invertible");
    s.mul(&e).mul(&s_inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = SplitMix64::new(43);
        assert_ne!(SplitMix64::new(42).next_u64(), c.next_u64());
    }

    #[test]
    fn symbols_are_analytic_with_bounded_degree() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..50 {
            let s = random_analytic_symbol(&mut rng, 6);
            assert!(s.is_analytic());
            assert!(s.bandwidth() >= 1 && s.bandwidth() <= 6);
            assert!(s.coeff(s.bandwidth()).norm() >= 0.2);
        }
    }

    #[test]
    fn constructed_matrix_has_prescribed_eigenvalues() {
        let mut rng = SplitMix64::new(11);
        let eigs = [
            Complex64::new(2.0, 0.0),
            Complex64::new(-1.0, 0.5),
            Complex64::new(0.0, -2.0),
        ];
        let (t, s) = diagonalizable_matrix(&mut rng, &eigs, 0.2);
        let mut computed = crate::linalg::eigenvalues(&t).unwrap();
        for &e in &eigs {
            let best = computed
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (*a - e).norm().partial_cmp(&(*b - e).norm()).unwrap()
                })
                .map(|(i, _)| i)
                .unwrap();
            assert!((computed.remove(best) - e).norm() < 1e-10);
        }
        // construction projector is idempotent and commutes with T
        let p = construction_projector(&s, &eigs, |z| z.re > 0.5);
        assert!(p.mul(&p).sub(&p).norm_fro() < 1e-12);
        assert!(t.mul(&p).sub(&p.mul(&t)).norm_fro() < 1e-12);
    }
}
