//! Trigonometric-polynomial symbol calculus on the unit circle:
//! evaluation, Fourier coefficients, winding numbers, and resolvent
//! symbols. This is the exact backbone behind the Laurent/Toeplitz
//! operators: their spectra and essential spectra are read off the
//! symbol curve instead of truncated matrices.
//!
//! Matrix convention, fixed once and used everywhere: the Laurent
//! operator of the symbol `a` has entries `L(a)[j][k] = a_hat[j-k]`,
//! so `a(w) = w` is the forward shift `e_k -> e_{k+1}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

/// Default distance below which a point counts as "on the curve".
pub const EPS_CURVE: f64 = 1e-9;

/// Finitely supported Fourier coefficient map.
pub type CoeffMap = BTreeMap<i64, Complex64>;

/// A trigonometric polynomial `a(w) = sum a_hat[m] w^m` on the unit
/// circle, acting with a given multiplicity (`a tensor I_d` on
/// d-dimensional fibers).
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    coeffs: CoeffMap,
    multiplicity: usize,
}

impl Symbol {
    pub fn new(coeffs: CoeffMap, multiplicity: usize) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::InvalidParameter {
                what: "symbol multiplicity must be at least 1".into(),
            });
        }
        let coeffs: CoeffMap = coeffs
            .into_iter()
            .filter(|(_, c)| *c != Complex64::ZERO)
            .collect();
        Ok(Symbol {
            coeffs,
            multiplicity,
        })
    }

    pub fn from_terms(terms: &[(i64, Complex64)], multiplicity: usize) -> Result<Self> {
        let mut map = CoeffMap::new();
        for &(m, c) in terms {
            *map.entry(m).or_insert(Complex64::ZERO) += c;
        }
        Symbol::new(map, multiplicity)
    }

    /// The forward-shift symbol `a(w) = w`.
    pub fn shift() -> Self {
        Symbol::from_terms(&[(1, Complex64::ONE)], 1).unwrap()
    }

    pub fn constant(c: Complex64) -> Self {
        Symbol::from_terms(&[(0, c)], 1).unwrap()
    }

    pub fn coeffs(&self) -> &CoeffMap {
        &self.coeffs
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        self.coeffs.get(&m).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn with_multiplicity(&self, d: usize) -> Result<Self> {
        Symbol::new(self.coeffs.clone(), d)
    }

    /// Largest absolute support index; 0 for the zero/constant symbol.
    pub fn bandwidth(&self) -> i64 {
        self.coeffs.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    /// No negative-index coefficients: the Laurent operator of the
    /// symbol maps the half-line subspace into itself.
    pub fn is_analytic(&self) -> bool {
        !self.coeffs.keys().any(|&m| m < 0)
    }

    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&m, &c)| c * Complex64::from_polar(1.0, m as f64 * theta))
            .sum()
    }

    /// `a(1/w)`: index reflection. The quotient of a Laurent operator
    /// by the half-line subspace is the Toeplitz operator of this
    /// reflected symbol in the reversed coordinate order.
    pub fn reflect(&self) -> Symbol {
        Symbol {
            coeffs: self.coeffs.iter().map(|(&m, &c)| (-m, c)).collect(),
            multiplicity: self.multiplicity,
        }
    }

    /// `a - lambda`, the symbol of `L(a) - lambda`.
    pub fn sub_constant(&self, lambda: Complex64) -> Symbol {
        let mut coeffs = self.coeffs.clone();
        let c0 = coeffs.entry(0).or_insert(Complex64::ZERO);
        *c0 -= lambda;
        if *c0 == Complex64::ZERO {
            coeffs.remove(&0);
        }
        Symbol {
            coeffs,
            multiplicity: self.multiplicity,
        }
    }

    /// `sum |a_hat[m]|`, an upper bound for `max |a|` on the circle
    /// (hence for the spectral radius of the Laurent operator).
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// `sum |m| |a_hat[m]|`, a Lipschitz constant for the curve.
    pub fn derivative_bound(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&m, c)| m.abs() as f64 * c.norm())
            .sum()
    }
}

/// Equispaced samples `values[k] = f(e^{2 pi i k / N})` of a function
/// on the unit circle, `N` a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSampling {
    values: Vec<Complex64>,
}

impl CircleSampling {
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn require_power_of_two(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter {
            what: format!("node count must be a power of two >= 2, got {n}"),
        });
    }
    Ok(())
}

fn nyquist_nodes(a: &Symbol) -> usize {
    (2 * a.bandwidth() as usize + 2).next_power_of_two()
}

/// Samples the symbol at `n` equispaced nodes. Refused when `n` is
/// below the Nyquist margin `2*bandwidth + 2` (aliasing would make the
/// samples unrepresentative of the polynomial).
pub fn eval_symbol(a: &Symbol, n: usize) -> Result<CircleSampling> {
    require_power_of_two(n)?;
    let required = 2 * a.bandwidth() as usize + 2;
    if n < required {
        return Err(Error::Aliasing {
            node_count: n,
            required,
        });
    }
    let step = 2.0 * core::f64::consts::PI / n as f64;
    Ok(CircleSampling {
        values: (0..n).map(|k| a.eval_angle(k as f64 * step)).collect(),
    })
}

// In-place iterative radix-2 Cooley-Tukey with e^{-2 pi i / n}
// twiddles (forward transform). Length must be a power of two.
fn fft_forward(v: &mut [Complex64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            v.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * core::f64::consts::PI / len as f64;
        let wlen = Complex64::from_polar(1.0, ang);
        let mut i = 0;
        while i < n {
            let mut w = Complex64::ONE;
            for k in 0..len / 2 {
                let u = v[i + k];
                let t = v[i + k + len / 2] * w;
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Discrete Fourier coefficients `c_hat[m] = (1/N) sum_k v_k e^{-2 pi i k m / N}`
/// for `m` in `window` (inclusive), via one radix-2 FFT. Exact to
/// roundoff for trigonometric polynomials within the window; indices
/// beyond the Nyquist range are refused.
pub fn fourier_coefficients(
    s: &CircleSampling,
    window: (i64, i64),
) -> Result<CoeffMap> {
    let n = s.node_count() as i64;
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidParameter {
            what: format!("empty coefficient window [{lo}, {hi}]"),
        });
    }
    let half = n / 2;
    for m in [lo, hi] {
        if m.abs() > half {
            return Err(Error::WindowOutOfRange {
                index: m,
                half_range: half,
            });
        }
    }
    let mut bins: Vec<Complex64> = s.values().to_vec();
    fft_forward(&mut bins);
    let mut out = CoeffMap::new();
    for m in lo..=hi {
        let j = m.rem_euclid(n) as usize;
        out.insert(m, bins[j] / n as f64);
    }
    Ok(out)
}

/// Outcome of a winding computation against a fixed sampling.
pub(crate) enum WindingOutcome {
    Wind(i64),
    NearCurve { distance: f64 },
    NeedsRefinement,
}

/// Argument-increment winding of `values - lambda` around 0; valid
/// when every increment stays below pi/2.
pub(crate) fn winding_from_samples(values: &[Complex64], lambda: Complex64) -> WindingOutcome {
    let mut min_dist = f64::INFINITY;
    for v in values {
        min_dist = min_dist.min((v - lambda).norm());
    }
    if min_dist < EPS_CURVE {
        return WindingOutcome::NearCurve { distance: min_dist };
    }
    let n = values.len();
    let mut total = 0.0;
    for k in 0..n {
        let f0 = values[k] - lambda;
        let f1 = values[(k + 1) % n] - lambda;
        let inc = (f1 / f0).arg();
        if Float::abs(inc) >= core::f64::consts::FRAC_PI_2 {
            return WindingOutcome::NeedsRefinement;
        }
        total += inc;
    }
    let w = total / (2.0 * core::f64::consts::PI);
    let rounded = Float::round(w);
    if Float::abs(w - rounded) > 0.25 {
        return WindingOutcome::NeedsRefinement;
    }
    WindingOutcome::Wind(rounded as i64)
}

const MAX_WINDING_NODES: usize = 1 << 22;

/// Winding number of the symbol curve around `lambda`: the total
/// argument change of `a(e^{i theta}) - lambda` over one
/// counterclockwise turn, divided by 2 pi. Computed by summing
/// principal-branch argument increments over a sampling refined until
/// every increment is below pi/2 (branch-safe, hence integer-exact).
///
/// This is the classical Fredholm data for the Toeplitz operator
/// `T(a)`: `lambda` is in the spectrum beyond the curve exactly where
/// the winding is nonzero.
pub fn winding_number(a: &Symbol, lambda: Complex64) -> Result<i64> {
    let mut n = 64usize.max(nyquist_nodes(a) * 4);
    loop {
        let samples = eval_symbol(a, n)?;
        match winding_from_samples(samples.values(), lambda) {
            WindingOutcome::Wind(w) => return Ok(w),
            WindingOutcome::NearCurve { distance } => {
                return Err(Error::OnCurve {
                    distance,
                    epsilon: EPS_CURVE,
                })
            }
            WindingOutcome::NeedsRefinement => {
                n *= 2;
                if n > MAX_WINDING_NODES {
                    return Err(Error::OnCurve {
                        distance: 0.0,
                        epsilon: EPS_CURVE,
                    });
                }
            }
        }
    }
}

/// Samples of the resolvent symbol `1/(z - a)` on the circle: the
/// symbol of `(z - L(a))^{-1}` when `z` is off the curve. Refused when
/// `z` comes within `EPS_CURVE` of a sample.
pub fn resolvent_symbol(a: &Symbol, z: Complex64, n: usize) -> Result<CircleSampling> {
    let base = eval_symbol(a, n)?;
    let mut values = Vec::with_capacity(n);
    for &v in base.values() {
        let d = z - v;
        if d.norm() < EPS_CURVE {
            return Err(Error::OnCurve {
                distance: d.norm(),
                epsilon: EPS_CURVE,
            });
        }
        values.push(Complex64::ONE / d);
    }
    Ok(CircleSampling { values })
}

/// l2 norm of the negative-index part of a coefficient map. Zero
/// exactly when the operator with these coefficients maps the
/// half-line subspace into itself (up to the window truncation).
pub fn negative_part_norm(coeffs: &CoeffMap) -> f64 {
    let sum: f64 = coeffs
        .iter()
        .filter(|(&m, _)| m < 0)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    // an empty sum is IEEE -0.0; keep reports at +0.0
    Float::sqrt(sum.max(0.0))
}
