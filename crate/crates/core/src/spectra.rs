//! Spectra, essential spectra, and essential spectral radii for every
//! supported operator variant.
//!
//! Ground truth for the symbol operators comes from the classical
//! symbol calculus -- the Laurent spectrum is the symbol curve, the
//! Toeplitz spectrum adds the points the curve winds around -- and
//! never from truncated finite sections, whose eigenvalues pollute
//! (see `pseudospectrum_grid` for the standard exhibit: the shift
//! section is nilpotent although 0 is far from the essential
//! spectrum). Finite matrices get a dense eigensolver, and their
//! essential spectrum is empty by the finite-dimensional convention.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::cplane::CompactSetEstimate;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::operators::{Operator, OperatorKind, OperatorSpec};
use crate::symbols::{self, Symbol};

/// How a spectral report was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense eigensolver on a finite matrix.
    Eigensolver,
    /// Symbol curve (Laurent: spectrum and essential spectrum agree).
    SymbolCurve,
    /// Symbol curve plus the nonzero-winding region (Toeplitz).
    SymbolCurveWinding,
    /// Union over direct summands or diagonal blocks.
    Union,
    /// Essential data of a finite operator, empty by convention.
    EmptyByConvention,
}

/// A spectral set together with an exactness tag. `exact = false`
/// marks an over-estimate (union bound across coupled blocks) that is
/// usable only for inclusion checks, never for equality verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub set: CompactSetEstimate,
    pub exact: bool,
}

/// Sampling controls for the symbol-curve paths.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    /// Minimum number of curve samples (rounded up to a power of two
    /// and to four times the Nyquist count).
    pub curve_nodes: usize,
    /// Cells across the larger bounding-box extent of the winding
    /// raster for Toeplitz spectra.
    pub raster_cells: usize,
    /// When set, curve sampling is refined until every point of the
    /// true curve is within this distance of a sample. Hull
    /// rasterization needs samples at density below its cell size to
    /// form a connected flood-fill barrier; pass half the cell size
    /// here.
    pub target_resolution: Option<f64>,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            curve_nodes: 256,
            raster_cells: 128,
            target_resolution: None,
        }
    }
}

impl SpectrumOptions {
    /// Defaults with curve sampling dense enough for hull
    /// rasterization at the given cell size.
    pub fn for_cell_size(cell_size: f64) -> Self {
        SpectrumOptions {
            target_resolution: Some(0.5 * cell_size),
            ..SpectrumOptions::default()
        }
    }
}

/// Full spectral report for one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub spectrum: CompactSetEstimate,
    pub essential: CompactSetEstimate,
    pub essential_radius: f64,
    pub method: Method,
    /// False when the sets are union over-estimates only.
    pub exact: bool,
}

/// Eigenvalues (with multiplicity) of a finite operator matrix.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::Shape {
            context: format!("eigenvalues of a {}x{} matrix", m.rows(), m.cols()),
        });
    }
    linalg::eigenvalues(m).ok_or(Error::NoConvergence {
        what: "QR eigensolver iteration cap reached".into(),
    })
}

const CURVE_NODE_CAP: usize = 1 << 17;

fn curve_nodes(symbol: &Symbol, opts: &SpectrumOptions) -> usize {
    let nyquist = (2 * symbol.bandwidth() as usize + 2).next_power_of_two();
    let mut n = (nyquist * 4).max(opts.curve_nodes.next_power_of_two());
    if let Some(res) = opts.target_resolution {
        let lipschitz = symbol.derivative_bound();
        while lipschitz * core::f64::consts::PI / n as f64 > res && n < CURVE_NODE_CAP {
            n *= 2;
        }
    }
    n
}

/// Samples of the symbol curve as an exact-curve estimate. Every point
/// of the true curve lies within the declared resolution of a sample
/// (chord bound from the symbol derivative).
fn curve_estimate(symbol: &Symbol, opts: &SpectrumOptions) -> Result<CompactSetEstimate> {
    let n = curve_nodes(symbol, opts);
    let samples = symbols::eval_symbol(symbol, n)?;
    let resolution = (symbol.derivative_bound() * core::f64::consts::PI / n as f64).max(1e-15);
    CompactSetEstimate::exact_curve(samples.values().to_vec(), resolution)
}

// Grid points enclosed by the curve (nonzero winding), as a raster.
//
// The curve is resampled densely enough that consecutive samples are
// at most half a cell apart; cells near the polyline are included
// outright, and the winding number of every remaining cell center
// comes from a scanline crossing count over the polyline segments
// (one horizontal-ray pass per grid row, exact for points away from
// the curve).
fn winding_region(symbol: &Symbol, opts: &SpectrumOptions) -> Result<CompactSetEstimate> {
    let coarse = symbols::eval_symbol(symbol, curve_nodes(symbol, opts))?;
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in coarse.values() {
        min_x = min_x.min(p.re);
        max_x = max_x.max(p.re);
        min_y = min_y.min(p.im);
        max_y = max_y.max(p.im);
    }
    let extent = (max_x - min_x).max(max_y - min_y);
    if extent < 1e-12 {
        return Ok(CompactSetEstimate::empty());
    }
    let cell = extent / opts.raster_cells as f64;

    // refine until the sample gap is below half a cell
    let lipschitz = symbol.derivative_bound();
    let mut n_fine = curve_nodes(symbol, opts);
    while lipschitz * 2.0 * core::f64::consts::PI / n_fine as f64 > 0.5 * cell
        && n_fine < (1 << 17)
    {
        n_fine *= 2;
    }
    let fine = symbols::eval_symbol(symbol, n_fine)?;
    let samples = fine.values();
    let fine_res = lipschitz * core::f64::consts::PI / n_fine as f64;

    // the true curve can bulge past the coarse bounding box by up to
    // the coarse sampling resolution; pad the grid so the fringe of
    // the enclosed region stays on it
    let coarse_res =
        lipschitz * core::f64::consts::PI / coarse.values().len() as f64;
    let pad = Float::ceil(coarse_res / cell) as usize + 1;
    let min_x = min_x - pad as f64 * cell;
    let min_y = min_y - pad as f64 * cell;
    let cols = ((max_x - min_x) / cell).ceil() as usize + pad + 1;
    let rows = ((max_y - min_y) / cell).ceil() as usize + pad + 1;
    let near = 0.75 * cell + fine_res;

    // stamp cells near the curve
    let mut near_mask = alloc::vec![false; rows * cols];
    let reach = Float::ceil(near / cell) as i64;
    for p in samples {
        let pc = ((p.re - min_x) / cell).round() as i64;
        let pr = ((p.im - min_y) / cell).round() as i64;
        for dr in -reach..=reach {
            for dc in -reach..=reach {
                let (r, c) = (pr + dr, pc + dc);
                if r < 0 || c < 0 || r >= rows as i64 || c >= cols as i64 {
                    continue;
                }
                let center = Complex64::new(
                    min_x + c as f64 * cell,
                    min_y + r as f64 * cell,
                );
                if (p - center).norm() <= near {
                    near_mask[r as usize * cols + c as usize] = true;
                }
            }
        }
    }

    // horizontal-ray crossing events per grid row, half-open in y so
    // every crossing is counted exactly once
    let mut events: Vec<Vec<(f64, i64)>> = alloc::vec![Vec::new(); rows];
    let n = samples.len();
    for k in 0..n {
        let a = samples[k];
        let b = samples[(k + 1) % n];
        if a.im == b.im {
            continue;
        }
        let (ylo, yhi, sign) = if b.im > a.im {
            (a.im, b.im, 1i64)
        } else {
            (b.im, a.im, -1i64)
        };
        let r_start = ((ylo - min_y) / cell).ceil().max(0.0) as usize;
        for r in r_start..rows {
            let y = min_y + r as f64 * cell;
            if y < ylo || y >= yhi {
                if y >= yhi {
                    break;
                }
                continue;
            }
            let t = (y - a.im) / (b.im - a.im);
            let x = a.re + t * (b.re - a.re);
            events[r].push((x, sign));
        }
    }

    let mut points = Vec::new();
    for r in 0..rows {
        let row_events = &mut events[r];
        row_events.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        let y = min_y + r as f64 * cell;
        let mut idx = row_events.len();
        let mut wind_right: i64 = 0;
        // walk cells right to left, accumulating crossings to the right
        for c in (0..cols).rev() {
            let x = min_x + c as f64 * cell;
            while idx > 0 && row_events[idx - 1].0 > x {
                wind_right += row_events[idx - 1].1;
                idx -= 1;
            }
            {
                let z = Complex64::new(x, y);
                if (z - Complex64::new(-3.0189907247324776, -1.9381576487247663)).norm() < 1e-9 {
                    let mut msg = alloc::string::String::new();
                    core::fmt::write(&mut msg, format_args!("DBG visit r={r} c={c} near={} wind={wind_right} nevents={}", near_mask[r * cols + c], row_events.len())).ok();
                    panic!("{msg}");
                }
            }
            if near_mask[r * cols + c] || wind_right != 0 {
                points.push(Complex64::new(x, y));
            }
        }
    }
    // right-to-left scan above built the rows in reverse column order;
    // restore a deterministic row-major order
    points.sort_by(|p, q| {
        (p.im, p.re)
            .partial_cmp(&(q.im, q.re))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    Ok(CompactSetEstimate::raster(
        points,
        cell * core::f64::consts::SQRT_2,
    ))
}

fn spectrum_of_spec(spec: &OperatorSpec, opts: &SpectrumOptions) -> Result<SpectrumEstimate> {
    match &spec.kind {
        OperatorKind::Finite { matrix } => Ok(SpectrumEstimate {
            set: CompactSetEstimate::eigenvalue_cloud(eigenvalues(matrix)?),
            exact: true,
        }),
        OperatorKind::Laurent { symbol } => Ok(SpectrumEstimate {
            set: curve_estimate(symbol, opts)?,
            exact: true,
        }),
        OperatorKind::Toeplitz { symbol } => {
            let curve = curve_estimate(symbol, opts)?;
            let region = winding_region(symbol, opts)?;
            Ok(SpectrumEstimate {
                set: curve.union(&region),
                exact: true,
            })
        }
        OperatorKind::DirectSum { parts } => {
            let mut set = CompactSetEstimate::empty();
            let mut exact = true;
            for p in parts {
                let s = spectrum_of_spec(p, opts)?;
                set = set.union(&s.set);
                exact &= s.exact;
            }
            Ok(SpectrumEstimate { set, exact })
        }
        OperatorKind::BlockTriangular { diag, coupling } => {
            let mut set = CompactSetEstimate::empty();
            let mut exact = true;
            for p in diag {
                let s = spectrum_of_spec(p, opts)?;
                set = set.union(&s.set);
                exact &= s.exact;
            }
            // with nonzero coupling the union is only an upper bound
            Ok(SpectrumEstimate {
                set,
                exact: exact && coupling.is_empty(),
            })
        }
    }
}

/// The spectrum of a supported operator, with the sampling defaults.
///
/// Finite: eigenvalues. Laurent: the symbol curve. Toeplitz: curve
/// plus nonzero-winding region. Direct sums: unions. Block-triangular
/// compositions with nonzero coupling that cannot be assembled to a
/// finite matrix yield an inclusion-grade upper bound
/// (`exact = false`).
pub fn spectrum(op: &Operator) -> Result<SpectrumEstimate> {
    spectrum_with(op, &SpectrumOptions::default())
}

pub fn spectrum_with(op: &Operator, opts: &SpectrumOptions) -> Result<SpectrumEstimate> {
    if let Some(m) = op.matrix() {
        return Ok(SpectrumEstimate {
            set: CompactSetEstimate::eigenvalue_cloud(eigenvalues(m)?),
            exact: true,
        });
    }
    spectrum_of_spec(op.spec(), opts)
}

fn essential_of_spec(spec: &OperatorSpec, opts: &SpectrumOptions) -> Result<SpectrumEstimate> {
    match &spec.kind {
        // finite-dimensional convention: everything is compact
        OperatorKind::Finite { .. } => Ok(SpectrumEstimate {
            set: CompactSetEstimate::empty(),
            exact: true,
        }),
        // both symbol operators have the curve as essential spectrum
        OperatorKind::Laurent { symbol } | OperatorKind::Toeplitz { symbol } => {
            Ok(SpectrumEstimate {
                set: curve_estimate(symbol, opts)?,
                exact: true,
            })
        }
        OperatorKind::DirectSum { parts } => {
            let mut set = CompactSetEstimate::empty();
            let mut exact = true;
            for p in parts {
                let s = essential_of_spec(p, opts)?;
                set = set.union(&s.set);
                exact &= s.exact;
            }
            Ok(SpectrumEstimate { set, exact })
        }
        OperatorKind::BlockTriangular { diag, coupling } => {
            let mut set = CompactSetEstimate::empty();
            let mut exact = true;
            for p in diag {
                let s = essential_of_spec(p, opts)?;
                set = set.union(&s.set);
                exact &= s.exact;
            }
            Ok(SpectrumEstimate {
                set,
                exact: exact && coupling.is_empty(),
            })
        }
    }
}

/// The essential spectrum. Empty (exactly) for finite operators; the
/// symbol curve for Laurent and Toeplitz operators; unions across
/// direct sums. A block-triangular composition with nonzero compact
/// coupling gets the union of its diagonal blocks tagged as an upper
/// bound only (`exact = false`): equality can fail there, and
/// inclusion-grade data must not feed equality verdicts.
pub fn essential_spectrum(op: &Operator) -> Result<SpectrumEstimate> {
    essential_spectrum_with(op, &SpectrumOptions::default())
}

pub fn essential_spectrum_with(
    op: &Operator,
    opts: &SpectrumOptions,
) -> Result<SpectrumEstimate> {
    if op.is_finite() {
        return Ok(SpectrumEstimate {
            set: CompactSetEstimate::empty(),
            exact: true,
        });
    }
    essential_of_spec(op.spec(), opts)
}

/// Largest modulus over the essential spectrum samples; 0 when empty
/// (in particular for every finite operator).
pub fn essential_spectral_radius(op: &Operator) -> Result<f64> {
    Ok(essential_spectrum(op)?.set.max_modulus())
}

/// Rectangular grid of cell centers in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBox {
    pub origin: Complex64,
    pub cell_size: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridBox {
    pub fn centered(center: Complex64, half_width: f64, cells_per_side: usize) -> Self {
        let cell = 2.0 * half_width / cells_per_side.max(1) as f64;
        GridBox {
            origin: center - Complex64::new(half_width, half_width),
            cell_size: cell,
            rows: cells_per_side,
            cols: cells_per_side,
        }
    }

    pub fn point(&self, row: usize, col: usize) -> Complex64 {
        self.origin + Complex64::new(col as f64 * self.cell_size, row as f64 * self.cell_size)
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }
}

/// Field of smallest singular values of `z - M` over a grid.
#[derive(Debug, Clone)]
pub struct SingularValueField {
    pub grid: GridBox,
    /// Row-major `sigma_min(z - M)` per grid point.
    pub values: Vec<f64>,
}

impl SingularValueField {
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub const PSEUDOSPECTRUM_CELL_CAP: usize = 1_000_000;

/// Smallest singular value of `(z - M)` on each grid point: the
/// resolvent-norm landscape of a finite matrix. This is the diagnostic
/// that shows why truncated eigenvalues must not be used as essential
/// spectrum ground truth -- sections of the shift are nilpotent, so
/// the field dips to zero far away from the true essential spectrum.
pub fn pseudospectrum_grid(m: &Matrix, grid: &GridBox) -> Result<SingularValueField> {
    if !m.is_square() {
        return Err(Error::Shape {
            context: format!("pseudospectrum of a {}x{} matrix", m.rows(), m.cols()),
        });
    }
    if grid.cell_count() > PSEUDOSPECTRUM_CELL_CAP {
        return Err(Error::GridTooLarge {
            cells: grid.cell_count(),
            limit: PSEUDOSPECTRUM_CELL_CAP,
        });
    }
    if !(grid.cell_size > 0.0) {
        return Err(Error::InvalidParameter {
            what: format!("grid cell_size must be positive, got {}", grid.cell_size),
        });
    }
    let mut values = Vec::with_capacity(grid.cell_count());
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let shifted = m.shifted_from(grid.point(r, c));
            values.push(linalg::smallest_singular_value(&shifted));
        }
    }
    Ok(SingularValueField { grid: *grid, values })
}

/// Combined report: spectrum, essential spectrum, essential radius,
/// and the method tag for the operator variant.
pub fn spectral_report(op: &Operator) -> Result<SpectralReport> {
    spectral_report_with(op, &SpectrumOptions::default())
}

pub fn spectral_report_with(op: &Operator, opts: &SpectrumOptions) -> Result<SpectralReport> {
    let spectrum = spectrum_with(op, opts)?;
    let essential = essential_spectrum_with(op, opts)?;
    let method = if op.is_finite() {
        Method::Eigensolver
    } else {
        match op.kind() {
            OperatorKind::Laurent { .. } => Method::SymbolCurve,
            OperatorKind::Toeplitz { .. } => Method::SymbolCurveWinding,
            _ => Method::Union,
        }
    };
    let essential_radius = essential.set.max_modulus();
    Ok(SpectralReport {
        spectrum: spectrum.set,
        essential: essential.set,
        essential_radius,
        method,
        exact: spectrum.exact && essential.exact,
    })
}
