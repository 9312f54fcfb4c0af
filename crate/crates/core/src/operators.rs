//! The operator menagerie: finite matrices, Laurent and Toeplitz
//! operators given by symbols, direct sums, and block-triangular
//! compositions -- together with invariant-subspace machinery: the
//! invariance defect, the induced restriction/quotient pair, and
//! finite sections.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::symbols::{negative_part_norm, Symbol};

/// Numerical rank floor for basis matrices: smallest singular value
/// must exceed this fraction of the largest.
pub const BASIS_RANK_TOL: f64 = 1e-10;

/// Default invariance tolerance for `induce`.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Symbolic description of an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// Dense square complex matrix.
    Finite { matrix: Matrix },
    /// Bi-infinite banded matrix `L(a)[j][k] = a_hat[j-k]`, `j, k` in Z.
    Laurent { symbol: Symbol },
    /// Half-line compression of the Laurent operator, `j, k >= 0`.
    Toeplitz { symbol: Symbol },
    /// Block-diagonal composition.
    DirectSum { parts: Vec<OperatorSpec> },
    /// Strictly upper-triangular block coupling over a block diagonal.
    BlockTriangular {
        diag: Vec<OperatorSpec>,
        coupling: Vec<CouplingBlock>,
    },
}

/// Finite-rank coupling from block `row` into block `col` (`row < col`)
/// of a block-triangular composition. Both endpoint blocks must be
/// finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingBlock {
    pub row: usize,
    pub col: usize,
    pub matrix: Matrix,
}

impl OperatorSpec {
    pub fn finite(matrix: Matrix, label: impl Into<String>) -> Self {
        OperatorSpec {
            kind: OperatorKind::Finite { matrix },
            label: label.into(),
        }
    }

    pub fn laurent(symbol: Symbol, label: impl Into<String>) -> Self {
        OperatorSpec {
            kind: OperatorKind::Laurent { symbol },
            label: label.into(),
        }
    }

    pub fn toeplitz(symbol: Symbol, label: impl Into<String>) -> Self {
        OperatorSpec {
            kind: OperatorKind::Toeplitz { symbol },
            label: label.into(),
        }
    }

    pub fn direct_sum(parts: Vec<OperatorSpec>, label: impl Into<String>) -> Self {
        OperatorSpec {
            kind: OperatorKind::DirectSum { parts },
            label: label.into(),
        }
    }

    pub fn block_triangular(
        diag: Vec<OperatorSpec>,
        coupling: Vec<CouplingBlock>,
        label: impl Into<String>,
    ) -> Self {
        OperatorSpec {
            kind: OperatorKind::BlockTriangular { diag, coupling },
            label: label.into(),
        }
    }
}

/// Description of a closed invariant-subspace candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSpec {
    pub kind: SubspaceKind,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubspaceKind {
    /// Span of the coordinate vectors with the given indices
    /// (finite hosts).
    Coordinate { indices: BTreeSet<usize> },
    /// Span of `e_k` for `k >= start` (Laurent hosts).
    Halfline { start: i64 },
    /// Range of a full-column-rank matrix (finite hosts).
    Basis { matrix: Matrix },
}

impl SubspaceSpec {
    pub fn coordinate(indices: impl IntoIterator<Item = usize>, label: impl Into<String>) -> Self {
        SubspaceSpec {
            kind: SubspaceKind::Coordinate {
                indices: indices.into_iter().collect(),
            },
            label: label.into(),
        }
    }

    pub fn halfline(start: i64, label: impl Into<String>) -> Self {
        SubspaceSpec {
            kind: SubspaceKind::Halfline { start },
            label: label.into(),
        }
    }

    pub fn basis(matrix: Matrix, label: impl Into<String>) -> Self {
        SubspaceSpec {
            kind: SubspaceKind::Basis { matrix },
            label: label.into(),
        }
    }
}

/// A validated, immutable operator. Finite compositions carry their
/// assembled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    spec: OperatorSpec,
    assembled: Option<Matrix>,
}

impl Operator {
    pub fn spec(&self) -> &OperatorSpec {
        &self.spec
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.spec.kind
    }

    pub fn label(&self) -> &str {
        &self.spec.label
    }

    /// Total dimension when every constituent is finite.
    pub fn dim(&self) -> Option<usize> {
        self.assembled.as_ref().map(|m| m.rows())
    }

    pub fn is_finite(&self) -> bool {
        self.assembled.is_some()
    }

    /// Assembled dense matrix for all-finite operators.
    pub fn matrix(&self) -> Option<&Matrix> {
        self.assembled.as_ref()
    }

    /// The symbol, for plain Laurent/Toeplitz operators.
    pub fn symbol(&self) -> Option<&Symbol> {
        match &self.spec.kind {
            OperatorKind::Laurent { symbol } | OperatorKind::Toeplitz { symbol } => Some(symbol),
            _ => None,
        }
    }
}

fn spec_dim(spec: &OperatorSpec) -> Option<usize> {
    match &spec.kind {
        OperatorKind::Finite { matrix } => Some(matrix.rows()),
        OperatorKind::Laurent { .. } | OperatorKind::Toeplitz { .. } => None,
        OperatorKind::DirectSum { parts } => {
            parts.iter().map(spec_dim).sum::<Option<usize>>()
        }
        OperatorKind::BlockTriangular { diag, .. } => {
            diag.iter().map(spec_dim).sum::<Option<usize>>()
        }
    }
}

fn validate(spec: &OperatorSpec, path: &str) -> Result<()> {
    match &spec.kind {
        OperatorKind::Finite { matrix } => {
            if !matrix.is_square() {
                return Err(Error::Validation {
                    path: format!("{path}.matrix"),
                    reason: format!("finite matrix must be square, got {}x{}", matrix.rows(), matrix.cols()),
                });
            }
            if matrix.rows() == 0 {
                return Err(Error::Validation {
                    path: format!("{path}.matrix"),
                    reason: "finite matrix must be nonempty".into(),
                });
            }
            Ok(())
        }
        OperatorKind::Laurent { .. } | OperatorKind::Toeplitz { .. } => Ok(()),
        OperatorKind::DirectSum { parts } => {
            if parts.is_empty() {
                return Err(Error::Validation {
                    path: format!("{path}.parts"),
                    reason: "direct sum needs at least one part".into(),
                });
            }
            for (i, p) in parts.iter().enumerate() {
                validate(p, &format!("{path}.parts[{i}]"))?;
            }
            Ok(())
        }
        OperatorKind::BlockTriangular { diag, coupling } => {
            if diag.is_empty() {
                return Err(Error::Validation {
                    path: format!("{path}.diag"),
                    reason: "block triangular needs at least one diagonal block".into(),
                });
            }
            for (i, p) in diag.iter().enumerate() {
                validate(p, &format!("{path}.diag[{i}]"))?;
            }
            for (i, c) in coupling.iter().enumerate() {
                let cpath = format!("{path}.coupling[{i}]");
                if c.row >= c.col {
                    return Err(Error::Validation {
                        path: cpath,
                        reason: format!(
                            "coupling must be strictly upper: row {} !< col {}",
                            c.row, c.col
                        ),
                    });
                }
                if c.col >= diag.len() {
                    return Err(Error::Validation {
                        path: cpath,
                        reason: format!("coupling col {} beyond {} blocks", c.col, diag.len()),
                    });
                }
                let (rd, cd) = (spec_dim(&diag[c.row]), spec_dim(&diag[c.col]));
                match (rd, cd) {
                    (Some(r), Some(cc)) => {
                        if c.matrix.rows() != r || c.matrix.cols() != cc {
                            return Err(Error::Validation {
                                path: format!("{cpath}.matrix"),
                                reason: format!(
                                    "coupling shape {}x{} does not match blocks {}x{}",
                                    c.matrix.rows(),
                                    c.matrix.cols(),
                                    r,
                                    cc
                                ),
                            });
                        }
                    }
                    _ => {
                        return Err(Error::Validation {
                            path: cpath,
                            reason: "coupling endpoints must be finite blocks".into(),
                        });
                    }
                }
            }
            Ok(())
        }
    }
}

fn assemble(spec: &OperatorSpec) -> Option<Matrix> {
    match &spec.kind {
        OperatorKind::Finite { matrix } => Some(matrix.clone()),
        OperatorKind::Laurent { .. } | OperatorKind::Toeplitz { .. } => None,
        OperatorKind::DirectSum { parts } => {
            let blocks: Option<Vec<Matrix>> = parts.iter().map(assemble).collect();
            let blocks = blocks?;
            let n: usize = blocks.iter().map(|b| b.rows()).sum();
            let mut m = Matrix::zeros(n, n);
            let mut off = 0;
            for b in &blocks {
                m.set_block(off, off, b);
                off += b.rows();
            }
            Some(m)
        }
        OperatorKind::BlockTriangular { diag, coupling } => {
            let blocks: Option<Vec<Matrix>> = diag.iter().map(assemble).collect();
            let blocks = blocks?;
            let offsets: Vec<usize> = blocks
                .iter()
                .scan(0usize, |acc, b| {
                    let o = *acc;
                    *acc += b.rows();
                    Some(o)
                })
                .collect();
            let n: usize = blocks.iter().map(|b| b.rows()).sum();
            let mut m = Matrix::zeros(n, n);
            for (b, &o) in blocks.iter().zip(&offsets) {
                m.set_block(o, o, b);
            }
            for c in coupling {
                m.set_block(offsets[c.row], offsets[c.col], &c.matrix);
            }
            Some(m)
        }
    }
}

/// Validates a spec and produces the immutable operator value.
/// All-finite compositions are assembled to a dense matrix up front.
pub fn build_operator(spec: OperatorSpec) -> Result<Operator> {
    validate(&spec, &spec.label.clone())?;
    let assembled = assemble(&spec);
    Ok(Operator { spec, assembled })
}

fn coordinate_complement(indices: &BTreeSet<usize>, n: usize) -> Vec<usize> {
    (0..n).filter(|i| !indices.contains(i)).collect()
}

fn check_coordinate(indices: &BTreeSet<usize>, n: usize) -> Result<()> {
    if let Some(&max) = indices.iter().max() {
        if max >= n {
            return Err(Error::Shape {
                context: format!("coordinate index {max} beyond host dimension {n}"),
            });
        }
    }
    if indices.is_empty() || indices.len() == n {
        return Err(Error::InvalidParameter {
            what: format!(
                "coordinate subspace must be proper and nonzero ({} of {n} indices)",
                indices.len()
            ),
        });
    }
    Ok(())
}

/// Orthonormal-basis data for a finite induced pair: the unitary
/// `transform` whose first `dim_f` columns span the subspace.
#[derive(Debug, Clone)]
pub struct InducedBasis {
    pub transform: Matrix,
    pub dim_f: usize,
}

/// The restriction/quotient pair induced by an invariant subspace.
#[derive(Debug, Clone)]
pub struct InducedPair {
    pub restriction: Operator,
    pub quotient: Operator,
    pub basis: Option<InducedBasis>,
}

/// `||Q_F T i_F||`: how far `F` is from being invariant under `T`.
///
/// Finite hosts: spectral norm of the compression of `T` mapping `F`
/// into the complement. Laurent hosts with a half-line subspace: the
/// l2 norm of the negative-index symbol coefficients (zero exactly
/// when the symbol is analytic). Zero within roundoff means `T` leaves
/// `F` invariant.
pub fn invariance_defect(op: &Operator, f: &SubspaceSpec) -> Result<f64> {
    defect_of_spec(op.spec(), op.matrix(), f)
}

fn defect_of_spec(spec: &OperatorSpec, assembled: Option<&Matrix>, f: &SubspaceSpec) -> Result<f64> {
    match (&f.kind, assembled) {
        (SubspaceKind::Coordinate { indices }, Some(m)) => {
            let n = m.rows();
            check_coordinate(indices, n)?;
            let inside: Vec<usize> = indices.iter().copied().collect();
            let outside = coordinate_complement(indices, n);
            let block = Matrix::from_fn(outside.len(), inside.len(), |r, c| {
                m[(outside[r], inside[c])]
            });
            Ok(linalg::spectral_norm(&block))
        }
        (SubspaceKind::Basis { matrix: v }, Some(m)) => {
            let (q1, q2) = orthonormal_split(v, m.rows())?;
            Ok(linalg::spectral_norm(&q2.adjoint().mul(m).mul(&q1)))
        }
        (SubspaceKind::Halfline { .. }, None) => match &spec.kind {
            OperatorKind::Laurent { symbol } => Ok(negative_part_norm(symbol.coeffs())),
            OperatorKind::DirectSum { parts } => {
                let mut worst = 0.0f64;
                for p in parts {
                    worst = worst.max(defect_of_spec(p, assemble(p).as_ref(), f)?);
                }
                Ok(worst)
            }
            _ => Err(Error::Shape {
                context: format!(
                    "half-line subspaces pair with Laurent operators, not `{}`",
                    kind_name(&spec.kind)
                ),
            }),
        },
        (SubspaceKind::Halfline { .. }, Some(_)) => Err(Error::Shape {
            context: "half-line subspace against a finite operator".into(),
        }),
        (_, None) => Err(Error::Shape {
            context: "coordinate/basis subspaces need a finite host".into(),
        }),
    }
}

fn kind_name(kind: &OperatorKind) -> &'static str {
    match kind {
        OperatorKind::Finite { .. } => "finite",
        OperatorKind::Laurent { .. } => "laurent",
        OperatorKind::Toeplitz { .. } => "toeplitz",
        OperatorKind::DirectSum { .. } => "direct_sum",
        OperatorKind::BlockTriangular { .. } => "block_triangular",
    }
}

/// Splits a validated basis into orthonormal (range, complement)
/// factors via Householder completion.
fn orthonormal_split(v: &Matrix, n: usize) -> Result<(Matrix, Matrix)> {
    if v.rows() != n {
        return Err(Error::Shape {
            context: format!("basis has {} rows, host dimension is {n}", v.rows()),
        });
    }
    let k = v.cols();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter {
            what: format!("basis must span a proper nonzero subspace ({k} of {n} columns)"),
        });
    }
    let sv = linalg::singular_values(v);
    let ratio = sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0);
    if !(ratio > BASIS_RANK_TOL) {
        return Err(Error::RankDeficientBasis { sigma_ratio: ratio });
    }
    let u = linalg::complete_basis(v);
    Ok((u.block(0, 0, n, k), u.block(0, k, n, n - k)))
}

/// Computes the induced pair `(T|F, T/F)` after checking invariance.
///
/// Finite case: the subspace basis is completed to a unitary
/// `U = [V | W]` and the similarity `U^H T U` is read off blockwise;
/// its lower-left block has norm at most the invariance defect.
/// Laurent + half-line case: the restriction is the Toeplitz operator
/// of the same symbol and the quotient the Toeplitz operator of the
/// reflected symbol in the reversed complement coordinates
/// `m = -1 - j`, keeping both induced objects inside the symbol
/// calculus.
pub fn induce(op: &Operator, f: &SubspaceSpec, tol: f64) -> Result<InducedPair> {
    let defect = invariance_defect(op, f)?;
    if !(defect <= tol) {
        return Err(Error::NotInvariant {
            defect,
            tolerance: tol,
        });
    }
    let rlabel = format!("{}|{}", op.label(), f.label);
    let qlabel = format!("{}/{}", op.label(), f.label);

    match (&f.kind, op.matrix()) {
        (SubspaceKind::Coordinate { indices }, Some(m)) => {
            let n = m.rows();
            let inside: Vec<usize> = indices.iter().copied().collect();
            let outside = coordinate_complement(indices, n);
            let a = Matrix::from_fn(inside.len(), inside.len(), |r, c| {
                m[(inside[r], inside[c])]
            });
            let c_blk = Matrix::from_fn(outside.len(), outside.len(), |r, c| {
                m[(outside[r], outside[c])]
            });
            let mut u = Matrix::zeros(n, n);
            for (col, &i) in inside.iter().chain(outside.iter()).enumerate() {
                u[(i, col)] = Complex64::ONE;
            }
            Ok(InducedPair {
                restriction: build_operator(OperatorSpec::finite(a, rlabel))?,
                quotient: build_operator(OperatorSpec::finite(c_blk, qlabel))?,
                basis: Some(InducedBasis {
                    transform: u,
                    dim_f: inside.len(),
                }),
            })
        }
        (SubspaceKind::Basis { matrix: v }, Some(m)) => {
            let n = m.rows();
            let (q1, q2) = orthonormal_split(v, n)?;
            let a = q1.adjoint().mul(m).mul(&q1);
            let c_blk = q2.adjoint().mul(m).mul(&q2);
            let mut u = Matrix::zeros(n, n);
            u.set_block(0, 0, &q1);
            u.set_block(0, q1.cols(), &q2);
            Ok(InducedPair {
                restriction: build_operator(OperatorSpec::finite(a, rlabel))?,
                quotient: build_operator(OperatorSpec::finite(c_blk, qlabel))?,
                basis: Some(InducedBasis {
                    transform: u,
                    dim_f: q1.cols(),
                }),
            })
        }
        (SubspaceKind::Halfline { .. }, None) => {
            let (r, q) = induced_halfline_specs(op.spec(), &rlabel, &qlabel)?;
            Ok(InducedPair {
                restriction: build_operator(r)?,
                quotient: build_operator(q)?,
                basis: None,
            })
        }
        _ => Err(Error::Shape {
            context: "unsupported operator/subspace pairing".into(),
        }),
    }
}

fn induced_halfline_specs(
    spec: &OperatorSpec,
    rlabel: &str,
    qlabel: &str,
) -> Result<(OperatorSpec, OperatorSpec)> {
    match &spec.kind {
        OperatorKind::Laurent { symbol } => Ok((
            OperatorSpec::toeplitz(symbol.clone(), rlabel),
            OperatorSpec::toeplitz(symbol.reflect(), qlabel),
        )),
        OperatorKind::DirectSum { parts } => {
            let mut rs = Vec::with_capacity(parts.len());
            let mut qs = Vec::with_capacity(parts.len());
            for (i, p) in parts.iter().enumerate() {
                let (r, q) = induced_halfline_specs(
                    p,
                    &format!("{rlabel}[{i}]"),
                    &format!("{qlabel}[{i}]"),
                )?;
                rs.push(r);
                qs.push(q);
            }
            Ok((
                OperatorSpec::direct_sum(rs, rlabel),
                OperatorSpec::direct_sum(qs, qlabel),
            ))
        }
        _ => Err(Error::Shape {
            context: format!(
                "half-line induction defined for Laurent operators, not `{}`",
                kind_name(&spec.kind)
            ),
        }),
    }
}

/// Central `n x n` section of a banded symbol operator, entries
/// `a_hat[j - k]`; multiplicity expands each entry to a `d x d`
/// identity fiber (total dimension `n * d`). For both the Toeplitz and
/// the Laurent variant the section matrix is the same
/// Toeplitz-structured truncation.
pub fn finite_section(op: &Operator, n: usize) -> Result<Matrix> {
    let symbol = op.symbol().ok_or_else(|| Error::Unsupported {
        what: format!(
            "finite sections are defined for symbol operators, not `{}`",
            kind_name(op.kind())
        ),
    })?;
    let needed = 2 * symbol.bandwidth() as usize + 1;
    if n < needed {
        return Err(Error::InvalidParameter {
            what: format!("section size {n} below 2*bandwidth+1 = {needed}"),
        });
    }
    Ok(section_matrix(symbol, n, n))
}

fn section_matrix(symbol: &Symbol, rows: usize, cols: usize) -> Matrix {
    let scalar = Matrix::from_fn(rows, cols, |j, k| symbol.coeff(j as i64 - k as i64));
    if symbol.multiplicity() > 1 {
        scalar.kron(&Matrix::identity(symbol.multiplicity()))
    } else {
        scalar
    }
}

/// One row of the multiplicity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefectRow {
    pub multiplicity: usize,
    pub kernel_dim: usize,
    pub cokernel_defect: usize,
}

/// Threshold for counting near-kernel singular values in the sweep.
pub const DEFECT_SV_TOL: f64 = 1e-8;

/// Near-kernel counts of `lambda - T_n(w (x) I_d)` for the block
/// forward shift, over a list of multiplicities.
///
/// Counts singular values below `1e-8` of the largest on rectangular
/// truncations (full-band rows for the kernel side, full-band columns
/// for the cokernel side), which excludes the wrap-around artifacts of
/// the square section. At `lambda = 0` the cokernel defect equals `d`:
/// the mechanism by which the restricted shift loses lower
/// semi-Fredholmness as the multiplicity grows.
pub fn defect_dimension_sweep(
    d_list: &[usize],
    n: usize,
    lambda: Complex64,
) -> Result<Vec<DefectRow>> {
    if n < 4 {
        return Err(Error::InvalidParameter {
            what: format!("sweep section size {n} below minimum 4"),
        });
    }
    let mut out = Vec::with_capacity(d_list.len());
    for &d in d_list {
        if d == 0 {
            return Err(Error::InvalidParameter {
                what: "multiplicity 0 in sweep".into(),
            });
        }
        let symbol = Symbol::shift().with_multiplicity(d)?;
        let b = symbol.bandwidth() as usize;
        // tall: rows cover each column's full band -> kernel side
        let tall = shifted_section(&symbol, lambda, n + b, n);
        // wide: columns cover each row's full band -> cokernel side
        let wide = shifted_section(&symbol, lambda, n, n + b);
        out.push(DefectRow {
            multiplicity: d,
            kernel_dim: small_sv_count(&tall),
            cokernel_defect: small_sv_count(&wide),
        });
    }
    Ok(out)
}

// lambda*I - section on a rectangular index window
fn shifted_section(symbol: &Symbol, lambda: Complex64, rows: usize, cols: usize) -> Matrix {
    let section = section_matrix(symbol, rows, cols);
    let d = symbol.multiplicity();
    let mut m = section.map(|z| -z);
    for j in 0..rows.min(cols) * d {
        m[(j, j)] += lambda;
    }
    m
}

fn small_sv_count(m: &Matrix) -> usize {
    let sv = linalg::singular_values(m);
    match sv.first() {
        None => 0,
        Some(&s0) => {
            if s0 == 0.0 {
                sv.len()
            } else {
                sv.iter().filter(|&&s| s < DEFECT_SV_TOL * s0).count()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat2(a: f64, b: f64, d: f64, e: f64) -> Matrix {
        Matrix::from_rows(&[vec![c(a, 0.0), c(b, 0.0)], vec![c(d, 0.0), c(e, 0.0)]]).unwrap()
    }

    #[test]
    fn build_finite_and_validation_paths() {
        let t = build_operator(OperatorSpec::finite(mat2(1.0, 1.0, 0.0, 2.0), "T")).unwrap();
        assert_eq!(t.dim(), Some(2));

        let bad = OperatorSpec::finite(Matrix::zeros(2, 3), "bad");
        match build_operator(bad) {
            Err(Error::Validation { path, .. }) => assert!(path.contains("matrix")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn build_laurent_shift() {
        let t = build_operator(OperatorSpec::laurent(Symbol::shift(), "shift")).unwrap();
        assert!(!t.is_finite());
        assert_eq!(t.symbol().unwrap().bandwidth(), 1);
    }

    #[test]
    fn direct_sum_assembles_block_diagonal() {
        let spec = OperatorSpec::direct_sum(
            vec![
                OperatorSpec::finite(mat2(1.0, 0.0, 0.0, 2.0), "a"),
                OperatorSpec::finite(mat2(3.0, 0.0, 0.0, 4.0), "b"),
            ],
            "a+b",
        );
        let t = build_operator(spec).unwrap();
        let m = t.matrix().unwrap();
        assert_eq!(m.rows(), 4);
        assert_eq!(m[(2, 2)], c(3.0, 0.0));
        assert_eq!(m[(0, 2)], Complex64::ZERO);
    }

    #[test]
    fn block_triangular_coupling_validated() {
        let blocks = vec![
            OperatorSpec::finite(mat2(1.0, 0.0, 0.0, 2.0), "a"),
            OperatorSpec::finite(mat2(3.0, 0.0, 0.0, 4.0), "b"),
        ];
        let good = CouplingBlock {
            row: 0,
            col: 1,
            matrix: mat2(1.0, 0.0, 0.0, 1.0),
        };
        let t = build_operator(OperatorSpec::block_triangular(
            blocks.clone(),
            vec![good.clone()],
            "t",
        ))
        .unwrap();
        assert_eq!(t.matrix().unwrap()[(0, 2)], c(1.0, 0.0));
        assert_eq!(t.matrix().unwrap()[(2, 0)], Complex64::ZERO);

        let lower = CouplingBlock {
            row: 1,
            col: 0,
            matrix: mat2(1.0, 0.0, 0.0, 1.0),
        };
        assert!(matches!(
            build_operator(OperatorSpec::block_triangular(blocks, vec![lower], "t")),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn invariance_defect_examples() {
        let upper = build_operator(OperatorSpec::finite(mat2(1.0, 1.0, 0.0, 2.0), "u")).unwrap();
        let f0 = SubspaceSpec::coordinate([0], "F");
        assert!(invariance_defect(&upper, &f0).unwrap() < 1e-15);

        let lower = build_operator(OperatorSpec::finite(mat2(1.0, 0.0, 1.0, 2.0), "l")).unwrap();
        assert!((invariance_defect(&lower, &f0).unwrap() - 1.0).abs() < 1e-14);

        let a = Symbol::from_terms(&[(1, c(1.0, 0.0)), (-1, c(0.3, 0.0))], 1).unwrap();
        let t = build_operator(OperatorSpec::laurent(a, "t")).unwrap();
        let hl = SubspaceSpec::halfline(0, "H");
        assert!((invariance_defect(&t, &hl).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn induce_reads_off_triangular_blocks() {
        let t = build_operator(OperatorSpec::finite(mat2(1.0, 1.0, 0.0, 2.0), "T")).unwrap();
        let f = SubspaceSpec::coordinate([0], "F");
        let pair = induce(&t, &f, INVARIANCE_TOL).unwrap();
        assert_eq!(pair.restriction.matrix().unwrap()[(0, 0)], c(1.0, 0.0));
        assert_eq!(pair.quotient.matrix().unwrap()[(0, 0)], c(2.0, 0.0));
    }

    #[test]
    fn induce_refuses_non_invariant() {
        let t = build_operator(OperatorSpec::finite(mat2(1.0, 0.0, 1.0, 2.0), "T")).unwrap();
        let f = SubspaceSpec::coordinate([0], "F");
        assert!(matches!(
            induce(&t, &f, 1e-10),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn induce_shift_halfline() {
        let t = build_operator(OperatorSpec::laurent(Symbol::shift(), "S")).unwrap();
        let f = SubspaceSpec::halfline(0, "H");
        let pair = induce(&t, &f, INVARIANCE_TOL).unwrap();
        match pair.restriction.kind() {
            OperatorKind::Toeplitz { symbol } => {
                assert_eq!(symbol.coeff(1), c(1.0, 0.0));
                assert!(symbol.is_analytic());
            }
            other => panic!("expected toeplitz restriction, got {other:?}"),
        }
        match pair.quotient.kind() {
            OperatorKind::Toeplitz { symbol } => {
                assert_eq!(symbol.coeff(-1), c(1.0, 0.0));
                assert_eq!(symbol.coeff(1), Complex64::ZERO);
            }
            other => panic!("expected toeplitz quotient, got {other:?}"),
        }
    }

    #[test]
    fn induce_block_structure_recovered_exactly() {
        // 6x6 block upper triangular; 3-dim coordinate subspace:
        // restriction/quotient must equal the diagonal blocks to 1e-12
        let a = Matrix::from_fn(3, 3, |r, col| c((r * 3 + col) as f64, 0.3));
        let b = Matrix::from_fn(3, 3, |r, col| c(0.5 - col as f64, r as f64));
        let d = Matrix::from_fn(3, 3, |r, col| c((r as f64) - 1.0, (col as f64) * 0.2));
        let mut full = Matrix::zeros(6, 6);
        full.set_block(0, 0, &a);
        full.set_block(0, 3, &b);
        full.set_block(3, 3, &d);
        let t = build_operator(OperatorSpec::finite(full, "T")).unwrap();
        let f = SubspaceSpec::coordinate([0, 1, 2], "F");
        let pair = induce(&t, &f, INVARIANCE_TOL).unwrap();
        assert!(pair.restriction.matrix().unwrap().sub(&a).norm_fro() < 1e-12);
        assert!(pair.quotient.matrix().unwrap().sub(&d).norm_fro() < 1e-12);
    }

    #[test]
    fn induce_via_rotated_basis() {
        // F = span of a rotated basis of the first two coordinates of a
        // block-triangular T, checked through the generic QR path
        let t_mat = Matrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let t = build_operator(OperatorSpec::finite(t_mat, "T")).unwrap();
        let v = Matrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(-1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let f = SubspaceSpec::basis(v, "F");
        assert!(invariance_defect(&t, &f).unwrap() < 1e-14);
        let pair = induce(&t, &f, INVARIANCE_TOL).unwrap();
        // restriction is similar to the leading 2x2 block: same eigenvalues
        let mut eigs = linalg::eigenvalues(pair.restriction.matrix().unwrap()).unwrap();
        eigs.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((eigs[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((eigs[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((pair.quotient.matrix().unwrap()[(0, 0)] - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn restriction_homomorphism_on_products() {
        // induce(T^2, F).restriction == induce(T, F).restriction^2
        let m = Matrix::from_rows(&[
            vec![c(1.0, 0.2), c(0.3, 0.0), c(2.0, 1.0)],
            vec![c(-0.5, 0.0), c(0.7, -0.1), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let t = build_operator(OperatorSpec::finite(m.clone(), "T")).unwrap();
        let t2 = build_operator(OperatorSpec::finite(m.mul(&m), "T2")).unwrap();
        let f = SubspaceSpec::coordinate([0, 1], "F");
        let r1 = induce(&t, &f, 1e-9).unwrap();
        let r2 = induce(&t2, &f, 1e-9).unwrap();
        let r1sq = r1
            .restriction
            .matrix()
            .unwrap()
            .mul(r1.restriction.matrix().unwrap());
        assert!(r2.restriction.matrix().unwrap().sub(&r1sq).norm_fro() < 1e-10);
    }

    #[test]
    fn section_examples() {
        let toep = build_operator(OperatorSpec::toeplitz(Symbol::shift(), "S")).unwrap();
        let s3 = finite_section(&toep, 3).unwrap();
        let expect = Matrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(s3, expect);

        let const2 = build_operator(OperatorSpec::laurent(
            Symbol::constant(c(2.0, 0.0)),
            "2I",
        ))
        .unwrap();
        let s2 = finite_section(&const2, 2).unwrap();
        assert_eq!(s2, Matrix::diag(&[c(2.0, 0.0), c(2.0, 0.0)]));

        let tri = build_operator(OperatorSpec::toeplitz(
            Symbol::from_terms(&[(1, c(1.0, 0.0)), (-1, c(0.5, 0.0))], 1).unwrap(),
            "tri",
        ))
        .unwrap();
        let s4 = finite_section(&tri, 4).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                let expect = if j == k + 1 {
                    c(1.0, 0.0)
                } else if k == j + 1 {
                    c(0.5, 0.0)
                } else {
                    Complex64::ZERO
                };
                assert_eq!(s4[(j, k)], expect, "at ({j},{k})");
            }
        }
        // Toeplitz structure: entries depend only on j - k
        for j in 1..4 {
            for k in 1..4 {
                assert_eq!(s4[(j, k)], s4[(j - 1, k - 1)]);
            }
        }

        assert!(finite_section(&tri, 2).is_err());
    }

    #[test]
    fn rank_deficient_basis_refused() {
        let t = build_operator(OperatorSpec::finite(Matrix::identity(3), "I")).unwrap();
        let v = Matrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let f = SubspaceSpec::basis(v, "F");
        assert!(matches!(
            invariance_defect(&t, &f),
            Err(Error::RankDeficientBasis { .. })
        ));
    }

    #[test]
    fn section_of_finite_operator_unsupported() {
        let t = build_operator(OperatorSpec::finite(Matrix::identity(2), "I")).unwrap();
        assert!(matches!(
            finite_section(&t, 4),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn sweep_matches_multiplicity() {
        let rows = defect_dimension_sweep(&[1, 4], 16, Complex64::ZERO).unwrap();
        assert_eq!(rows[0].cokernel_defect, 1);
        assert_eq!(rows[0].kernel_dim, 0);
        assert_eq!(rows[1].cokernel_defect, 4);
        assert_eq!(rows[1].kernel_dim, 0);

        let away = defect_dimension_sweep(&[1], 16, c(2.0, 0.0)).unwrap();
        assert_eq!(away[0].cokernel_defect, 0);
        assert_eq!(away[0].kernel_dim, 0);
    }

    #[test]
    fn restricting_along_a_flag_composes() {
        // restrict twice along a coordinate flag == restrict once
        let m = Matrix::from_fn(5, 5, |r, col| {
            if r <= col {
                c((r + 2 * col) as f64 * 0.3 - 1.0, 0.1 * r as f64)
            } else {
                Complex64::ZERO
            }
        });
        let t = build_operator(OperatorSpec::finite(m, "T")).unwrap();
        let f3 = SubspaceSpec::coordinate([0, 1, 2], "F3");
        let f2 = SubspaceSpec::coordinate([0, 1], "F2");
        let once = induce(&t, &f2, 1e-9).unwrap();
        let twice_outer = induce(&t, &f3, 1e-9).unwrap();
        let twice = induce(&twice_outer.restriction, &f2, 1e-9).unwrap();
        let diff = once
            .restriction
            .matrix()
            .unwrap()
            .sub(twice.restriction.matrix().unwrap())
            .norm_fro();
        assert!(diff < 1e-10, "flag composition defect {diff}");
    }
}
