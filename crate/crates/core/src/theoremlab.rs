//! End-to-end verification of the spectral-inclusion statements on
//! configured (operator, subspace) pairs, with machine-readable
//! verdicts.
//!
//! Every verifier is strict about its hypotheses: a violated
//! precondition (non-invariant subspace, inexact set data, an
//! eigenvalue inside the hull of the rest) is an error distinct from a
//! failed verdict, so a theorem can never "pass" silently on data that
//! does not qualify. Set inclusions are tested as one-sided distances
//! against a slack-dilated hull: dilating the right-hand side can only
//! weaken a violation report, never fabricate one.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cplane::{self, CompactSetEstimate, HullRegion};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operators::{
    build_operator, induce, invariance_defect, Operator, OperatorSpec, SubspaceKind, SubspaceSpec,
};
use crate::projections::{self, contour_projection};
use crate::spectra::{self, SpectrumEstimate};
use crate::symbols::{self, Symbol};

/// Strict invariance tolerance required by the theorem hypotheses.
pub const HYPOTHESIS_TOL: f64 = 1e-10;

/// Residual bound for the resolvent-invariance check.
pub const OBS_I_TOL: f64 = 1e-9;

/// Residual bound for the essential-radius inequality.
pub const RADIUS_TOL: f64 = 1e-9;

/// Matching tolerance for finite spectra multiset comparisons.
pub const MATCH_TOL: f64 = 1e-8;

/// Residual bound on the projection invariance check.
pub const PROJ_INVARIANCE_TOL: f64 = 1e-9;

/// Residual bound on the projection commutation comparisons.
pub const PROJ_COMMUTE_TOL: f64 = 1e-8;

/// Node count for resolvent-symbol Fourier analysis.
pub const RESOLVENT_NODES: usize = 4096;

/// Which statement a verdict is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    Theorem1,
    RadiusInequality,
    ObsI,
    ObsII,
    ProjectionCommutation,
    FactA,
    FactC,
}

impl Statement {
    pub fn name(&self) -> &'static str {
        match self {
            Statement::Theorem1 => "theorem1",
            Statement::RadiusInequality => "radius_inequality",
            Statement::ObsI => "obs_i",
            Statement::ObsII => "obs_ii",
            Statement::ProjectionCommutation => "projection_commutation",
            Statement::FactA => "fact_a",
            Statement::FactC => "fact_c",
        }
    }

    pub fn from_name(name: &str) -> Option<Statement> {
        Some(match name {
            "theorem1" => Statement::Theorem1,
            "radius_inequality" => Statement::RadiusInequality,
            "obs_i" => Statement::ObsI,
            "obs_ii" => Statement::ObsII,
            "projection_commutation" => Statement::ProjectionCommutation,
            "fact_a" => Statement::FactA,
            "fact_c" => Statement::FactC,
            _ => return None,
        })
    }
}

/// Machine-readable verdict for one statement on one input pair.
///
/// `pass` holds exactly when `margin >= 0`. For inclusion statements
/// the margin is the remaining slack when the inclusion holds within
/// raster tolerance, and the (negative) overshoot past that tolerance
/// when it does not.
#[derive(Debug, Clone)]
pub struct VerdictReport {
    pub statement: Statement,
    pub pass: bool,
    pub margin: f64,
    pub details: BTreeMap<String, f64>,
    pub operator_label: String,
    pub subspace_label: String,
}

/// Raster geometry and tolerance for hull-based inclusion checks.
#[derive(Debug, Clone, Copy)]
pub struct HullSettings {
    pub cell_size: f64,
    pub margin: f64,
    /// Dilation applied to the hull before distance checks.
    pub slack: f64,
}

impl HullSettings {
    pub fn with_cell_size(cell_size: f64) -> Self {
        HullSettings {
            cell_size,
            margin: cplane::default_margin(cell_size),
            slack: 3.0 * cell_size,
        }
    }

    /// Inclusion tolerance of the raster: one cell diagonal.
    pub fn raster_tol(&self) -> f64 {
        self.cell_size * core::f64::consts::SQRT_2
    }
}

impl Default for HullSettings {
    fn default() -> Self {
        HullSettings::with_cell_size(0.02)
    }
}

fn require_invariant(op: &Operator, f: &SubspaceSpec) -> Result<f64> {
    let defect = invariance_defect(op, f)?;
    if !(defect <= HYPOTHESIS_TOL) {
        return Err(Error::NotInvariant {
            defect,
            tolerance: HYPOTHESIS_TOL,
        });
    }
    Ok(defect)
}

fn require_exact(est: &SpectrumEstimate, what: &str) -> Result<()> {
    if !est.exact {
        return Err(Error::NotVerifiable {
            reason: format!("{what} is available only as an upper bound"),
        });
    }
    Ok(())
}

fn dilated_hull(set: &CompactSetEstimate, settings: &HullSettings) -> Result<HullRegion> {
    let hull = cplane::polynomial_hull(set, settings.cell_size, settings.margin)?;
    Ok(hull.dilate(settings.slack))
}

// pass iff the worst distance stays within the raster tolerance;
// margin per the report convention
fn inclusion_verdict(worst: f64, settings: &HullSettings) -> (bool, f64) {
    let tol = settings.raster_tol();
    if worst <= tol {
        (true, settings.slack - worst)
    } else {
        (false, tol - worst)
    }
}

fn verdict(
    statement: Statement,
    pass: bool,
    margin: f64,
    details: BTreeMap<String, f64>,
    op: &Operator,
    f: &SubspaceSpec,
) -> VerdictReport {
    VerdictReport {
        statement,
        pass,
        margin,
        details,
        operator_label: op.label().to_string(),
        subspace_label: f.label.clone(),
    }
}

/// Essential-spectrum inclusion: both induced essential spectra must
/// lie in the (slack-dilated) polynomial hull of the essential
/// spectrum of the host operator.
pub fn verify_theorem1(
    op: &Operator,
    f: &SubspaceSpec,
    settings: &HullSettings,
) -> Result<VerdictReport> {
    let defect = require_invariant(op, f)?;
    // curve sampling dense enough to form the hull's flood-fill barrier
    let opts = spectra::SpectrumOptions::for_cell_size(settings.cell_size);
    let ess_host = spectra::essential_spectrum_with(op, &opts)?;
    require_exact(&ess_host, "essential spectrum of the host")?;
    let pair = induce(op, f, HYPOTHESIS_TOL)?;
    let ess_restriction = spectra::essential_spectrum_with(&pair.restriction, &opts)?;
    let ess_quotient = spectra::essential_spectrum_with(&pair.quotient, &opts)?;
    require_exact(&ess_restriction, "essential spectrum of the restriction")?;
    require_exact(&ess_quotient, "essential spectrum of the quotient")?;

    let hull = dilated_hull(&ess_host.set, settings)?;
    let d_restriction = cplane::one_sided_distance(&ess_restriction.set, &hull);
    let d_quotient = cplane::one_sided_distance(&ess_quotient.set, &hull);
    let worst = d_restriction.max(d_quotient);
    let (pass, margin) = inclusion_verdict(worst, settings);

    let mut details = BTreeMap::new();
    details.insert("invariance_defect".into(), defect);
    details.insert("restriction_distance".into(), d_restriction);
    details.insert("quotient_distance".into(), d_quotient);
    details.insert("hull_area".into(), hull.area());
    Ok(verdict(Statement::Theorem1, pass, margin, details, op, f))
}

/// `max(r_e(T|F), r_e(T/F)) <= r_e(T)` within 1e-9.
pub fn verify_radius_inequality(op: &Operator, f: &SubspaceSpec) -> Result<VerdictReport> {
    let defect = require_invariant(op, f)?;
    let ess_host = spectra::essential_spectrum(op)?;
    require_exact(&ess_host, "essential spectrum of the host")?;
    let pair = induce(op, f, HYPOTHESIS_TOL)?;
    let ess_restriction = spectra::essential_spectrum(&pair.restriction)?;
    let ess_quotient = spectra::essential_spectrum(&pair.quotient)?;
    require_exact(&ess_restriction, "essential spectrum of the restriction")?;
    require_exact(&ess_quotient, "essential spectrum of the quotient")?;

    let r_host = ess_host.set.max_modulus();
    let r_restriction = ess_restriction.set.max_modulus();
    let r_quotient = ess_quotient.set.max_modulus();
    let margin = r_host + RADIUS_TOL - r_restriction.max(r_quotient);
    let pass = margin >= 0.0;

    let mut details = BTreeMap::new();
    details.insert("invariance_defect".into(), defect);
    details.insert("host_radius".into(), r_host);
    details.insert("restriction_radius".into(), r_restriction);
    details.insert("quotient_radius".into(), r_quotient);
    Ok(verdict(
        Statement::RadiusInequality,
        pass,
        margin,
        details,
        op,
        f,
    ))
}

// invariance defect of the resolvent at z, per operator family
fn resolvent_defect(op: &Operator, f: &SubspaceSpec, z: Complex64) -> Result<f64> {
    if let Some(m) = op.matrix() {
        let res = projections::resolvent_apply(m, z)?;
        let res_op = build_operator(OperatorSpec::finite(res, "resolvent"))?;
        return invariance_defect(&res_op, f);
    }
    match (op.kind(), &f.kind) {
        (crate::operators::OperatorKind::Laurent { symbol }, SubspaceKind::Halfline { .. }) => {
            symbol_resolvent_defect(symbol, z)
        }
        (crate::operators::OperatorKind::DirectSum { parts }, SubspaceKind::Halfline { .. }) => {
            let mut worst = 0.0f64;
            for p in parts {
                let part_op = build_operator(p.clone())?;
                worst = worst.max(resolvent_defect(&part_op, f, z)?);
            }
            Ok(worst)
        }
        _ => Err(Error::Shape {
            context: "resolvent invariance defined for finite hosts and Laurent + half-line".into(),
        }),
    }
}

fn symbol_resolvent_defect(symbol: &Symbol, z: Complex64) -> Result<f64> {
    let sampling = symbols::resolvent_symbol(symbol, z, RESOLVENT_NODES)?;
    let negative = symbols::fourier_coefficients(&sampling, (-(RESOLVENT_NODES as i64) / 2, -1))?;
    Ok(symbols::negative_part_norm(&negative))
}

/// Resolvent invariance off the hull: for each probe point outside the
/// dilated hull of the spectrum, the invariance defect of
/// `(z - T)^{-1}` must vanish (within 1e-9). Probes inside a spectral
/// hole are evaluated and reported but exempt from the bound -- inside
/// the hull nothing forces the resolvent to respect the subspace.
pub fn verify_obs_i(
    op: &Operator,
    f: &SubspaceSpec,
    probes: &[Complex64],
    settings: &HullSettings,
) -> Result<VerdictReport> {
    let defect = require_invariant(op, f)?;
    let opts = spectra::SpectrumOptions::for_cell_size(settings.cell_size);
    let spec_host = spectra::spectrum_with(op, &opts)?;
    require_exact(&spec_host, "spectrum of the host")?;
    let hull = dilated_hull(&spec_host.set, settings)?;

    let mut details = BTreeMap::new();
    details.insert("invariance_defect".into(), defect);
    let mut worst_outside = 0.0f64;
    for (i, &z) in probes.iter().enumerate() {
        let outside = !hull.contains(z, 0.0);
        let residual = resolvent_defect(op, f, z)?;
        details.insert(format!("probe{i}_re"), z.re);
        details.insert(format!("probe{i}_im"), z.im);
        details.insert(format!("probe{i}_outside"), if outside { 1.0 } else { 0.0 });
        details.insert(format!("probe{i}_residual"), residual);
        if outside {
            worst_outside = worst_outside.max(residual);
        }
    }
    let margin = OBS_I_TOL - worst_outside;
    Ok(verdict(
        Statement::ObsI,
        margin >= 0.0,
        margin,
        details,
        op,
        f,
    ))
}

/// Full-spectrum inclusion: the spectra of both induced operators must
/// lie in the (slack-dilated) hull of the spectrum of the host.
pub fn verify_obs_ii(
    op: &Operator,
    f: &SubspaceSpec,
    settings: &HullSettings,
) -> Result<VerdictReport> {
    let defect = require_invariant(op, f)?;
    let opts = spectra::SpectrumOptions::for_cell_size(settings.cell_size);
    let spec_host = spectra::spectrum_with(op, &opts)?;
    require_exact(&spec_host, "spectrum of the host")?;
    let pair = induce(op, f, HYPOTHESIS_TOL)?;
    let spec_restriction = spectra::spectrum_with(&pair.restriction, &opts)?;
    let spec_quotient = spectra::spectrum_with(&pair.quotient, &opts)?;
    require_exact(&spec_restriction, "spectrum of the restriction")?;
    require_exact(&spec_quotient, "spectrum of the quotient")?;

    let hull = dilated_hull(&spec_host.set, settings)?;
    let d_restriction = cplane::one_sided_distance(&spec_restriction.set, &hull);
    let d_quotient = cplane::one_sided_distance(&spec_quotient.set, &hull);
    let worst = d_restriction.max(d_quotient);
    let (pass, margin) = inclusion_verdict(worst, settings);

    let mut details = BTreeMap::new();
    details.insert("invariance_defect".into(), defect);
    details.insert("restriction_distance".into(), d_restriction);
    details.insert("quotient_distance".into(), d_quotient);
    Ok(verdict(Statement::ObsII, pass, margin, details, op, f))
}

/// The spectral projection at an isolated eigenvalue respects the
/// invariant subspace and commutes with induction: restricting the
/// contour projection equals the contour projection of the
/// restriction, and likewise for the quotient.
///
/// Hypotheses checked strictly before any verdict: `F` invariant,
/// `lambda` enclosed by the contour with the remaining spectrum
/// cleanly outside, and `lambda` outside the rasterized hull of the
/// remaining spectrum.
pub fn verify_projection_commutation(
    op: &Operator,
    f: &SubspaceSpec,
    lambda: Complex64,
    radius: f64,
    nodes: usize,
    settings: &HullSettings,
) -> Result<VerdictReport> {
    let m = op.matrix().ok_or_else(|| Error::Shape {
        context: "projection commutation runs on finite operators".into(),
    })?;
    let defect = require_invariant(op, f)?;

    let eigs = spectra::eigenvalues(m)?;
    let enclosed: Vec<Complex64> = eigs
        .iter()
        .copied()
        .filter(|e| (e - lambda).norm() < radius * (1.0 - projections::GAP_FACTOR))
        .collect();
    if enclosed.is_empty() {
        return Err(Error::HypothesisViolation {
            reason: format!("no eigenvalue of {} inside the contour", op.label()),
        });
    }
    let remaining: Vec<Complex64> = eigs
        .iter()
        .copied()
        .filter(|e| (e - lambda).norm() >= radius * (1.0 - projections::GAP_FACTOR))
        .collect();
    if !remaining.is_empty() {
        let rest_hull = cplane::polynomial_hull(
            &CompactSetEstimate::eigenvalue_cloud(remaining),
            settings.cell_size,
            settings.margin,
        )?;
        if rest_hull.contains(lambda, 0.0) {
            return Err(Error::HypothesisViolation {
                reason: "lambda lies inside the hull of the remaining spectrum".into(),
            });
        }
    }

    let projection = contour_projection(m, lambda, radius, nodes)?;
    let proj_op = build_operator(OperatorSpec::finite(
        projection.matrix.clone(),
        "projection",
    ))?;
    let proj_defect = invariance_defect(&proj_op, f)?;

    let pair = induce(op, f, HYPOTHESIS_TOL)?;
    let mut details = BTreeMap::new();
    details.insert("invariance_defect".into(), defect);
    details.insert("projection_invariance".into(), proj_defect);
    details.insert("projection_rank".into(), projection.rank as f64);

    // the comparison needs the induced blocks of P itself; a grossly
    // non-invariant P already fails the verdict on the first residual
    if proj_defect > 1e-6 {
        let margin = PROJ_INVARIANCE_TOL - proj_defect;
        return Ok(verdict(
            Statement::ProjectionCommutation,
            false,
            margin,
            details,
            op,
            f,
        ));
    }
    let proj_pair = induce(&proj_op, f, 1e-6)?;

    let restr_proj = contour_projection(
        pair.restriction.matrix().expect("finite restriction"),
        lambda,
        radius,
        nodes,
    )?;
    let r_restriction = restr_proj
        .matrix
        .sub(proj_pair.restriction.matrix().expect("finite block"))
        .norm_fro();

    let quot_proj = contour_projection(
        pair.quotient.matrix().expect("finite quotient"),
        lambda,
        radius,
        nodes,
    )?;
    let r_quotient = quot_proj
        .matrix
        .sub(proj_pair.quotient.matrix().expect("finite block"))
        .norm_fro();

    details.insert("restriction_residual".into(), r_restriction);
    details.insert("quotient_residual".into(), r_quotient);

    let margin = (PROJ_INVARIANCE_TOL - proj_defect)
        .min(PROJ_COMMUTE_TOL - r_restriction)
        .min(PROJ_COMMUTE_TOL - r_quotient);
    Ok(verdict(
        Statement::ProjectionCommutation,
        margin >= 0.0,
        margin,
        details,
        op,
        f,
    ))
}

// max over `from` of the distance to the nearest point of `to`
fn set_distance(from: &[Complex64], to: &[Complex64]) -> f64 {
    from.iter()
        .map(|a| {
            to.iter()
                .map(|b| (a - b).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Spectral union inclusions in the finite model: each of the spectra
/// of `T`, `T|F`, `T/F` is contained in the union of the other two
/// (within matching tolerance). Ordinary spectra stand proxy for
/// essential spectra, which are all empty in finite dimension.
pub fn verify_fact_a(op: &Operator, f: &SubspaceSpec) -> Result<VerdictReport> {
    let m = op.matrix().ok_or_else(|| Error::Shape {
        context: "the union inclusions run on the finite model".into(),
    })?;
    require_invariant(op, f)?;
    let pair = induce(op, f, HYPOTHESIS_TOL)?;
    let s_host = spectra::eigenvalues(m)?;
    let s_restriction = spectra::eigenvalues(pair.restriction.matrix().unwrap())?;
    let s_quotient = spectra::eigenvalues(pair.quotient.matrix().unwrap())?;

    let union_rq: Vec<Complex64> = s_restriction
        .iter()
        .chain(&s_quotient)
        .copied()
        .collect();
    let union_hq: Vec<Complex64> = s_host.iter().chain(&s_quotient).copied().collect();
    let union_hr: Vec<Complex64> = s_host.iter().chain(&s_restriction).copied().collect();

    let d_host = set_distance(&s_host, &union_rq);
    let d_restriction = set_distance(&s_restriction, &union_hq);
    let d_quotient = set_distance(&s_quotient, &union_hr);
    let worst = d_host.max(d_restriction).max(d_quotient);
    let margin = MATCH_TOL - worst;

    let mut details = BTreeMap::new();
    details.insert("host_distance".into(), d_host);
    details.insert("restriction_distance".into(), d_restriction);
    details.insert("quotient_distance".into(), d_quotient);
    Ok(verdict(
        Statement::FactA,
        margin >= 0.0,
        margin,
        details,
        op,
        f,
    ))
}

// greedy nearest-unused multiset matching distance; infinite on size
// mismatch
fn multiset_match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = alloc::vec![false; b.len()];
    let mut worst = 0.0f64;
    for &x in a {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, &y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (x - y).norm();
            if d < best {
                best = d;
                best_j = j;
            }
        }
        if best_j == usize::MAX {
            return f64::INFINITY;
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

/// Spectral union equality for complemented subspaces:
/// `sigma(T) = sigma(T|F) (+) sigma(T/F)` as multisets, which holds
/// when the complement of `F` is itself invariant. The complement
/// invariance is a hypothesis, checked via the upper-right block of
/// the similarity transform.
pub fn verify_fact_c(op: &Operator, f: &SubspaceSpec) -> Result<VerdictReport> {
    let m = op.matrix().ok_or_else(|| Error::Shape {
        context: "the union equality runs on the finite model".into(),
    })?;
    require_invariant(op, f)?;
    let pair = induce(op, f, HYPOTHESIS_TOL)?;
    let basis = pair.basis.as_ref().expect("finite induction carries a basis");
    let transformed = basis.transform.adjoint().mul(m).mul(&basis.transform);
    let k = basis.dim_f;
    let coupling = transformed.block(0, k, k, m.rows() - k);
    let complement_defect = linalg::spectral_norm(&coupling);
    if complement_defect > HYPOTHESIS_TOL {
        return Err(Error::HypothesisViolation {
            reason: format!(
                "complement is not invariant (coupling norm {complement_defect:.3e})"
            ),
        });
    }

    let s_host = spectra::eigenvalues(m)?;
    let union: Vec<Complex64> = spectra::eigenvalues(pair.restriction.matrix().unwrap())?
        .into_iter()
        .chain(spectra::eigenvalues(pair.quotient.matrix().unwrap())?)
        .collect();
    let dist = multiset_match_distance(&s_host, &union);
    let margin = MATCH_TOL - dist;

    let mut details = BTreeMap::new();
    details.insert("matching_distance".into(), dist);
    details.insert("complement_defect".into(), complement_defect);
    Ok(verdict(
        Statement::FactC,
        margin >= 0.0,
        margin,
        details,
        op,
        f,
    ))
}

/// Contour parameters for projection checks inside a suite.
#[derive(Debug, Clone, Copy)]
pub struct ContourSettings {
    pub nodes: usize,
    pub lambda: Option<Complex64>,
    pub radius: Option<f64>,
}

impl Default for ContourSettings {
    fn default() -> Self {
        ContourSettings {
            nodes: projections::DEFAULT_NODES,
            lambda: None,
            radius: None,
        }
    }
}

/// One suite entry: an operator/subspace pair and the statements to
/// check on it.
#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub label: String,
    pub operator: OperatorSpec,
    pub subspace: SubspaceSpec,
    pub checks: Vec<Statement>,
    pub hull: HullSettings,
    pub contour: ContourSettings,
    /// Probe points for the resolvent check; empty means auto-generate
    /// a ring of eight points outside the hull.
    pub probes: Vec<Complex64>,
}

/// Outcome of one statement check: a verdict, or the error that
/// prevented one (hypothesis violations and not-verifiable data never
/// silently pass).
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub statement: Statement,
    pub verdict: Option<VerdictReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub label: String,
    pub outcomes: Vec<CheckOutcome>,
}

#[derive(Debug, Clone)]
pub struct SuiteSummary {
    pub cases: Vec<CaseOutcome>,
    /// True only when every requested check produced a passing verdict.
    pub all_pass: bool,
}

// upper bound on |spectrum| without computing it
fn spectral_bound(spec: &OperatorSpec) -> f64 {
    use crate::operators::OperatorKind;
    match &spec.kind {
        OperatorKind::Finite { matrix } => matrix.norm_one(),
        OperatorKind::Laurent { symbol } | OperatorKind::Toeplitz { symbol } => {
            symbol.coefficient_norm()
        }
        OperatorKind::DirectSum { parts } => parts
            .iter()
            .map(spectral_bound)
            .fold(0.0, f64::max),
        OperatorKind::BlockTriangular { diag, coupling } => {
            let d = diag.iter().map(spectral_bound).fold(0.0, f64::max);
            let c = coupling
                .iter()
                .map(|c| c.matrix.norm_one())
                .fold(0.0, f64::max);
            d + c
        }
    }
}

/// Eight probe points on a circle comfortably outside the hull of the
/// spectrum (radius 1.5x the spectral bound plus one).
pub fn default_probes(op: &Operator) -> Vec<Complex64> {
    let radius = 1.5 * spectral_bound(op.spec()) + 1.0;
    (0..8)
        .map(|k| {
            Complex64::from_polar(radius, 2.0 * core::f64::consts::PI * k as f64 / 8.0)
        })
        .collect()
}

/// Runs every requested check of one case; errors become recorded
/// outcomes, never silent passes.
pub fn run_case(case: &SuiteCase) -> Result<CaseOutcome> {
    let op = build_operator(case.operator.clone())?;
    let mut outcomes = Vec::with_capacity(case.checks.len());
    for &check in &case.checks {
        let result = match check {
            Statement::Theorem1 => verify_theorem1(&op, &case.subspace, &case.hull),
            Statement::RadiusInequality => verify_radius_inequality(&op, &case.subspace),
            Statement::ObsI => {
                let probes = if case.probes.is_empty() {
                    default_probes(&op)
                } else {
                    case.probes.clone()
                };
                verify_obs_i(&op, &case.subspace, &probes, &case.hull)
            }
            Statement::ObsII => verify_obs_ii(&op, &case.subspace, &case.hull),
            Statement::ProjectionCommutation => match case.contour.lambda {
                None => Err(Error::InvalidParameter {
                    what: format!(
                        "case `{}`: projection_commutation needs contour.lambda",
                        case.label
                    ),
                }),
                Some(lambda) => {
                    let radius = match case.contour.radius {
                        Some(r) => Ok(r),
                        None => op
                            .matrix()
                            .ok_or_else(|| Error::Shape {
                                context: "projection commutation runs on finite operators".into(),
                            })
                            .and_then(|m| projections::default_contour_radius(m, lambda)),
                    };
                    radius.and_then(|r| {
                        verify_projection_commutation(
                            &op,
                            &case.subspace,
                            lambda,
                            r,
                            case.contour.nodes,
                            &case.hull,
                        )
                    })
                }
            },
            Statement::FactA => verify_fact_a(&op, &case.subspace),
            Statement::FactC => verify_fact_c(&op, &case.subspace),
        };
        outcomes.push(match result {
            Ok(v) => CheckOutcome {
                statement: check,
                verdict: Some(v),
                error: None,
            },
            Err(e) => CheckOutcome {
                statement: check,
                verdict: None,
                error: Some(e.to_string()),
            },
        });
    }
    Ok(CaseOutcome {
        label: case.label.clone(),
        outcomes,
    })
}

/// Runs a whole suite in config order. The first structurally invalid
/// config aborts with its path; runtime check failures and hypothesis
/// violations are recorded per entry and clear `all_pass`.
pub fn run_suite(cases: &[SuiteCase]) -> Result<SuiteSummary> {
    let mut out = Vec::with_capacity(cases.len());
    for case in cases {
        out.push(run_case(case)?);
    }
    let all_pass = out.iter().all(|c| {
        c.outcomes
            .iter()
            .all(|o| o.verdict.as_ref().map(|v| v.pass).unwrap_or(false))
    });
    Ok(SuiteSummary {
        cases: out,
        all_pass,
    })
}
