//! Artifact emission: point-cloud CSVs, region/report JSON, and the
//! bit-packed hull mask encoding.
//!
//! All writers are deterministic: map keys are ordered, float
//! formatting is Rust's shortest-roundtrip `Display`, and nothing
//! volatile (timestamps, timings) lands in a file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Serialize};

use indspec::cplane::{CompactSetEstimate, HullRegion, SetKind};
use indspec::linalg::Matrix;
use indspec::projections::ProjectionReport;
use indspec::spectra::{Method, SpectralReport};
use indspec::theoremlab::{CheckOutcome, SuiteSummary, VerdictReport};

use crate::config::{from_c64, Cx};

pub fn kind_name(kind: SetKind) -> &'static str {
    match kind {
        SetKind::ExactCurve => "exact-curve",
        SetKind::Eigenvalues => "eigenvalues",
        SetKind::RegionRaster => "region-raster",
        SetKind::Empty => "empty",
    }
}

pub fn method_name(method: Method) -> &'static str {
    match method {
        Method::Eigensolver => "eigensolver",
        Method::SymbolCurve => "symbol-curve",
        Method::SymbolCurveWinding => "symbol-curve-plus-winding",
        Method::Union => "union",
        Method::EmptyByConvention => "empty-by-convention",
    }
}

/// Point cloud as CSV with header `kind,re,im`.
pub fn set_to_csv(set: &CompactSetEstimate) -> String {
    let mut out = String::from("kind,re,im\n");
    let kind = kind_name(set.kind());
    for p in set.points() {
        out.push_str(&format!("{kind},{},{}\n", p.re, p.im));
    }
    out
}

/// Complex matrix as CSV with header `row,col,re,im`.
pub fn matrix_to_csv(m: &Matrix) -> String {
    let mut out = String::from("row,col,re,im\n");
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let z = m[(r, c)];
            out.push_str(&format!("{r},{c},{},{}\n", z.re, z.im));
        }
    }
    out
}

/// Hull region JSON: grid geometry plus the row-major bit-packed mask
/// (LSB first within each byte), base64-encoded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HullRegionDto {
    pub origin_re: f64,
    pub origin_im: f64,
    pub cell_size: f64,
    pub rows: usize,
    pub cols: usize,
    pub mask_base64: String,
    pub source_resolution: f64,
}

impl HullRegionDto {
    pub fn from_region(region: &HullRegion) -> Self {
        let mask = region.mask();
        let mut bytes = vec![0u8; mask.len().div_ceil(8)];
        for (i, &b) in mask.iter().enumerate() {
            if b {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        HullRegionDto {
            origin_re: region.origin().re,
            origin_im: region.origin().im,
            cell_size: region.cell_size(),
            rows: region.rows(),
            cols: region.cols(),
            mask_base64: BASE64.encode(&bytes),
            source_resolution: region.source_resolution(),
        }
    }

    // decode side of the mask format contract; exercised by the
    // round-trip test
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn to_region(&self) -> Result<HullRegion, indspec::Error> {
        let bytes = BASE64
            .decode(&self.mask_base64)
            .map_err(|e| indspec::Error::Validation {
                path: "mask_base64".into(),
                reason: e.to_string(),
            })?;
        let cells = self.rows * self.cols;
        let mut mask = Vec::with_capacity(cells);
        for i in 0..cells {
            let byte = bytes.get(i / 8).copied().unwrap_or(0);
            mask.push(byte & (1 << (i % 8)) != 0);
        }
        HullRegion::from_raw(
            indspec::Complex64::new(self.origin_re, self.origin_im),
            self.cell_size,
            self.rows,
            self.cols,
            mask,
            self.source_resolution,
        )
    }
}

/// Spectral report JSON with CSV references for the two point sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReportDto {
    pub spectrum: String,
    pub essential: String,
    pub essential_radius: f64,
    pub method: String,
    pub exact: bool,
}

impl SpectralReportDto {
    pub fn new(report: &SpectralReport, spectrum_csv: &str, essential_csv: &str) -> Self {
        SpectralReportDto {
            spectrum: spectrum_csv.to_string(),
            essential: essential_csv.to_string(),
            essential_radius: report.essential_radius,
            method: method_name(report.method).to_string(),
            exact: report.exact,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionReportDto {
    pub lambda: Cx,
    pub radius: f64,
    pub nodes: usize,
    pub idempotency_residual: f64,
    pub commutation_residual: f64,
    pub rank: usize,
    pub trace_gap: f64,
    pub matrix_csv: String,
}

impl ProjectionReportDto {
    pub fn new(report: &ProjectionReport, matrix_csv: &str) -> Self {
        ProjectionReportDto {
            lambda: from_c64(report.lambda),
            radius: report.radius,
            nodes: report.nodes,
            idempotency_residual: report.idempotency_residual,
            commutation_residual: report.commutation_residual,
            rank: report.rank,
            trace_gap: report.trace_gap,
            matrix_csv: matrix_csv.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictDto {
    pub statement: String,
    pub pass: bool,
    pub margin: f64,
    pub details: BTreeMap<String, f64>,
    pub operator: String,
    pub subspace: String,
}

impl VerdictDto {
    pub fn from_report(report: &VerdictReport) -> Self {
        VerdictDto {
            statement: report.statement.name().to_string(),
            pass: report.pass,
            margin: report.margin,
            details: report.details.clone().into_iter().collect(),
            operator: report.operator_label.clone(),
            subspace: report.subspace_label.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcomeDto {
    pub statement: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckOutcomeDto {
    pub fn from_outcome(outcome: &CheckOutcome) -> Self {
        CheckOutcomeDto {
            statement: outcome.statement.name().to_string(),
            pass: outcome.verdict.as_ref().map(|v| v.pass).unwrap_or(false),
            margin: outcome.verdict.as_ref().map(|v| v.margin),
            error: outcome.error.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseSummaryDto {
    pub label: String,
    pub checks: Vec<CheckOutcomeDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryDto {
    pub seed: u64,
    pub all_pass: bool,
    pub cases: Vec<CaseSummaryDto>,
}

impl SummaryDto {
    pub fn from_summary(summary: &SuiteSummary, seed: u64) -> Self {
        SummaryDto {
            seed,
            all_pass: summary.all_pass,
            cases: summary
                .cases
                .iter()
                .map(|c| CaseSummaryDto {
                    label: c.label.clone(),
                    checks: c.outcomes.iter().map(CheckOutcomeDto::from_outcome).collect(),
                })
                .collect(),
        }
    }
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value).context("serializing JSON")?;
    body.push('\n');
    write_text(path, &body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use indspec::cplane::{polynomial_hull, CompactSetEstimate};
    use indspec::Complex64;

    #[test]
    fn hull_mask_roundtrip() {
        let pts: Vec<Complex64> = (0..64)
            .map(|k| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 64.0)
            })
            .collect();
        let set = CompactSetEstimate::raster(pts, 0.1);
        let hull = polynomial_hull(&set, 0.1, 0.7).unwrap();
        let dto = HullRegionDto::from_region(&hull);
        let back = dto.to_region().unwrap();
        assert_eq!(back, hull);
    }

    #[test]
    fn csv_headers() {
        let set = CompactSetEstimate::eigenvalue_cloud(vec![Complex64::new(1.0, -2.0)]);
        let csv = set_to_csv(&set);
        assert!(csv.starts_with("kind,re,im\n"));
        assert!(csv.contains("eigenvalues,1,-2"));
    }
}
