//! Command implementations: config ingestion, dispatch into the core
//! crate, artifact emission.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;

use indspec::cplane::{self, CompactSetEstimate};
use indspec::operators::{build_operator, induce, invariance_defect};
use indspec::projections;
use indspec::spectra;
use indspec::theoremlab::{run_case, SuiteCase};

use crate::config::{
    to_c64, HullConfigDto, InduceConfigDto, OperatorSpecDto, Overrides, ProjectConfigDto,
    SuiteConfigDto,
};
use crate::outputs::{
    matrix_to_csv, set_to_csv, write_json, write_text, HullRegionDto, ProjectionReportDto,
    SpectralReportDto, SummaryDto, VerdictDto,
};
use crate::svg::{self, Layer};

/// Marker for problems with user input; maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

/// Which artifact families to write.
#[derive(Debug, Clone, Copy)]
pub struct EmitFlags {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl EmitFlags {
    pub fn parse(spec: &str) -> Result<Self> {
        let mut flags = EmitFlags {
            csv: false,
            json: false,
            svg: false,
        };
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => flags.csv = true,
                "json" => flags.json = true,
                "svg" => flags.svg = true,
                other => {
                    return Err(InputError(format!(
                        "unknown emit format `{other}` (expected csv, json, svg)"
                    ))
                    .into())
                }
            }
        }
        Ok(flags)
    }
}

fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let body = fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&body)
        .map_err(|e| InputError(format!("invalid config {}: {e}", path.display())).into())
}

pub struct CommandIo {
    pub config: PathBuf,
    pub out: PathBuf,
    pub emit: EmitFlags,
    pub seed: u64,
    pub overrides: Overrides,
}

pub fn run_spectrum(io: &CommandIo) -> Result<i32> {
    let dto: OperatorSpecDto = read_config(&io.config)?;
    let op = build_operator(dto.to_spec("operator")?)?;
    let report = spectra::spectral_report(&op)?;
    if io.emit.csv {
        write_text(&io.out.join("spectrum.csv"), &set_to_csv(&report.spectrum))?;
        write_text(
            &io.out.join("essential.csv"),
            &set_to_csv(&report.essential),
        )?;
    }
    if io.emit.json {
        write_json(
            &io.out.join("spectral_report.json"),
            &SpectralReportDto::new(&report, "spectrum.csv", "essential.csv"),
        )?;
    }
    if io.emit.svg {
        let layers = vec![
            Layer::Points {
                set: &report.spectrum,
                label: format!("spectrum of {}", op.label()),
            },
            Layer::Points {
                set: &report.essential,
                label: "essential spectrum".into(),
            },
        ];
        write_text(&io.out.join("figure.svg"), &svg::render(&layers)?)?;
    }
    println!(
        "spectrum: {} points, essential {} points, essential radius {:.6}",
        report.spectrum.points().len(),
        report.essential.points().len(),
        report.essential_radius
    );
    Ok(0)
}

pub fn run_hull(io: &CommandIo) -> Result<i32> {
    let dto: HullConfigDto = read_config(&io.config)?;
    let cell = io
        .overrides
        .cell_size
        .or(dto.cell_size)
        .unwrap_or(0.02);
    let margin = dto.margin.unwrap_or_else(|| cplane::default_margin(cell));
    let points: Vec<indspec::Complex64> = dto.points.iter().map(|&p| to_c64(p)).collect();
    let set = match dto.kind.as_deref() {
        Some("exact-curve") => CompactSetEstimate::exact_curve(
            points,
            dto.resolution.unwrap_or(cell),
        )?,
        Some("eigenvalues") => CompactSetEstimate::eigenvalue_cloud(points),
        Some("region-raster") | None => {
            CompactSetEstimate::raster(points, dto.resolution.unwrap_or(cell))
        }
        Some(other) => {
            return Err(
                InputError(format!("unknown set kind `{other}` in hull config")).into(),
            )
        }
    };
    let hull = cplane::polynomial_hull(&set, cell, margin)?;
    let slack = io.overrides.slack.or(dto.slack).unwrap_or(0.0);
    let hull = if slack > 0.0 { hull.dilate(slack) } else { hull };

    if io.emit.csv {
        write_text(&io.out.join("set.csv"), &set_to_csv(&set))?;
    }
    if io.emit.json {
        write_json(&io.out.join("hull.json"), &HullRegionDto::from_region(&hull))?;
    }
    if io.emit.svg {
        let layers = vec![
            Layer::Region {
                region: &hull,
                label: "polynomial hull".into(),
            },
            Layer::Points {
                set: &set,
                label: "input set".into(),
            },
        ];
        write_text(&io.out.join("figure.svg"), &svg::render(&layers)?)?;
    }
    println!(
        "hull: {} cells at cell size {cell}, area {:.6}",
        hull.true_cell_count(),
        hull.area()
    );
    Ok(0)
}

pub fn run_project(io: &CommandIo) -> Result<i32> {
    let dto: ProjectConfigDto = read_config(&io.config)?;
    let op = build_operator(dto.operator.to_spec("operator")?)?;
    let matrix = op.matrix().ok_or_else(|| {
        InputError("projection needs a finite operator".to_string())
    })?;
    let lambda = to_c64(dto.lambda);
    let radius = match dto.radius {
        Some(r) => r,
        None => projections::default_contour_radius(matrix, lambda)?,
    };
    let nodes = io
        .overrides
        .nodes
        .or(dto.nodes)
        .unwrap_or(projections::DEFAULT_NODES);
    let report = projections::contour_projection(matrix, lambda, radius, nodes)?;
    if io.emit.csv {
        write_text(
            &io.out.join("projection_matrix.csv"),
            &matrix_to_csv(&report.matrix),
        )?;
    }
    if io.emit.json {
        write_json(
            &io.out.join("projection_report.json"),
            &ProjectionReportDto::new(&report, "projection_matrix.csv"),
        )?;
    }
    println!(
        "projection: rank {}, trace gap {:.3e}, idempotency {:.3e}, commutation {:.3e}",
        report.rank, report.trace_gap, report.idempotency_residual, report.commutation_residual
    );
    Ok(0)
}

pub fn run_induce(io: &CommandIo) -> Result<i32> {
    let dto: InduceConfigDto = read_config(&io.config)?;
    let op = build_operator(dto.operator.to_spec("operator")?)?;
    let subspace = dto.subspace.to_spec("subspace")?;
    let tol = dto.tol.unwrap_or(indspec::operators::INVARIANCE_TOL);
    let defect = invariance_defect(&op, &subspace)?;
    let pair = induce(&op, &subspace, tol)?;

    #[derive(serde::Serialize)]
    struct InducedDto {
        invariance_defect: f64,
        restriction: OperatorSpecDto,
        quotient: OperatorSpecDto,
    }
    if io.emit.json {
        write_json(
            &io.out.join("induced.json"),
            &InducedDto {
                invariance_defect: defect,
                restriction: OperatorSpecDto::from_spec(pair.restriction.spec()),
                quotient: OperatorSpecDto::from_spec(pair.quotient.spec()),
            },
        )?;
    }
    if io.emit.csv {
        if let Some(basis) = &pair.basis {
            write_text(
                &io.out.join("basis_transform.csv"),
                &matrix_to_csv(&basis.transform),
            )?;
        }
    }
    println!(
        "induce: defect {defect:.3e}; restriction `{}`, quotient `{}`",
        pair.restriction.label(),
        pair.quotient.label()
    );
    Ok(0)
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '-'
            }
        })
        .collect()
}

// best-effort side artifacts for one verify case; failures here are
// diagnostics, not verdict changes
fn emit_case_artifacts(case: &SuiteCase, dir: &Path, emit: EmitFlags) -> Result<()> {
    let op = build_operator(case.operator.clone())?;
    let opts = spectra::SpectrumOptions::for_cell_size(case.hull.cell_size);
    let essential = spectra::essential_spectrum_with(&op, &opts)?;
    if emit.csv {
        write_text(
            &dir.join("essential_host.csv"),
            &set_to_csv(&essential.set),
        )?;
    }
    let hull = cplane::polynomial_hull(&essential.set, case.hull.cell_size, case.hull.margin)?;
    if emit.json {
        write_json(&dir.join("hull.json"), &HullRegionDto::from_region(&hull))?;
    }
    let restriction_spectrum = induce(&op, &case.subspace, indspec::theoremlab::HYPOTHESIS_TOL)
        .ok()
        .and_then(|pair| spectra::spectrum_with(&pair.restriction, &opts).ok());
    if emit.csv {
        if let Some(s) = &restriction_spectrum {
            write_text(&dir.join("restriction_spectrum.csv"), &set_to_csv(&s.set))?;
        }
    }
    if emit.svg {
        let mut layers = vec![Layer::Region {
            region: &hull,
            label: "hull of essential spectrum".into(),
        }];
        if let Some(s) = &restriction_spectrum {
            layers.push(Layer::Points {
                set: &s.set,
                label: "restriction spectrum".into(),
            });
        }
        layers.push(Layer::Points {
            set: &essential.set,
            label: "host essential spectrum".into(),
        });
        write_text(&dir.join("figure.svg"), &svg::render(&layers)?)?;
    }
    Ok(())
}

pub fn run_verify(io: &CommandIo) -> Result<i32> {
    let dto: SuiteConfigDto = read_config(&io.config)?;
    let cases = dto.to_cases(io.seed, &io.overrides)?;

    let mut outcomes = Vec::with_capacity(cases.len());
    for (i, case) in cases.iter().enumerate() {
        let started = Instant::now();
        let outcome = run_case(case)?;
        let millis = started.elapsed().as_secs_f64() * 1e3;
        let passed = outcome
            .outcomes
            .iter()
            .filter(|o| o.verdict.as_ref().map(|v| v.pass).unwrap_or(false))
            .count();
        // timings go to stdout only: output files stay byte-identical
        // across runs
        println!(
            "case {:>3} {:<24} {passed}/{} checks passed ({millis:.0} ms)",
            i,
            outcome.label,
            outcome.outcomes.len()
        );
        for check in &outcome.outcomes {
            if let Some(err) = &check.error {
                println!("      {}: error: {err}", check.statement.name());
            } else if let Some(v) = &check.verdict {
                println!(
                    "      {}: {} (margin {:+.3e})",
                    check.statement.name(),
                    if v.pass { "pass" } else { "FAIL" },
                    v.margin
                );
            }
        }

        let dir = io.out.join(format!("case{i:02}_{}", sanitize(&outcome.label)));
        if io.emit.json {
            #[derive(serde::Serialize)]
            struct CaseReportDto {
                label: String,
                verdicts: Vec<VerdictDto>,
                errors: Vec<String>,
            }
            let report = CaseReportDto {
                label: outcome.label.clone(),
                verdicts: outcome
                    .outcomes
                    .iter()
                    .filter_map(|o| o.verdict.as_ref().map(VerdictDto::from_report))
                    .collect(),
                errors: outcome
                    .outcomes
                    .iter()
                    .filter_map(|o| {
                        o.error
                            .as_ref()
                            .map(|e| format!("{}: {e}", o.statement.name()))
                    })
                    .collect(),
            };
            write_json(&dir.join("report.json"), &report)?;
        }
        if let Err(e) = emit_case_artifacts(case, &dir, io.emit) {
            eprintln!("note: case {i} artifacts skipped: {e:#}");
        }
        outcomes.push(outcome);
    }

    let summary = indspec::theoremlab::SuiteSummary {
        all_pass: outcomes.iter().all(|c| {
            c.outcomes
                .iter()
                .all(|o| o.verdict.as_ref().map(|v| v.pass).unwrap_or(false))
        }),
        cases: outcomes,
    };
    write_json(
        &io.out.join("summary.json"),
        &SummaryDto::from_summary(&summary, io.seed),
    )?;
    let total: usize = summary.cases.iter().map(|c| c.outcomes.len()).sum();
    let passed: usize = summary
        .cases
        .iter()
        .flat_map(|c| &c.outcomes)
        .filter(|o| o.verdict.as_ref().map(|v| v.pass).unwrap_or(false))
        .count();
    println!(
        "verify: {passed}/{total} checks passed; {}",
        if summary.all_pass { "all pass" } else { "FAILURES present" }
    );
    Ok(if summary.all_pass { 0 } else { 1 })
}

/// Map an error chain to the exit-code contract: 2 for invalid input,
/// 3 for numerical/internal failures.
pub fn classify_error(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    if let Some(core) = err.downcast_ref::<indspec::Error>() {
        return if core.is_input_error() { 2 } else { 3 };
    }
    3
}

pub fn ensure_out_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}
