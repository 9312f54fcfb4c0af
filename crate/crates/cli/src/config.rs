//! JSON wire formats: operator and subspace specs, suite
//! configurations, and their conversions into core types.
//!
//! Complex numbers are `[re, im]` pairs; finite matrices are row-major
//! nested arrays of such pairs; symbol coefficient maps go by string
//! index (`{"coeffs": {"-1": [0.5, 0.0]}, "multiplicity": 1}`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use indspec::operators::{CouplingBlock, OperatorSpec, SubspaceSpec};
use indspec::symbols::{CoeffMap, Symbol};
use indspec::theoremlab::{ContourSettings, HullSettings, Statement, SuiteCase};
use indspec::{Complex64, Error};

pub type Cx = [f64; 2];

pub fn to_c64(v: Cx) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn from_c64(z: Complex64) -> Cx {
    [z.re, z.im]
}

fn invalid(path: &str, reason: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolDto {
    pub coeffs: BTreeMap<String, Cx>,
    #[serde(default = "one")]
    pub multiplicity: usize,
}

fn one() -> usize {
    1
}

impl SymbolDto {
    pub fn to_symbol(&self, path: &str) -> Result<Symbol, Error> {
        let mut coeffs = CoeffMap::new();
        for (key, &val) in &self.coeffs {
            let index: i64 = key
                .parse()
                .map_err(|_| invalid(&format!("{path}.coeffs"), format!("bad index `{key}`")))?;
            coeffs.insert(index, to_c64(val));
        }
        Symbol::new(coeffs, self.multiplicity)
    }

    pub fn from_symbol(symbol: &Symbol) -> Self {
        SymbolDto {
            coeffs: symbol
                .coeffs()
                .iter()
                .map(|(&m, &c)| (m.to_string(), from_c64(c)))
                .collect(),
            multiplicity: symbol.multiplicity(),
        }
    }
}

pub type MatrixDto = Vec<Vec<Cx>>;

pub fn to_matrix(rows: &MatrixDto, path: &str) -> Result<indspec::linalg::Matrix, Error> {
    let converted: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| to_c64(v)).collect())
        .collect();
    indspec::linalg::Matrix::from_rows(&converted)
        .ok_or_else(|| invalid(path, "matrix must be rectangular and nonempty"))
}

pub fn from_matrix(m: &indspec::linalg::Matrix) -> MatrixDto {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|&z| from_c64(z)).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingDto {
    pub row: usize,
    pub col: usize,
    pub matrix: MatrixDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorVariantDto {
    Finite { matrix: MatrixDto },
    Laurent { symbol: SymbolDto },
    Toeplitz { symbol: SymbolDto },
    DirectSum { parts: Vec<OperatorSpecDto> },
    BlockTriangular {
        diag: Vec<OperatorSpecDto>,
        #[serde(default)]
        coupling: Vec<CouplingDto>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorSpecDto {
    #[serde(default)]
    pub label: String,
    pub variant: OperatorVariantDto,
}

impl OperatorSpecDto {
    pub fn to_spec(&self, path: &str) -> Result<OperatorSpec, Error> {
        let label = if self.label.is_empty() {
            "operator".to_string()
        } else {
            self.label.clone()
        };
        Ok(match &self.variant {
            OperatorVariantDto::Finite { matrix } => {
                OperatorSpec::finite(to_matrix(matrix, &format!("{path}.matrix"))?, label)
            }
            OperatorVariantDto::Laurent { symbol } => {
                OperatorSpec::laurent(symbol.to_symbol(&format!("{path}.symbol"))?, label)
            }
            OperatorVariantDto::Toeplitz { symbol } => {
                OperatorSpec::toeplitz(symbol.to_symbol(&format!("{path}.symbol"))?, label)
            }
            OperatorVariantDto::DirectSum { parts } => {
                let parts = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.to_spec(&format!("{path}.parts[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                OperatorSpec::direct_sum(parts, label)
            }
            OperatorVariantDto::BlockTriangular { diag, coupling } => {
                let diag = diag
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.to_spec(&format!("{path}.diag[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let coupling = coupling
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        Ok(CouplingBlock {
                            row: c.row,
                            col: c.col,
                            matrix: to_matrix(
                                &c.matrix,
                                &format!("{path}.coupling[{i}].matrix"),
                            )?,
                        })
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                OperatorSpec::block_triangular(diag, coupling, label)
            }
        })
    }

    pub fn from_spec(spec: &OperatorSpec) -> Self {
        use indspec::operators::OperatorKind;
        let variant = match &spec.kind {
            OperatorKind::Finite { matrix } => OperatorVariantDto::Finite {
                matrix: from_matrix(matrix),
            },
            OperatorKind::Laurent { symbol } => OperatorVariantDto::Laurent {
                symbol: SymbolDto::from_symbol(symbol),
            },
            OperatorKind::Toeplitz { symbol } => OperatorVariantDto::Toeplitz {
                symbol: SymbolDto::from_symbol(symbol),
            },
            OperatorKind::DirectSum { parts } => OperatorVariantDto::DirectSum {
                parts: parts.iter().map(OperatorSpecDto::from_spec).collect(),
            },
            OperatorKind::BlockTriangular { diag, coupling } => {
                OperatorVariantDto::BlockTriangular {
                    diag: diag.iter().map(OperatorSpecDto::from_spec).collect(),
                    coupling: coupling
                        .iter()
                        .map(|c| CouplingDto {
                            row: c.row,
                            col: c.col,
                            matrix: from_matrix(&c.matrix),
                        })
                        .collect(),
                }
            }
        };
        OperatorSpecDto {
            label: spec.label.clone(),
            variant,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceVariantDto {
    Coordinate { indices: Vec<usize> },
    Halfline { start: i64 },
    Basis { matrix: MatrixDto },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceSpecDto {
    #[serde(default)]
    pub label: String,
    pub variant: SubspaceVariantDto,
}

impl SubspaceSpecDto {
    pub fn to_spec(&self, path: &str) -> Result<SubspaceSpec, Error> {
        let label = if self.label.is_empty() {
            "subspace".to_string()
        } else {
            self.label.clone()
        };
        Ok(match &self.variant {
            SubspaceVariantDto::Coordinate { indices } => {
                SubspaceSpec::coordinate(indices.iter().copied(), label)
            }
            SubspaceVariantDto::Halfline { start } => SubspaceSpec::halfline(*start, label),
            SubspaceVariantDto::Basis { matrix } => {
                SubspaceSpec::basis(to_matrix(matrix, &format!("{path}.matrix"))?, label)
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDto {
    pub cell_size: f64,
    #[serde(default)]
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct ContourDto {
    #[serde(default)]
    pub nodes: Option<usize>,
    #[serde(default)]
    pub lambda: Option<Cx>,
    #[serde(default)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteCaseDto {
    #[serde(default)]
    pub label: String,
    pub operator: OperatorSpecDto,
    pub subspace: SubspaceSpecDto,
    pub checks: Vec<String>,
    #[serde(default)]
    pub grid: Option<GridDto>,
    #[serde(default)]
    pub contour: Option<ContourDto>,
    #[serde(default)]
    pub slack: Option<f64>,
    #[serde(default)]
    pub probes: Vec<Cx>,
}

/// Seeded corpus expansion inside a suite config.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomCasesDto {
    pub count: usize,
    #[serde(default = "default_degree")]
    pub max_degree: usize,
    pub checks: Vec<String>,
}

fn default_degree() -> usize {
    6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfigDto {
    #[serde(default)]
    pub cases: Vec<SuiteCaseDto>,
    #[serde(default)]
    pub random_cases: Option<RandomCasesDto>,
}

fn parse_checks(names: &[String], path: &str) -> Result<Vec<Statement>, Error> {
    names
        .iter()
        .map(|n| {
            Statement::from_name(n).ok_or_else(|| {
                invalid(
                    &format!("{path}.checks"),
                    format!("unknown statement `{n}`"),
                )
            })
        })
        .collect()
}

fn hull_settings(
    grid: &Option<GridDto>,
    slack: Option<f64>,
    cli_cell: Option<f64>,
    cli_slack: Option<f64>,
) -> HullSettings {
    let cell = cli_cell
        .or(grid.as_ref().map(|g| g.cell_size))
        .unwrap_or(0.02);
    let mut settings = HullSettings::with_cell_size(cell);
    if let Some(m) = grid.as_ref().and_then(|g| g.margin) {
        settings.margin = m;
    }
    if let Some(s) = cli_slack.or(slack) {
        settings.slack = s;
    }
    settings
}

/// Flag overrides from the command line that apply across a config.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub cell_size: Option<f64>,
    pub nodes: Option<usize>,
    pub slack: Option<f64>,
}

impl SuiteCaseDto {
    pub fn to_case(&self, index: usize, over: &Overrides) -> Result<SuiteCase, Error> {
        let path = format!("cases[{index}]");
        let label = if self.label.is_empty() {
            format!("case{index:02}")
        } else {
            self.label.clone()
        };
        let settings = hull_settings(&self.grid, self.slack, over.cell_size, over.slack);
        if settings.cell_size.is_nan() || settings.cell_size <= 0.0 {
            return Err(invalid(
                &format!("{path}.grid.cell_size"),
                format!("must be positive, got {}", settings.cell_size),
            ));
        }
        if settings.margin.is_nan() || settings.margin < 2.0 * settings.cell_size {
            return Err(invalid(
                &format!("{path}.grid.margin"),
                format!("must be at least 2*cell_size, got {}", settings.margin),
            ));
        }
        if settings.slack.is_nan() || settings.slack < 0.0 {
            return Err(invalid(
                &format!("{path}.slack"),
                format!("must be nonnegative, got {}", settings.slack),
            ));
        }
        let contour_dto = self.contour.clone().unwrap_or_default();
        let nodes = over
            .nodes
            .or(contour_dto.nodes)
            .unwrap_or(indspec::projections::DEFAULT_NODES);
        if nodes < 16 {
            return Err(invalid(
                &format!("{path}.contour.nodes"),
                format!("must be at least 16, got {nodes}"),
            ));
        }
        let checks = parse_checks(&self.checks, &path)?;
        if checks.contains(&Statement::ProjectionCommutation) && contour_dto.lambda.is_none() {
            return Err(invalid(
                &format!("{path}.contour.lambda"),
                "required for the projection_commutation check".to_string(),
            ));
        }
        Ok(SuiteCase {
            label,
            operator: self.operator.to_spec(&format!("{path}.operator"))?,
            subspace: self.subspace.to_spec(&format!("{path}.subspace"))?,
            checks,
            hull: settings,
            contour: ContourSettings {
                nodes,
                lambda: contour_dto.lambda.map(to_c64),
                radius: contour_dto.radius,
            },
            probes: self.probes.iter().map(|&p| to_c64(p)).collect(),
        })
    }
}

impl SuiteConfigDto {
    /// Validates the whole config into core suite cases, expanding the
    /// seeded random section if present.
    pub fn to_cases(&self, seed: u64, over: &Overrides) -> Result<Vec<SuiteCase>, Error> {
        let mut cases = Vec::with_capacity(self.cases.len());
        for (i, dto) in self.cases.iter().enumerate() {
            cases.push(dto.to_case(i, over)?);
        }
        if let Some(random) = &self.random_cases {
            let checks = parse_checks(&random.checks, "random_cases")?;
            let mut rng = indspec::corpus::SplitMix64::new(seed);
            for i in 0..random.count {
                let symbol = indspec::corpus::random_analytic_symbol(&mut rng, random.max_degree);
                let cell = over
                    .cell_size
                    .unwrap_or(symbol.coefficient_norm() / 75.0);
                let mut hull = HullSettings::with_cell_size(cell);
                if let Some(s) = over.slack {
                    hull.slack = s;
                }
                cases.push(SuiteCase {
                    label: format!("random{i:03}"),
                    operator: OperatorSpec::laurent(symbol, format!("random{i:03}")),
                    subspace: SubspaceSpec::halfline(0, "halfline0"),
                    checks: checks.clone(),
                    hull,
                    contour: ContourSettings {
                        nodes: over.nodes.unwrap_or(indspec::projections::DEFAULT_NODES),
                        lambda: None,
                        radius: None,
                    },
                    probes: Vec::new(),
                });
            }
        }
        Ok(cases)
    }
}

/// Config for the `hull` command: a point cloud plus grid geometry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HullConfigDto {
    pub points: Vec<Cx>,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub cell_size: Option<f64>,
    #[serde(default)]
    pub margin: Option<f64>,
    #[serde(default)]
    pub slack: Option<f64>,
}

/// Config for the `project` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectConfigDto {
    pub operator: OperatorSpecDto,
    pub lambda: Cx,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub nodes: Option<usize>,
}

/// Config for the `induce` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InduceConfigDto {
    pub operator: OperatorSpecDto,
    pub subspace: SubspaceSpecDto,
    #[serde(default)]
    pub tol: Option<f64>,
}
