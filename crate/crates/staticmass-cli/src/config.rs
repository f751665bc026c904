//! Experiment configuration: JSON schema, validation, and construction of
//! the reference space and graph it describes.

use serde::Deserialize;
use staticmass::{GraphManifold, Measure, ReferenceSpace, SlopeProfile, SlopeTable};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ExperimentConfig {
    /// Schema version; must be 1.
    pub v: u32,
    pub space: SpaceConfig,
    pub family: FamilyConfig,
    #[serde(default)]
    pub constants: ConstantsConfig,
    #[serde(default)]
    pub checks: Vec<String>,
    pub output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SpaceConfig {
    pub epsilon: i32,
    pub n: u32,
    #[serde(default)]
    pub cross_section_volume: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct FamilyConfig {
    pub kind: FamilyKind,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub offset: Option<f64>,
    #[serde(default)]
    pub profile_path: Option<String>,
    #[serde(default)]
    pub r_inner: Option<f64>,
    pub r_outer: f64,
    /// Number of halving steps for the sweep subcommand.
    #[serde(default)]
    pub steps: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    KottlerSchwarzschild,
    Constant,
    Table,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ConstantsConfig {
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default)]
    pub measure: MeasureConfig,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            xi: default_xi(),
            measure: MeasureConfig::default(),
        }
    }
}

fn default_xi() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureConfig {
    #[default]
    Product,
    Static,
}

impl From<MeasureConfig> for Measure {
    fn from(m: MeasureConfig) -> Measure {
        match m {
            MeasureConfig::Product => Measure::Product,
            MeasureConfig::Static => Measure::Static,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct OutputConfig {
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Csv]
}

pub fn load(path: &str) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {path}: {e}")))?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("malformed config {path}: {e}")))?;
    validate(&config)?;
    Ok(config)
}

fn validate(config: &ExperimentConfig) -> Result<(), CliError> {
    if config.v != 1 {
        return Err(CliError::Config(format!(
            "unsupported schema version {} (expected 1)",
            config.v
        )));
    }
    if !matches!(config.space.epsilon, -1 | 0 | 1) {
        return Err(CliError::Config(format!(
            "epsilon must be -1, 0, or 1, got {}",
            config.space.epsilon
        )));
    }
    if config.space.n < 3 {
        return Err(CliError::Config(format!(
            "dimension must be at least 3, got {}",
            config.space.n
        )));
    }
    if !(config.constants.xi > 0.0) {
        return Err(CliError::Config(format!(
            "xi must be positive, got {}",
            config.constants.xi
        )));
    }
    if !(config.family.r_outer > 0.0) {
        return Err(CliError::Config(format!(
            "rOuter must be positive, got {}",
            config.family.r_outer
        )));
    }
    match config.family.kind {
        FamilyKind::KottlerSchwarzschild => {
            if config.family.mu.is_none() {
                return Err(CliError::Config("family kind needs mu".into()));
            }
        }
        FamilyKind::Constant => {
            if config.family.r_inner.is_none() {
                return Err(CliError::Config("constant family needs rInner".into()));
            }
        }
        FamilyKind::Table => {
            if config.family.profile_path.is_none() || config.family.r_inner.is_none() {
                return Err(CliError::Config(
                    "table family needs profilePath and rInner".into(),
                ));
            }
        }
    }
    for name in &config.checks {
        if crate::checks::resolve(name).is_none() {
            return Err(CliError::Config(format!("unknown check \"{name}\"")));
        }
    }
    Ok(())
}

pub fn build_space(config: &ExperimentConfig) -> Result<ReferenceSpace<f64>, CliError> {
    ReferenceSpace::new(
        config.space.epsilon,
        config.space.n,
        config.space.cross_section_volume,
    )
    .map_err(|e| CliError::Config(format!("invalid space: {e}")))
}

pub fn build_graph(
    config: &ExperimentConfig,
    space: &ReferenceSpace<f64>,
) -> Result<GraphManifold<f64>, CliError> {
    let family = &config.family;
    let graph = match family.kind {
        FamilyKind::KottlerSchwarzschild => GraphManifold::kottler_schwarzschild(
            space,
            family.mu.expect("validated"),
            family.r_outer,
        ),
        FamilyKind::Constant => GraphManifold::constant(
            space,
            family.r_inner.expect("validated"),
            family.r_outer,
            family.offset.unwrap_or(0.0),
        ),
        FamilyKind::Table => {
            let path = family.profile_path.as_deref().expect("validated");
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read profile {path}: {e}")))?;
            let table = SlopeTable::parse(&text)
                .map_err(|e| CliError::Config(format!("bad profile {path}: {e}")))?;
            GraphManifold::from_profile(
                space,
                SlopeProfile::Table(table),
                family.r_inner.expect("validated"),
                family.r_outer,
            )
        }
    };
    graph.map_err(|e| CliError::Config(format!("invalid family: {e}")))
}
