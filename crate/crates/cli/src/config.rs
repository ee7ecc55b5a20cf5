//! Analysis configuration: a single TOML file selecting the data, the test
//! battery, the cointegration setups, and the long-run models.

use crate::error::{CliError, Result};
use longrun::series::{BreakKind, DeterministicSpec};
use longrun::unit_root::LagSelection;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub data: DataConfig,
    pub series: Vec<SeriesConfig>,
    #[serde(default)]
    pub unit_root: UnitRootConfig,
    #[serde(default)]
    pub cointegration: Option<CointegrationConfig>,
    #[serde(default)]
    pub dols: Option<DolsSection>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub path: PathBuf,
    #[serde(default = "default_year_column")]
    pub year_column: String,
}

fn default_year_column() -> String {
    "year".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesRole {
    Response,
    Regressor,
    Auxiliary,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    /// Column name in the data file.
    pub column: String,
    /// Label used everywhere downstream (defaults to the column name).
    pub label: Option<String>,
    #[serde(default)]
    pub log: bool,
    pub role: SeriesRole,
}

impl SeriesConfig {
    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterministicChoice {
    None,
    Constant,
    ConstantAndTrend,
}

impl From<DeterministicChoice> for DeterministicSpec {
    fn from(value: DeterministicChoice) -> Self {
        match value {
            DeterministicChoice::None => DeterministicSpec::None,
            DeterministicChoice::Constant => DeterministicSpec::Constant,
            DeterministicChoice::ConstantAndTrend => DeterministicSpec::ConstantAndTrend,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakKindChoice {
    Intercept,
    Trend,
    Both,
}

impl From<BreakKindChoice> for BreakKind {
    fn from(value: BreakKindChoice) -> Self {
        match value {
            BreakKindChoice::Intercept => BreakKind::Intercept,
            BreakKindChoice::Trend => BreakKind::Trend,
            BreakKindChoice::Both => BreakKind::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionChoice {
    Fixed,
    Aic,
    Sic,
    Hq,
    GeneralToSpecific,
}

/// Lag-selection block shared by the test entries.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagConfig {
    #[serde(default = "default_selection")]
    pub selection: SelectionChoice,
    #[serde(default = "default_max_lag")]
    pub max_lag: usize,
    /// Order used when `selection = "fixed"`.
    #[serde(default)]
    pub fixed_lag: usize,
    /// Two-sided confidence level for general-to-specific pruning.
    #[serde(default = "default_gts_level")]
    pub gts_level: f64,
}

fn default_selection() -> SelectionChoice {
    SelectionChoice::Aic
}

fn default_max_lag() -> usize {
    9
}

fn default_gts_level() -> f64 {
    0.90
}

impl Default for LagConfig {
    fn default() -> Self {
        Self {
            selection: default_selection(),
            max_lag: default_max_lag(),
            fixed_lag: 0,
            gts_level: default_gts_level(),
        }
    }
}

impl LagConfig {
    pub fn to_selection(self) -> LagSelection {
        match self.selection {
            SelectionChoice::Fixed => LagSelection::Fixed(self.fixed_lag),
            SelectionChoice::Aic => LagSelection::Aic,
            SelectionChoice::Sic => LagSelection::Sic,
            SelectionChoice::Hq => LagSelection::Hq,
            SelectionChoice::GeneralToSpecific => LagSelection::GeneralToSpecific(self.gts_level),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct UnitRootConfig {
    /// Decision level for the battery.
    #[serde(default = "default_unit_root_level")]
    pub level: f64,
    #[serde(default)]
    pub adf: Vec<AdfEntry>,
    #[serde(default)]
    pub pp: Vec<PpEntry>,
    #[serde(default)]
    pub single_break: Vec<SingleBreakEntry>,
    #[serde(default)]
    pub two_break: Vec<TwoBreakEntry>,
}

fn default_unit_root_level() -> f64 {
    0.95
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdfEntry {
    pub series: String,
    pub deterministic: DeterministicChoice,
    #[serde(flatten)]
    pub lags: LagConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PpEntry {
    pub series: String,
    pub deterministic: DeterministicChoice,
    /// Bartlett bandwidth; automatic (data-based Newey-West) when absent.
    #[serde(default)]
    pub bandwidth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingleBreakMethod {
    ZivotAndrews,
    Perron,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierStyle {
    Io,
    Ao,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleBreakEntry {
    pub series: String,
    pub method: SingleBreakMethod,
    #[serde(default = "default_io")]
    pub style: OutlierStyle,
    pub deterministic: DeterministicChoice,
    pub break_kind: BreakKindChoice,
    /// Known break year (required by the Perron method).
    #[serde(default)]
    pub break_year: Option<i32>,
    #[serde(default = "default_trim")]
    pub trim: f64,
    #[serde(flatten)]
    pub lags: LagConfig,
}

fn default_io() -> OutlierStyle {
    OutlierStyle::Io
}

fn default_trim() -> f64 {
    0.10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoBreakMethod {
    LumsdainePapell,
    ClementeIo,
    ClementeAo,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoBreakEntry {
    pub series: String,
    pub method: TwoBreakMethod,
    #[serde(default = "default_trim")]
    pub trim: f64,
    #[serde(flatten)]
    pub lags: LagConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CointegrationConfig {
    #[serde(default = "default_coint_level")]
    pub level: f64,
    /// Endogenous system, by label, in order.
    pub endogenous: Vec<String>,
    #[serde(default = "default_var_max_lag")]
    pub max_lag: usize,
    /// Include the raw trend among the exogenous regressors.
    #[serde(default)]
    pub include_trend: bool,
    pub configs: Vec<CointBreakConfig>,
}

fn default_coint_level() -> f64 {
    0.90
}

fn default_var_max_lag() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CointBreakConfig {
    pub name: String,
    /// Break years backing the `du`/`dt` exogenous pairs.
    pub break_years: Vec<i32>,
    /// Fixed VAR order; selected by criterion when absent.
    #[serde(default)]
    pub lag_order: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DolsSection {
    /// Significance level for the elasticity report.
    #[serde(default = "default_unit_root_level")]
    pub level: f64,
    pub models: Vec<DolsModelConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DolsModelConfig {
    pub name: String,
    #[serde(default)]
    pub break_years: Vec<i32>,
    #[serde(default = "default_true")]
    pub constant: bool,
    #[serde(default = "default_true")]
    pub trend: bool,
    #[serde(default = "default_true")]
    pub break_intercept: bool,
    #[serde(default = "default_true")]
    pub break_trend_interaction: bool,
    #[serde(default)]
    pub leads: usize,
    #[serde(default = "default_one")]
    pub lags: usize,
    #[serde(default)]
    pub trend_break_form: TrendBreakFormChoice,
    /// Bartlett bandwidth for the long-run variance; the fixed Newey-West
    /// rule when absent.
    #[serde(default)]
    pub bandwidth: Option<usize>,
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TrendBreakFormChoice {
    #[default]
    Ramp,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Text,
    Json,
    CsvBundle,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
    #[serde(default = "default_out_dir")]
    pub directory: PathBuf,
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Text]
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            formats: default_formats(),
            directory: default_out_dir(),
        }
    }
}

impl AnalysisConfig {
    /// Parses and validates a configuration file. The data path is resolved
    /// relative to the configuration file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config: AnalysisConfig = toml::from_str(&body)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if config.data.path.is_relative() {
            if let Some(dir) = path.parent() {
                config.data.path = dir.join(&config.data.path);
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(CliError::Config(format!(
                "schema_version: unsupported version {}",
                self.schema_version
            )));
        }
        if self.series.is_empty() {
            return Err(CliError::Config("series: at least one entry required".into()));
        }
        let responses = self
            .series
            .iter()
            .filter(|s| s.role == SeriesRole::Response)
            .count();
        if responses != 1 {
            return Err(CliError::Config(format!(
                "series: exactly one response required, found {responses}"
            )));
        }
        let labels: Vec<&str> = self.series.iter().map(|s| s.label()).collect();
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(CliError::Config(format!("series: duplicate label `{label}`")));
            }
        }
        let known = |label: &str, field: &str| -> Result<()> {
            if labels.contains(&label) {
                Ok(())
            } else {
                Err(CliError::Config(format!(
                    "{field}: unknown series label `{label}`"
                )))
            }
        };
        for e in &self.unit_root.adf {
            known(&e.series, "unit_root.adf.series")?;
        }
        for e in &self.unit_root.pp {
            known(&e.series, "unit_root.pp.series")?;
        }
        for e in &self.unit_root.single_break {
            known(&e.series, "unit_root.single_break.series")?;
            if e.method == SingleBreakMethod::Perron && e.break_year.is_none() {
                return Err(CliError::Config(
                    "unit_root.single_break.break_year: required for the perron method".into(),
                ));
            }
            if !(0.0..0.5).contains(&e.trim) {
                return Err(CliError::Config(
                    "unit_root.single_break.trim: must lie in (0, 0.5)".into(),
                ));
            }
        }
        for e in &self.unit_root.two_break {
            known(&e.series, "unit_root.two_break.series")?;
        }
        if let Some(coint) = &self.cointegration {
            for label in &coint.endogenous {
                known(label, "cointegration.endogenous")?;
            }
            if coint.endogenous.len() < 2 {
                return Err(CliError::Config(
                    "cointegration.endogenous: at least two series required".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn response_label(&self) -> &str {
        self.series
            .iter()
            .find(|s| s.role == SeriesRole::Response)
            .map(|s| s.label())
            .expect("validated config has a response")
    }

    pub fn regressor_labels(&self) -> Vec<&str> {
        self.series
            .iter()
            .filter(|s| s.role == SeriesRole::Regressor)
            .map(|s| s.label())
            .collect()
    }
}
