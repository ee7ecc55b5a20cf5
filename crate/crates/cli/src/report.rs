//! Report assembly and emission: stable JSON (17 significant digits),
//! fixed-width text tables, and a per-table CSV bundle. Identical reports
//! serialize to identical bytes in every format.

use crate::config::OutputFormat;
use crate::error::Result;
use longrun::critical_values::Quantiles;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub ingestion: IngestionBlock,
    pub unit_root: Vec<UnitRootRow>,
    pub break_summary: Vec<BreakSummaryRow>,
    pub lag_selection: Vec<LagSelectionBlock>,
    pub johansen: Vec<JohansenBlock>,
    pub dols: Vec<DolsBlock>,
    pub errors: Vec<StageError>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub artifact_version: String,
    pub data_path: String,
    pub data_sha256: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestionBlock {
    pub start_year: i32,
    pub end_year: i32,
    pub observations: usize,
    pub series: Vec<IngestedSeries>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestedSeries {
    pub column: String,
    pub label: String,
    pub log_applied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CvBlock {
    pub p90: Option<f64>,
    pub p95: Option<f64>,
    pub p99: Option<f64>,
}

impl From<Quantiles> for CvBlock {
    fn from(q: Quantiles) -> Self {
        Self {
            p90: q.p90,
            p95: q.p95,
            p99: q.p99,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DummyRow {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub significant_95: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitRootRow {
    pub series: String,
    pub family: String,
    pub spec: String,
    pub statistic: f64,
    pub alpha_minus_one: f64,
    pub lags: usize,
    pub bandwidth: Option<usize>,
    pub break_years: Vec<i32>,
    pub critical_values: CvBlock,
    pub level: f64,
    pub decision: String,
    pub nobs: usize,
    pub dummies: Vec<DummyRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BreakSummaryRow {
    pub series: String,
    pub source: String,
    pub years: Vec<i32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LagSelectionRow {
    pub lag: usize,
    pub aic: f64,
    pub sic: f64,
    pub hq: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LagSelectionBlock {
    pub config: String,
    pub rows: Vec<LagSelectionRow>,
    pub chosen_aic: usize,
    pub chosen_sic: usize,
    pub chosen_hq: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct JohansenRow {
    pub rank: usize,
    pub trace: f64,
    pub max_eigen: f64,
    pub critical_values: CvBlock,
    pub conclusion: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct JohansenBlock {
    pub config: String,
    pub break_years: Vec<i32>,
    pub lag_order: usize,
    pub level: f64,
    pub eigenvalues: Vec<f64>,
    pub rows: Vec<JohansenRow>,
    pub decided_rank: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefRow {
    pub name: String,
    pub estimate: f64,
    pub classical_se: f64,
    pub hac_se: f64,
    pub t_stat: f64,
    /// Significance stars at 90/95/99% (two-sided).
    pub stars: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElasticityRow {
    pub label: String,
    pub regressor: String,
    pub coefficient: f64,
    pub hac_se: f64,
    pub significant: bool,
    pub inverse: bool,
    pub class: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DolsBlock {
    pub model: String,
    pub response: String,
    pub long_run: Vec<CoefRow>,
    pub deterministic: Vec<CoefRow>,
    /// Lead/lag difference terms; reported but not interpretable.
    pub nuisance: Vec<CoefRow>,
    pub r2_adjusted: f64,
    pub regression_se: f64,
    pub long_run_variance: f64,
    pub lrv_bandwidth: usize,
    pub jarque_bera: f64,
    pub jarque_bera_p: f64,
    pub nobs: usize,
    pub elasticities: Vec<ElasticityRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

// ---------------------------------------------------------------------------
// JSON emission with fixed float formatting.
// ---------------------------------------------------------------------------

/// serde_json formatter writing every float with 17 significant digits, so
/// reports are byte-stable and round-trip exactly.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_bytes(report: &AnalysisReport) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    report
        .serialize(&mut serializer)
        .map_err(|e| crate::error::CliError::Config(format!("report serialization: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

// ---------------------------------------------------------------------------
// Text rendering.
// ---------------------------------------------------------------------------

fn fmt(value: f64) -> String {
    format!("{value:.4}")
}

fn opt(value: Option<f64>) -> String {
    value.map(fmt).unwrap_or_else(|| "-".into())
}

pub fn to_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: &str| {
        out.push_str(line);
        out.push('\n');
    };

    push(&mut out, "================================================================");
    push(&mut out, "LONG-RUN ANALYSIS REPORT");
    push(&mut out, "================================================================");
    push(
        &mut out,
        &format!(
            "data: {}  ({}-{}, {} observations)",
            report.provenance.data_path,
            report.ingestion.start_year,
            report.ingestion.end_year,
            report.ingestion.observations
        ),
    );
    push(&mut out, &format!("data sha256: {}", report.provenance.data_sha256));
    push(
        &mut out,
        &format!(
            "artifact {}  seed {}",
            report.provenance.artifact_version, report.provenance.seed
        ),
    );

    if !report.unit_root.is_empty() {
        push(&mut out, "");
        push(&mut out, "UNIT-ROOT TESTS");
        push(
            &mut out,
            &format!(
                "{:<6} {:<17} {:>10} {:>5} {:>10} {:>9} {:>9} {:>9}  {:<18} {}",
                "series", "test", "statistic", "lags", "breaks", "cv90", "cv95", "cv99", "decision", "spec"
            ),
        );
        for row in &report.unit_root {
            let breaks = if row.break_years.is_empty() {
                "-".to_string()
            } else {
                row.break_years
                    .iter()
                    .map(|y| y.to_string())
                    .collect::<Vec<_>>()
                    .join("/")
            };
            push(
                &mut out,
                &format!(
                    "{:<6} {:<17} {:>10} {:>5} {:>10} {:>9} {:>9} {:>9}  {:<18} {}",
                    row.series,
                    row.family,
                    fmt(row.statistic),
                    row.lags,
                    breaks,
                    opt(row.critical_values.p90),
                    opt(row.critical_values.p95),
                    opt(row.critical_values.p99),
                    row.decision,
                    row.spec
                ),
            );
            for d in &row.dummies {
                push(
                    &mut out,
                    &format!(
                        "       {:<10} coef {:>9}  se {:>9}  t {:>8}{}",
                        d.name,
                        fmt(d.coefficient),
                        fmt(d.std_error),
                        fmt(d.t_stat),
                        if d.significant_95 { "  **" } else { "" }
                    ),
                );
            }
        }
    }

    if !report.lag_selection.is_empty() {
        push(&mut out, "");
        push(&mut out, "VAR LAG SELECTION");
        for block in &report.lag_selection {
            push(
                &mut out,
                &format!(
                    "{}: chosen aic={} sic={} hq={}",
                    block.config, block.chosen_aic, block.chosen_sic, block.chosen_hq
                ),
            );
            push(&mut out, &format!("  {:>4} {:>12} {:>12} {:>12}", "lag", "aic", "sic", "hq"));
            for row in &block.rows {
                push(
                    &mut out,
                    &format!(
                        "  {:>4} {:>12} {:>12} {:>12}",
                        row.lag,
                        fmt(row.aic),
                        fmt(row.sic),
                        fmt(row.hq)
                    ),
                );
            }
        }
    }

    if !report.johansen.is_empty() {
        push(&mut out, "");
        push(&mut out, "JOHANSEN COINTEGRATION TESTS");
        for block in &report.johansen {
            let breaks = block
                .break_years
                .iter()
                .map(|y| y.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            push(
                &mut out,
                &format!(
                    "{} (breaks: {}; lags {}; level {:.0}%)",
                    block.config,
                    if breaks.is_empty() { "none" } else { &breaks },
                    block.lag_order,
                    block.level * 100.0
                ),
            );
            push(
                &mut out,
                &format!(
                    "  {:<6} {:>10} {:>10} {:>9} {:>9} {:>9}  {}",
                    "rank", "trace", "max-eigen", "cv90", "cv95", "cv99", "conclusion"
                ),
            );
            for row in &block.rows {
                push(
                    &mut out,
                    &format!(
                        "  r<={:<3} {:>10} {:>10} {:>9} {:>9} {:>9}  {}",
                        row.rank,
                        fmt(row.trace),
                        fmt(row.max_eigen),
                        opt(row.critical_values.p90),
                        opt(row.critical_values.p95),
                        opt(row.critical_values.p99),
                        row.conclusion
                    ),
                );
            }
            match block.decided_rank {
                Some(r) => push(&mut out, &format!("  decided rank: {r}")),
                None => push(&mut out, "  decided rank: undetermined"),
            }
        }
    }

    if !report.dols.is_empty() {
        push(&mut out, "");
        push(&mut out, "DYNAMIC OLS LONG-RUN ESTIMATES");
        for block in &report.dols {
            push(
                &mut out,
                &format!("{} (response {}, T = {})", block.model, block.response, block.nobs),
            );
            for c in block.long_run.iter().chain(&block.deterministic) {
                push(&mut out, &format!("  {:<12} {:>12}{}", c.name, fmt(c.estimate), c.stars));
                push(&mut out, &format!("  {:<12} {:>12}", "", format!("[{}]", fmt(c.hac_se))));
            }
            push(
                &mut out,
                &format!(
                    "  adjusted R2 {}  regression SE {}  long-run variance {}  Jarque-Bera {}",
                    fmt(block.r2_adjusted),
                    fmt(block.regression_se),
                    fmt(block.long_run_variance),
                    fmt(block.jarque_bera)
                ),
            );
            for e in &block.elasticities {
                push(
                    &mut out,
                    &format!(
                        "  elasticity[{}] = {} ({}{})",
                        e.label,
                        fmt(e.coefficient),
                        e.class,
                        if e.inverse { ", inverse" } else { "" }
                    ),
                );
            }
        }
    }

    if !report.errors.is_empty() {
        push(&mut out, "");
        push(&mut out, "STAGE ERRORS");
        for e in &report.errors {
            push(&mut out, &format!("  [{}] {}", e.stage, e.message));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// CSV bundle.
// ---------------------------------------------------------------------------

fn csv_float(value: f64) -> String {
    format!("{value:.6}")
}

fn csv_opt(value: Option<f64>) -> String {
    value.map(csv_float).unwrap_or_default()
}

fn unit_root_csv(report: &AnalysisReport) -> String {
    let mut out = String::from(
        "series,family,spec,statistic,alpha_minus_one,lags,bandwidth,breaks,cv90,cv95,cv99,decision,nobs\n",
    );
    for row in &report.unit_root {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.series,
            row.family,
            row.spec,
            csv_float(row.statistic),
            csv_float(row.alpha_minus_one),
            row.lags,
            row.bandwidth.map(|b| b.to_string()).unwrap_or_default(),
            row.break_years
                .iter()
                .map(|y| y.to_string())
                .collect::<Vec<_>>()
                .join("/"),
            csv_opt(row.critical_values.p90),
            csv_opt(row.critical_values.p95),
            csv_opt(row.critical_values.p99),
            row.decision,
            row.nobs
        ));
    }
    out
}

fn johansen_csv(report: &AnalysisReport) -> String {
    let mut out = String::from(
        "config,breaks,lag_order,rank,trace,max_eigen,cv90,cv95,cv99,conclusion,decided_rank\n",
    );
    for block in &report.johansen {
        for row in &block.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                block.config,
                block
                    .break_years
                    .iter()
                    .map(|y| y.to_string())
                    .collect::<Vec<_>>()
                    .join("/"),
                block.lag_order,
                row.rank,
                csv_float(row.trace),
                csv_float(row.max_eigen),
                csv_opt(row.critical_values.p90),
                csv_opt(row.critical_values.p95),
                csv_opt(row.critical_values.p99),
                row.conclusion,
                block
                    .decided_rank
                    .map(|r| r.to_string())
                    .unwrap_or_default()
            ));
        }
    }
    out
}

fn dols_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("model,group,name,estimate,classical_se,hac_se,t_stat,stars\n");
    for block in &report.dols {
        let groups = [
            ("long_run", &block.long_run),
            ("deterministic", &block.deterministic),
            ("nuisance", &block.nuisance),
        ];
        for (group, coefficients) in groups {
            for c in coefficients.iter() {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    block.model,
                    group,
                    c.name,
                    csv_float(c.estimate),
                    csv_float(c.classical_se),
                    csv_float(c.hac_se),
                    csv_float(c.t_stat),
                    c.stars
                ));
            }
        }
    }
    out
}

fn lag_selection_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("config,lag,aic,sic,hq,chosen_aic,chosen_sic,chosen_hq\n");
    for block in &report.lag_selection {
        for row in &block.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                block.config,
                row.lag,
                csv_float(row.aic),
                csv_float(row.sic),
                csv_float(row.hq),
                block.chosen_aic,
                block.chosen_sic,
                block.chosen_hq
            ));
        }
    }
    out
}

/// Writes the report in the requested format; returns the created files.
pub fn emit_report(
    report: &AnalysisReport,
    format: OutputFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match format {
        OutputFormat::Json => {
            let path = dir.join("report.json");
            let mut f = std::fs::File::create(&path)?;
            f.write_all(&to_json_bytes(report)?)?;
            written.push(path);
        }
        OutputFormat::Text => {
            let path = dir.join("report.txt");
            std::fs::write(&path, to_text(report))?;
            written.push(path);
        }
        OutputFormat::CsvBundle => {
            for (name, body) in [
                ("unit_root.csv", unit_root_csv(report)),
                ("johansen.csv", johansen_csv(report)),
                ("dols.csv", dols_csv(report)),
                ("lag_selection.csv", lag_selection_csv(report)),
            ] {
                let path = dir.join(name);
                std::fs::write(&path, body)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
