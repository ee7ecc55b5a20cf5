//! The analysis pipeline: ingest, transform, unit-root battery,
//! cointegration, and dynamic OLS, with per-stage error isolation.

use crate::config::{
    AnalysisConfig, OutlierStyle, SingleBreakMethod, TrendBreakFormChoice, TwoBreakMethod,
};
use crate::error::{CliError, Result};
use crate::ingest::{ingest_csv, DataSet};
use crate::report::*;
use longrun::dols::{dols_fit, elasticity_report, DolsBreak, DolsSpec, TrendBreakForm};
use longrun::cointegration::{johansen_test_at, var_lag_select, VarSpec};
use longrun::regression::t_critical;
use longrun::series::{log_transform, BreakDate, Column, Series};
use longrun::unit_root::{
    adf, clemente, lumsdaine_papell, perron_known_break, phillips_perron, zivot_andrews,
    BreakStyle, ClementeVariant, UnitRootModelSpec, UnitRootOutcome,
};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Which pipeline stages to execute.
#[derive(Debug, Clone, Copy)]
pub struct StageSet {
    pub unit_root: bool,
    pub cointegration: bool,
    pub dols: bool,
}

impl StageSet {
    pub fn all() -> Self {
        Self {
            unit_root: true,
            cointegration: true,
            dols: true,
        }
    }

    pub fn only_unit_root() -> Self {
        Self {
            unit_root: true,
            cointegration: false,
            dols: false,
        }
    }

    pub fn only_cointegration() -> Self {
        Self {
            unit_root: false,
            cointegration: true,
            dols: false,
        }
    }

    pub fn only_dols() -> Self {
        Self {
            unit_root: false,
            cointegration: false,
            dols: true,
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Validates the data file against the configuration and returns the
/// parsed set.
pub fn ingest(config: &AnalysisConfig) -> Result<DataSet> {
    let data = ingest_csv(&config.data.path, &config.data.year_column).map_err(|source| {
        CliError::Data {
            path: config.data.path.clone(),
            source,
        }
    })?;
    for s in &config.series {
        if data.by_name(&s.column).is_none() {
            return Err(CliError::Config(format!(
                "series.column: `{}` not present in {}",
                s.column,
                config.data.path.display()
            )));
        }
    }
    Ok(data)
}

/// Pre-flight validation of configured years against the ingested range.
fn validate_against_data(config: &AnalysisConfig, data: &DataSet) -> Result<()> {
    let in_range = |year: i32| year > data.start_year && year < data.end_year;
    for e in &config.unit_root.single_break {
        if let Some(year) = e.break_year {
            if !in_range(year) {
                return Err(CliError::Config(format!(
                    "unit_root.single_break.break_year: {year} outside the data range {}-{}",
                    data.start_year, data.end_year
                )));
            }
        }
    }
    if let Some(coint) = &config.cointegration {
        for c in &coint.configs {
            for &year in &c.break_years {
                if !in_range(year) {
                    return Err(CliError::Config(format!(
                        "cointegration.configs.break_years: {year} outside the data range {}-{}",
                        data.start_year, data.end_year
                    )));
                }
            }
        }
    }
    if let Some(dols) = &config.dols {
        for m in &dols.models {
            for &year in &m.break_years {
                if !in_range(year) {
                    return Err(CliError::Config(format!(
                        "dols.models.break_years: {year} outside the data range {}-{}",
                        data.start_year, data.end_year
                    )));
                }
            }
        }
    }
    Ok(())
}

struct StageLog {
    errors: Vec<StageError>,
}

impl StageLog {
    fn record(&mut self, stage: &str, message: impl std::fmt::Display) {
        self.errors.push(StageError {
            stage: stage.to_string(),
            message: message.to_string(),
        });
    }
}

fn significance_stars(t_stat: f64, dof: usize) -> String {
    let t = t_stat.abs();
    if t >= t_critical(dof, 0.99) {
        "***".into()
    } else if t >= t_critical(dof, 0.95) {
        "**".into()
    } else if t >= t_critical(dof, 0.90) {
        "*".into()
    } else {
        String::new()
    }
}

fn outcome_to_row(series: &str, outcome: &UnitRootOutcome, level: f64) -> UnitRootRow {
    UnitRootRow {
        series: series.to_string(),
        family: outcome.family.label().to_string(),
        spec: outcome.spec_label.clone(),
        statistic: outcome.statistic,
        alpha_minus_one: outcome.alpha_minus_one,
        lags: outcome.chosen_lags,
        bandwidth: outcome.bandwidth,
        break_years: outcome.breaks.iter().map(|b| b.year).collect(),
        critical_values: outcome.critical_values.into(),
        level,
        decision: outcome.decide_at(level).label().to_string(),
        nobs: outcome.nobs,
        dummies: outcome
            .dummy_report
            .iter()
            .map(|d| DummyRow {
                name: d.name.clone(),
                coefficient: d.coefficient,
                std_error: d.std_error,
                t_stat: d.t_stat,
                significant_95: d.significant_95,
            })
            .collect(),
    }
}

/// Runs the configured stages in order; failures in one stage are recorded
/// and do not abort later independent stages.
pub fn run_analysis(config: &AnalysisConfig, stages: StageSet) -> Result<AnalysisReport> {
    let raw_bytes = std::fs::read(&config.data.path).map_err(|e| CliError::Data {
        path: config.data.path.clone(),
        source: crate::error::DataError::Io(e),
    })?;
    let data = ingest(config)?;
    validate_against_data(config, &data)?;
    let mut log = StageLog { errors: Vec::new() };

    // Transform stage: logs where requested; failures sideline the series.
    let mut working: BTreeMap<String, Series> = BTreeMap::new();
    let mut ingested = Vec::new();
    for s in &config.series {
        let raw = data.by_name(&s.column).expect("validated by ingest");
        let label = s.label().to_string();
        if s.log {
            match log_transform(raw) {
                Ok(logged) => {
                    let relabeled =
                        Series::new(label.clone(), logged.start_year(), logged.values().to_vec())
                            .expect("log output is finite");
                    working.insert(label.clone(), relabeled);
                }
                Err(e) => log.record(&format!("transform[{label}]"), e),
            }
        } else {
            let relabeled = Series::new(label.clone(), raw.start_year(), raw.values().to_vec())
                .expect("ingested series is finite");
            working.insert(label.clone(), relabeled);
        }
        ingested.push(IngestedSeries {
            column: s.column.clone(),
            label: s.label().to_string(),
            log_applied: s.log,
        });
    }

    let mut unit_root_rows = Vec::new();
    let mut break_summary = Vec::new();

    if stages.unit_root {
        let level = config.unit_root.level;
        for entry in &config.unit_root.adf {
            let stage = format!("unit_root/adf[{}]", entry.series);
            let Some(series) = working.get(&entry.series) else {
                log.record(&stage, "series unavailable after transform stage");
                continue;
            };
            match adf(
                series,
                entry.deterministic.into(),
                entry.lags.max_lag,
                entry.lags.to_selection(),
            ) {
                Ok(outcome) => unit_root_rows.push(outcome_to_row(&entry.series, &outcome, level)),
                Err(e) => log.record(&stage, e),
            }
        }
        for entry in &config.unit_root.pp {
            let stage = format!("unit_root/pp[{}]", entry.series);
            let Some(series) = working.get(&entry.series) else {
                log.record(&stage, "series unavailable after transform stage");
                continue;
            };
            match phillips_perron(series, entry.deterministic.into(), entry.bandwidth) {
                Ok(outcome) => unit_root_rows.push(outcome_to_row(&entry.series, &outcome, level)),
                Err(e) => log.record(&stage, e),
            }
        }
        for entry in &config.unit_root.single_break {
            let stage = format!("unit_root/single_break[{}]", entry.series);
            let Some(series) = working.get(&entry.series) else {
                log.record(&stage, "series unavailable after transform stage");
                continue;
            };
            let style = match entry.style {
                OutlierStyle::Io => BreakStyle::Io,
                OutlierStyle::Ao => BreakStyle::Ao,
            };
            let spec = UnitRootModelSpec::with_break(
                entry.deterministic.into(),
                style,
                entry.break_kind.into(),
                entry.lags.to_selection(),
                entry.lags.max_lag,
            );
            let outcome = match entry.method {
                SingleBreakMethod::ZivotAndrews => zivot_andrews(series, &spec, entry.trim),
                SingleBreakMethod::Perron => {
                    let year = entry.break_year.expect("validated by config");
                    match BreakDate::for_series(year, series) {
                        Ok(date) => perron_known_break(series, &spec, date),
                        Err(e) => {
                            log.record(&stage, e);
                            continue;
                        }
                    }
                }
            };
            match outcome {
                Ok(outcome) => {
                    break_summary.push(BreakSummaryRow {
                        series: entry.series.clone(),
                        source: outcome.family.label().to_string(),
                        years: outcome.breaks.iter().map(|b| b.year).collect(),
                    });
                    unit_root_rows.push(outcome_to_row(&entry.series, &outcome, level));
                }
                Err(e) => log.record(&stage, e),
            }
        }
        for entry in &config.unit_root.two_break {
            let stage = format!("unit_root/two_break[{}]", entry.series);
            let Some(series) = working.get(&entry.series) else {
                log.record(&stage, "series unavailable after transform stage");
                continue;
            };
            let outcome = match entry.method {
                TwoBreakMethod::LumsdainePapell => lumsdaine_papell(
                    series,
                    entry.trim,
                    entry.lags.max_lag,
                    entry.lags.to_selection(),
                ),
                TwoBreakMethod::ClementeIo => clemente(
                    series,
                    ClementeVariant::Io,
                    entry.trim,
                    entry.lags.max_lag,
                    entry.lags.to_selection(),
                ),
                TwoBreakMethod::ClementeAo => clemente(
                    series,
                    ClementeVariant::Ao,
                    entry.trim,
                    entry.lags.max_lag,
                    entry.lags.to_selection(),
                ),
            };
            match outcome {
                Ok(outcome) => {
                    break_summary.push(BreakSummaryRow {
                        series: entry.series.clone(),
                        source: outcome.family.label().to_string(),
                        years: outcome.breaks.iter().map(|b| b.year).collect(),
                    });
                    unit_root_rows.push(outcome_to_row(&entry.series, &outcome, level));
                }
                Err(e) => log.record(&stage, e),
            }
        }
    }

    let mut lag_selection_blocks = Vec::new();
    let mut johansen_blocks = Vec::new();

    if stages.cointegration {
        if let Some(coint) = &config.cointegration {
            for break_config in &coint.configs {
                let stage = format!("cointegration[{}]", break_config.name);
                let mut endogenous = Vec::new();
                let mut missing = None;
                for label in &coint.endogenous {
                    match working.get(label) {
                        Some(s) => endogenous.push(s.clone()),
                        None => missing = Some(label.clone()),
                    }
                }
                if let Some(label) = missing {
                    log.record(&stage, format!("series {label} unavailable"));
                    continue;
                }
                let len = endogenous[0].len();
                let start_year = endogenous[0].start_year();

                let mut exogenous: Vec<Column> = Vec::new();
                let mut fractions = Vec::new();
                let mut bad_year = None;
                for &year in &break_config.break_years {
                    match BreakDate::resolve(year, start_year, len) {
                        Ok(date) => {
                            let period = date.period(start_year);
                            exogenous.push(Column::new(
                                format!("du_{year}"),
                                (1..=len)
                                    .map(|t| if t > period { 1.0 } else { 0.0 })
                                    .collect(),
                            ));
                            exogenous.push(Column::new(
                                format!("dt_{year}"),
                                (1..=len)
                                    .map(|t| if t > period { (t - period) as f64 } else { 0.0 })
                                    .collect(),
                            ));
                            fractions.push(date.fraction);
                        }
                        Err(e) => bad_year = Some(e),
                    }
                }
                if let Some(e) = bad_year {
                    log.record(&stage, e);
                    continue;
                }
                if coint.include_trend {
                    exogenous.push(longrun::series::trend_column(len));
                }

                let selection = var_lag_select(
                    &endogenous,
                    longrun::series::DeterministicSpec::Constant,
                    &exogenous,
                    coint.max_lag,
                );
                let lag_order = match &selection {
                    Ok(sel) => {
                        lag_selection_blocks.push(LagSelectionBlock {
                            config: break_config.name.clone(),
                            rows: sel
                                .table
                                .iter()
                                .map(|r| LagSelectionRow {
                                    lag: r.lag,
                                    aic: r.aic,
                                    sic: r.sic,
                                    hq: r.hq,
                                })
                                .collect(),
                            chosen_aic: sel.chosen_aic,
                            chosen_sic: sel.chosen_sic,
                            chosen_hq: sel.chosen_hq,
                        });
                        break_config.lag_order.unwrap_or(sel.chosen_sic)
                    }
                    Err(e) => {
                        log.record(&format!("{stage}/lag_selection"), e);
                        break_config.lag_order.unwrap_or(1)
                    }
                };

                let spec = VarSpec {
                    endogenous,
                    lag_order,
                    deterministic: longrun::series::DeterministicSpec::Constant,
                    exogenous,
                    break_fractions: fractions,
                };
                match johansen_test_at(&spec, coint.level) {
                    Ok(outcome) => {
                        let decided = outcome.decided_rank;
                        let rows = outcome
                            .trace
                            .iter()
                            .zip(&outcome.max_eigen)
                            .map(|(tr, me)| JohansenRow {
                                rank: tr.rank,
                                trace: tr.statistic,
                                max_eigen: me.statistic,
                                critical_values: tr.critical_values.into(),
                                conclusion: match decided {
                                    Some(r) if tr.rank < r => "rejection".into(),
                                    Some(r) if tr.rank == r => "acceptance".into(),
                                    Some(_) => "-".into(),
                                    None => match tr.reject {
                                        Some(true) => "rejection".into(),
                                        Some(false) => "acceptance".into(),
                                        None => "-".into(),
                                    },
                                },
                            })
                            .collect();
                        johansen_blocks.push(JohansenBlock {
                            config: break_config.name.clone(),
                            break_years: break_config.break_years.clone(),
                            lag_order,
                            level: coint.level,
                            eigenvalues: outcome.eigenvalues.clone(),
                            rows,
                            decided_rank: decided,
                        });
                    }
                    Err(e) => log.record(&format!("{stage}/johansen"), e),
                }
            }
        }
    }

    let mut dols_blocks = Vec::new();
    if stages.dols {
        if let Some(section) = &config.dols {
            let response_label = config.response_label().to_string();
            let regressor_labels: Vec<String> = config
                .regressor_labels()
                .into_iter()
                .map(|s| s.to_string())
                .collect();
            for model in &section.models {
                let stage = format!("dols[{}]", model.name);
                let Some(response) = working.get(&response_label) else {
                    log.record(&stage, format!("series {response_label} unavailable"));
                    continue;
                };
                let mut regressors = Vec::new();
                let mut missing = None;
                for label in &regressor_labels {
                    match working.get(label) {
                        Some(s) => regressors.push(s.clone()),
                        None => missing = Some(label.clone()),
                    }
                }
                if let Some(label) = missing {
                    log.record(&stage, format!("series {label} unavailable"));
                    continue;
                }

                let mut breaks = Vec::new();
                let mut bad_year = None;
                for &year in &model.break_years {
                    match BreakDate::for_series(year, response) {
                        Ok(date) => breaks.push(DolsBreak {
                            date,
                            intercept_dummy: model.break_intercept,
                            trend_interaction: model.break_trend_interaction,
                        }),
                        Err(e) => bad_year = Some(e),
                    }
                }
                if let Some(e) = bad_year {
                    log.record(&stage, e);
                    continue;
                }

                let spec = DolsSpec {
                    response: response.clone(),
                    regressors,
                    constant: model.constant,
                    trend: model.trend,
                    breaks,
                    leads: model.leads,
                    lags: model.lags,
                    trend_break_form: match model.trend_break_form {
                        TrendBreakFormChoice::Ramp => TrendBreakForm::Ramp,
                        TrendBreakFormChoice::Product => TrendBreakForm::Product,
                    },
                    lrv_bandwidth: model.bandwidth,
                    force_classical_errors: false,
                };
                match dols_fit(&spec) {
                    Ok(fit) => {
                        let dof = fit.nobs.saturating_sub(
                            fit.long_run.len() + fit.deterministic.len() + fit.nuisance.len(),
                        );
                        let wrap = |c: &longrun::dols::DolsCoefficient| CoefRow {
                            name: c.name.clone(),
                            estimate: c.estimate,
                            classical_se: c.classical_se,
                            hac_se: c.hac_se,
                            t_stat: c.t_stat,
                            stars: significance_stars(c.t_stat, dof),
                        };
                        let elasticities = elasticity_report(&fit, section.level)
                            .into_iter()
                            .map(|e| ElasticityRow {
                                label: e.label,
                                regressor: e.regressor,
                                coefficient: e.coefficient,
                                hac_se: e.hac_se,
                                significant: e.significant,
                                inverse: e.inverse,
                                class: e.class.label().to_string(),
                            })
                            .collect();
                        dols_blocks.push(DolsBlock {
                            model: model.name.clone(),
                            response: response_label.clone(),
                            long_run: fit.long_run.iter().map(&wrap).collect(),
                            deterministic: fit.deterministic.iter().map(&wrap).collect(),
                            nuisance: fit.nuisance.iter().map(&wrap).collect(),
                            r2_adjusted: fit.r2_adjusted,
                            regression_se: fit.regression_se,
                            long_run_variance: fit.long_run_variance.value,
                            lrv_bandwidth: fit.long_run_variance.bandwidth,
                            jarque_bera: fit.jarque_bera.statistic,
                            jarque_bera_p: fit.jarque_bera.p_value,
                            nobs: fit.nobs,
                            elasticities,
                        });
                    }
                    Err(e) => log.record(&stage, e),
                }
            }
        }
    }

    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        provenance: Provenance {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            data_path: config.data.path.display().to_string(),
            data_sha256: sha256_hex(&raw_bytes),
            seed: config.seed,
        },
        ingestion: IngestionBlock {
            start_year: data.start_year,
            end_year: data.end_year,
            observations: (data.end_year - data.start_year + 1) as usize,
            series: ingested,
        },
        unit_root: unit_root_rows,
        break_summary,
        lag_selection: lag_selection_blocks,
        johansen: johansen_blocks,
        dols: dols_blocks,
        errors: log.errors,
    })
}
