//! Stationarity test battery: ADF, Phillips-Perron, known-break Perron
//! (additive and innovational outlier forms), Zivot-Andrews endogenous
//! single break, Lumsdaine-Papell two trend breaks, and the
//! Clemente-Montanes-Reyes double mean shift.

mod adf;
mod clemente;
mod lumsdaine_papell;
mod perron;
mod phillips_perron;
mod zivot_andrews;

pub use adf::adf;
pub use clemente::{clemente, clemente_at, ClementeVariant};
pub use lumsdaine_papell::{lumsdaine_papell, lumsdaine_papell_at};
pub use perron::perron_known_break;
pub use phillips_perron::phillips_perron;
pub use zivot_andrews::{zivot_andrews, zivot_andrews_at};

use crate::critical_values::{Quantiles, TestFamily};
use crate::error::{Error, Result};
use crate::regression::{ols, t_critical, DesignMatrix, OlsFit};
use crate::series::{BreakDate, BreakKind, Column, DeterministicSpec};

/// How the lag order of the augmented regression is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LagSelection {
    Fixed(usize),
    Aic,
    Sic,
    Hq,
    /// Drop the longest lagged difference while it is insignificant at the
    /// given two-sided confidence level.
    GeneralToSpecific(f64),
}

impl LagSelection {
    pub fn label(self) -> String {
        match self {
            LagSelection::Fixed(k) => format!("fixed({k})"),
            LagSelection::Aic => "aic".into(),
            LagSelection::Sic => "sic".into(),
            LagSelection::Hq => "hq".into(),
            LagSelection::GeneralToSpecific(level) => format!("gts({level})"),
        }
    }
}

/// How a structural break enters the test equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakStyle {
    None,
    /// Additive outlier: instantaneous shift of the deterministic path,
    /// tested in two stages.
    Ao,
    /// Innovational outlier: the break enters through the innovations,
    /// tested in a single dynamic regression.
    Io,
}

/// Full model specification for a unit-root test.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitRootModelSpec {
    pub deterministic: DeterministicSpec,
    pub break_style: BreakStyle,
    pub break_kind: Option<BreakKind>,
    pub lag_selection: LagSelection,
    pub max_lag: usize,
}

impl UnitRootModelSpec {
    pub fn no_break(det: DeterministicSpec, lag_selection: LagSelection, max_lag: usize) -> Self {
        Self {
            deterministic: det,
            break_style: BreakStyle::None,
            break_kind: None,
            lag_selection,
            max_lag,
        }
    }

    pub fn with_break(
        det: DeterministicSpec,
        style: BreakStyle,
        kind: BreakKind,
        lag_selection: LagSelection,
        max_lag: usize,
    ) -> Self {
        Self {
            deterministic: det,
            break_style: style,
            break_kind: Some(kind),
            lag_selection,
            max_lag,
        }
    }

    /// Enforces the admissible model combinations.
    pub fn validate(&self) -> Result<()> {
        match (self.break_style, self.break_kind) {
            (BreakStyle::None, Some(_)) => Err(Error::InvalidModelCombination {
                reason: "break form supplied without a break style".into(),
            }),
            (BreakStyle::Ao | BreakStyle::Io, None) => Err(Error::InvalidModelCombination {
                reason: "break style requires a break form".into(),
            }),
            (BreakStyle::Ao, Some(kind)) => {
                if kind != BreakKind::Intercept && !self.deterministic.has_trend() {
                    Err(Error::InvalidModelCombination {
                        reason: "a break in trend requires a trending specification".into(),
                    })
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self.break_kind {
            None => format!("det={}", self.deterministic.label()),
            Some(kind) => format!(
                "det={};{};break={}",
                self.deterministic.label(),
                match self.break_style {
                    BreakStyle::Ao => "ao",
                    BreakStyle::Io => "io",
                    BreakStyle::None => "none",
                },
                kind.label()
            ),
        }
    }
}

/// Verdict of a unit-root test at the configured confidence level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    RejectUnitRoot,
    AcceptUnitRoot,
    Inconclusive,
}

impl Decision {
    pub fn label(self) -> &'static str {
        match self {
            Decision::RejectUnitRoot => "reject_unit_root",
            Decision::AcceptUnitRoot => "accept_unit_root",
            Decision::Inconclusive => "inconclusive",
        }
    }
}

/// Coefficient, standard error, and t-ratio of a deterministic or break
/// regressor reported alongside the test statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct DummyStat {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub significant_95: bool,
}

/// Outcome of any test in the battery.
#[derive(Debug, Clone)]
pub struct UnitRootOutcome {
    pub family: TestFamily,
    pub spec_label: String,
    /// t-ratio on the unit-root coefficient (possibly corrected).
    pub statistic: f64,
    /// Coefficient on the lagged level in the differenced regression.
    pub alpha_minus_one: f64,
    pub chosen_lags: usize,
    pub breaks: Vec<BreakDate>,
    pub critical_values: Quantiles,
    pub level: f64,
    pub decision: Decision,
    pub dummy_report: Vec<DummyStat>,
    pub bandwidth: Option<usize>,
    pub nobs: usize,
}

impl UnitRootOutcome {
    /// Left-tail decision at a confidence level covered by the attached
    /// critical values.
    pub fn decide_at(&self, level: f64) -> Decision {
        decide_left_tail(self.statistic, &self.critical_values, level)
    }
}

pub(crate) fn decide_left_tail(statistic: f64, cvs: &Quantiles, level: f64) -> Decision {
    match cvs.at(level) {
        Some(cv) => {
            if statistic < cv {
                Decision::RejectUnitRoot
            } else {
                Decision::AcceptUnitRoot
            }
        }
        None => Decision::Inconclusive,
    }
}

/// Default decision level for the battery.
pub(crate) const DEFAULT_LEVEL: f64 = 0.95;

// ---------------------------------------------------------------------------
// Shared regression machinery.
// ---------------------------------------------------------------------------

/// A fitted ADF-style regression: the response is the first difference and
/// the regressors are deterministic columns, the lagged level, and lagged
/// differences.
pub(crate) struct AdfStyleFit {
    pub fit: OlsFit,
    pub gamma_index: usize,
}

/// Slices full-sample columns to regression rows `from..len`.
pub(crate) fn slice_columns(columns: &[Column], from: usize) -> Vec<Column> {
    columns
        .iter()
        .map(|c| Column::new(c.name.clone(), c.values[from..].to_vec()))
        .collect()
}

/// Fits `dy_t = det + gamma * y_{t-1} + sum c_i dy_{t-i}` over observations
/// `sample_start..T` (0-based; `sample_start` must be at least `k + 1`).
/// `det_columns` are full-sample columns and are sliced internally; sliced
/// columns that are identically zero (a pulse falling outside the sample)
/// are dropped.
pub(crate) fn adf_style_fit(
    y: &[f64],
    k: usize,
    sample_start: usize,
    det_columns: &[Column],
) -> Result<AdfStyleFit> {
    adf_style_fit_with(y, k, sample_start, det_columns, Solver::Svd)
}

/// Which least-squares path to use; grid searches rank candidates with the
/// fast normal-equation path and re-fit the winner with the SVD engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Solver {
    Svd,
    Fast,
}

pub(crate) fn adf_style_fit_with(
    y: &[f64],
    k: usize,
    sample_start: usize,
    det_columns: &[Column],
    solver: Solver,
) -> Result<AdfStyleFit> {
    let t_len = y.len();
    if sample_start < k + 1 || sample_start >= t_len {
        return Err(Error::SeriesTooShort {
            len: t_len,
            min: sample_start + 2,
        });
    }
    let rows = t_len - sample_start;
    let mut response = Vec::with_capacity(rows);
    let mut lag_level = Vec::with_capacity(rows);
    for t in sample_start..t_len {
        response.push(y[t] - y[t - 1]);
        lag_level.push(y[t - 1]);
    }

    let mut columns: Vec<Column> = slice_columns(det_columns, sample_start)
        .into_iter()
        .filter(|c| c.values.iter().any(|&v| v != 0.0))
        .collect();
    let gamma_index = columns.len();
    columns.push(Column::new("y_lag1", lag_level));
    for i in 1..=k {
        let vals: Vec<f64> = (sample_start..t_len)
            .map(|t| y[t - i] - y[t - i - 1])
            .collect();
        columns.push(Column::new(format!("dlag{i}"), vals));
    }

    let x = DesignMatrix::from_columns(&columns)?;
    let fit = match solver {
        Solver::Svd => ols(&response, &x)?,
        Solver::Fast => crate::regression::ols_fast(&response, &x)?,
    };
    Ok(AdfStyleFit { fit, gamma_index })
}

impl OlsFit {
    pub(crate) fn ncols(&self) -> usize {
        self.names.len()
    }
}

/// Resolves a lag-selection strategy to a concrete order. `build_det`
/// produces the full-sample deterministic columns for a candidate order
/// (pulse windows grow with the order in the additive-outlier tests).
///
/// Criterion-based selection compares candidates on the common sample
/// implied by `max_lag`; general-to-specific re-fits each candidate on its
/// maximal sample and drops the longest lagged difference while it is
/// insignificant at the configured two-sided level.
pub(crate) fn choose_lags_with<F>(
    y: &[f64],
    selection: LagSelection,
    max_lag: usize,
    solver: Solver,
    build_det: F,
) -> Result<usize>
where
    F: Fn(usize) -> Vec<Column>,
{
    match selection {
        LagSelection::Fixed(k) => Ok(k),
        LagSelection::Aic | LagSelection::Sic | LagSelection::Hq => {
            let common_start = max_lag + 1;
            let mut best: Option<(usize, f64)> = None;
            let mut last_error = None;
            for k in 0..=max_lag {
                let fitted = match adf_style_fit_with(y, k, common_start, &build_det(k), solver) {
                    Ok(f) => f,
                    Err(e) => {
                        last_error = Some(e);
                        continue;
                    }
                };
                let ic = match selection {
                    LagSelection::Aic => fitted.fit.ic.aic,
                    LagSelection::Sic => fitted.fit.ic.sic,
                    LagSelection::Hq => fitted.fit.ic.hq,
                    _ => unreachable!(),
                };
                if best.is_none() || ic < best.unwrap().1 {
                    best = Some((k, ic));
                }
            }
            match best {
                Some((k, _)) => Ok(k),
                None => Err(last_error.expect("at least one candidate was attempted")),
            }
        }
        LagSelection::GeneralToSpecific(level) => {
            for k in (1..=max_lag).rev() {
                // A deep-lag sample can make a break dummy degenerate (all
                // ones after slicing); such depths are infeasible rather
                // than fatal, so keep pruning toward shorter lags.
                let Ok(fitted) = adf_style_fit_with(y, k, k + 1, &build_det(k), solver) else {
                    continue;
                };
                let t_last = fitted.fit.t_stats[fitted.fit.ncols() - 1];
                let dof = fitted.fit.nobs - fitted.fit.ncols();
                if t_last.abs() >= t_critical(dof, level) {
                    return Ok(k);
                }
            }
            Ok(0)
        }
    }
}

/// Lag selection for a fixed deterministic set.
pub(crate) fn choose_lags(
    y: &[f64],
    det_columns: &[Column],
    selection: LagSelection,
    max_lag: usize,
) -> Result<usize> {
    choose_lags_with(y, selection, max_lag, Solver::Svd, |_| {
        det_columns.to_vec()
    })
}

/// Builds the dummy report for the named columns of a fit.
pub(crate) fn dummy_report_for(fit: &OlsFit, names: &[&str]) -> Vec<DummyStat> {
    let dof = fit.nobs.saturating_sub(fit.ncols()).max(1);
    let crit = t_critical(dof, 0.95);
    names
        .iter()
        .filter_map(|name| {
            fit.position(name).map(|j| DummyStat {
                name: (*name).to_string(),
                coefficient: fit.coefficients[j],
                std_error: fit.standard_errors[j],
                t_stat: fit.t_stats[j],
                significant_95: fit.t_stats[j].abs() >= crit,
            })
        })
        .collect()
}

/// Deterministic columns (constant, trend) over the full sample length.
pub(crate) fn deterministic_columns(det: DeterministicSpec, len: usize) -> Vec<Column> {
    let mut cols = Vec::new();
    if det.has_constant() {
        cols.push(crate::series::constant_column(len));
    }
    if det.has_trend() {
        cols.push(crate::series::trend_column(len));
    }
    cols
}

/// Candidate 1-based break periods inside the trimmed interior.
pub fn trimmed_periods(len: usize, trim: f64) -> Result<Vec<usize>> {
    if !(0.0..0.5).contains(&trim) || trim <= 0.0 {
        return Err(Error::TrimTooLarge { trim });
    }
    let lo = ((trim * len as f64).ceil() as usize).max(2);
    let hi = (((1.0 - trim) * len as f64).floor() as usize).min(len - 1);
    if hi < lo {
        return Err(Error::TrimTooLarge { trim });
    }
    Ok((lo..=hi).collect())
}

#[cfg(test)]
pub(crate) mod testing {
    use crate::series::Series;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
        let a: f64 = rng.gen_range(1e-12..1.0);
        let b: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * a.ln()).sqrt() * b.cos()
    }

    pub fn random_walk(seed: u64, len: usize, drift: f64) -> Series {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(len);
        let mut level = 0.0;
        for _ in 0..len {
            level += drift + normal(&mut rng);
            values.push(level);
        }
        Series::new("rw", 1900, values).unwrap()
    }

    pub fn white_noise(seed: u64, len: usize) -> Series {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..len).map(|_| normal(&mut rng)).collect();
        Series::new("wn", 1900, values).unwrap()
    }

    pub fn ar1(seed: u64, len: usize, phi: f64) -> Series {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(len);
        let mut level = 0.0;
        for _ in 0..len {
            level = phi * level + normal(&mut rng);
            values.push(level);
        }
        Series::new("ar1", 1900, values).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn break_form_required_with_break_style() {
        let mut spec =
            UnitRootModelSpec::no_break(DeterministicSpec::Constant, LagSelection::Aic, 4);
        spec.break_style = BreakStyle::Io;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn trimmed_periods_interior() {
        let periods = trimmed_periods(46, 0.1).unwrap();
        assert_eq!(*periods.first().unwrap(), 5);
        assert_eq!(*periods.last().unwrap(), 41);
        assert!(trimmed_periods(10, 0.499).is_ok());
        assert!(trimmed_periods(46, 0.0).is_err());
    }
}
