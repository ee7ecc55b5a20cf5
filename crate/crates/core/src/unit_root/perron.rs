//! Known-break unit-root tests in the additive-outlier (two-stage) and
//! innovational-outlier (one-stage) forms.

use super::*;
use crate::critical_values::{lookup_quantiles, unit_root_spec_key, TestFamily};
use crate::error::{Error, Result};
use crate::regression::{ols, DesignMatrix};
use crate::series::{
    break_dummies, BreakDate, BreakKind, BreakSpec, Column, DummyStyle, Series,
};

/// Pulse column for `DTB_{t-j}`: one at 1-based period `T_b + 1 + j`.
fn shifted_pulse(len: usize, period: usize, j: usize, tag: &str) -> Column {
    let hit = period + j; // 0-based index of period T_b + 1 + j
    let values = (0..len)
        .map(|t| if t == hit { 1.0 } else { 0.0 })
        .collect();
    Column::new(format!("dtb{tag}_l{j}"), values)
}

/// Full-sample columns for the innovational-outlier regression: the
/// deterministic terms, the shift dummies, and the one-time pulse.
pub(crate) fn io_columns(
    s: &Series,
    det: crate::series::DeterministicSpec,
    kind: BreakKind,
    date: BreakDate,
) -> Result<Vec<Column>> {
    let len = s.len();
    let mut cols = deterministic_columns(det, len);
    let spec = BreakSpec::new(kind, vec![date])?;
    cols.extend(break_dummies(s.start_year(), len, &spec, DummyStyle::Shift)?);
    cols.extend(break_dummies(s.start_year(), len, &spec, DummyStyle::Pulse)?);
    Ok(cols)
}

pub(crate) struct IoFitResult {
    pub fitted: AdfStyleFit,
    pub lags: usize,
}

/// One-stage innovational-outlier fit with lag selection.
pub(crate) fn io_fit(
    s: &Series,
    det: crate::series::DeterministicSpec,
    kind: BreakKind,
    date: BreakDate,
    selection: LagSelection,
    max_lag: usize,
    solver: Solver,
) -> Result<IoFitResult> {
    let cols = io_columns(s, det, kind, date)?;
    let k = choose_lags_with(s.values(), selection, max_lag, solver, |_| cols.clone())?;
    let fitted = adf_style_fit_with(s.values(), k, k + 1, &cols, solver)?;
    Ok(IoFitResult { fitted, lags: k })
}

pub(crate) struct AoFitResult {
    pub fitted: AdfStyleFit,
    pub lags: usize,
    pub first_stage: crate::regression::OlsFit,
}

/// Two-stage additive-outlier fit: detrend on the deterministic terms and
/// shift dummies, then run the augmented regression on the residuals with a
/// window of pulse dummies spanning the lag order.
pub(crate) fn ao_fit(
    s: &Series,
    det: crate::series::DeterministicSpec,
    kind: BreakKind,
    dates: &[BreakDate],
    selection: LagSelection,
    max_lag: usize,
    solver: Solver,
) -> Result<AoFitResult> {
    let len = s.len();
    let spec = BreakSpec::new(kind, dates.to_vec())?;
    let mut stage1_cols = deterministic_columns(det, len);
    stage1_cols.extend(break_dummies(s.start_year(), len, &spec, DummyStyle::Shift)?);
    let x1 = DesignMatrix::from_columns(&stage1_cols)?;
    let first_stage = ols(s.values(), &x1)?;
    let ytilde = first_stage.residuals.clone();

    let periods: Vec<(usize, String)> = dates
        .iter()
        .map(|d| (d.period(s.start_year()), format!("_{}", d.year)))
        .collect();
    let build_pulses = |k: usize| -> Vec<Column> {
        let mut cols = Vec::new();
        for (period, tag) in &periods {
            for j in 0..=k {
                if period + j < len {
                    cols.push(shifted_pulse(len, *period, j, tag));
                }
            }
        }
        cols
    };

    let k = choose_lags_with(&ytilde, selection, max_lag, solver, build_pulses)?;
    let fitted = adf_style_fit_with(&ytilde, k, k + 1, &build_pulses(k), solver)?;
    Ok(AoFitResult {
        fitted,
        lags: k,
        first_stage,
    })
}

/// Perron-style unit-root test with a single known break date. The AO form
/// detrends first and tests the residuals; the IO form augments the dynamic
/// regression with the break dummies. Critical values depend on the break
/// fraction.
pub fn perron_known_break(
    s: &Series,
    spec: &UnitRootModelSpec,
    date: BreakDate,
) -> Result<UnitRootOutcome> {
    spec.validate()?;
    let kind = spec.break_kind.ok_or(Error::InvalidModelCombination {
        reason: "known-break test requires a break form".into(),
    })?;
    // The known-break innovational models have no trend-only case; only the
    // endogenous search estimates that form.
    if spec.break_style == BreakStyle::Io && kind == BreakKind::Trend {
        return Err(Error::InvalidModelCombination {
            reason: "the known-break innovational-outlier form has no trend-only break model"
                .into(),
        });
    }
    let len = s.len();
    if len < spec.max_lag + 10 {
        return Err(Error::SeriesTooShort {
            len,
            min: spec.max_lag + 10,
        });
    }
    let period = date.period(s.start_year());
    if period < 2 || period + 1 > len {
        return Err(Error::BreakOutOfRange { year: date.year });
    }

    let (family, fitted, lags, dummy_report) = match spec.break_style {
        BreakStyle::Io => {
            let res = io_fit(
                s,
                spec.deterministic,
                kind,
                date,
                spec.lag_selection,
                spec.max_lag,
                Solver::Svd,
            )?;
            let names: Vec<String> = res
                .fitted
                .fit
                .names
                .iter()
                .filter(|n| n.starts_with("du_") || n.starts_with("dt_") || n.starts_with("dtb_"))
                .cloned()
                .collect();
            let name_refs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
            let report = dummy_report_for(&res.fitted.fit, &name_refs);
            (TestFamily::PerronIo, res.fitted, res.lags, report)
        }
        BreakStyle::Ao => {
            let res = ao_fit(
                s,
                spec.deterministic,
                kind,
                &[date],
                spec.lag_selection,
                spec.max_lag,
                Solver::Svd,
            )?;
            let names: Vec<String> = res
                .first_stage
                .names
                .iter()
                .filter(|n| n.starts_with("du_") || n.starts_with("dt_"))
                .cloned()
                .collect();
            let name_refs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
            let report = dummy_report_for(&res.first_stage, &name_refs);
            (TestFamily::PerronAo, res.fitted, res.lags, report)
        }
        BreakStyle::None => {
            return Err(Error::InvalidModelCombination {
                reason: "known-break test requires an AO or IO break style".into(),
            })
        }
    };

    let statistic = fitted.fit.t_stats[fitted.gamma_index];
    let spec_key = unit_root_spec_key(spec.deterministic, Some(kind));
    let critical_values = lookup_quantiles(family, &spec_key, len, &[date.fraction]);
    let decision = decide_left_tail(statistic, &critical_values, DEFAULT_LEVEL);

    Ok(UnitRootOutcome {
        family,
        spec_label: format!("{};{};break={}", family.label(), spec.label(), date.year),
        statistic,
        alpha_minus_one: fitted.fit.coefficients[fitted.gamma_index],
        chosen_lags: lags,
        breaks: vec![date],
        critical_values,
        level: DEFAULT_LEVEL,
        decision,
        dummy_report,
        bandwidth: None,
        nobs: fitted.fit.nobs,
    })
}
