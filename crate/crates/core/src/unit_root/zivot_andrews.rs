//! Zivot-Andrews style endogenous single-break test: the innovational
//! outlier regression evaluated at every candidate date inside the trimmed
//! interior, keeping the date with the strongest evidence against the unit
//! root (the minimum t-ratio).

use super::perron::io_fit;
use super::*;
use crate::critical_values::{lookup_quantiles, unit_root_spec_key, TestFamily};
use crate::error::{Error, Result};
use crate::series::{BreakDate, Series};

/// Evaluates the endogenous-break regression at one fixed candidate date,
/// returning the unit-root t-ratio and the selected lag order. Useful for
/// inspecting the search grid and for re-evaluating a reported minimum.
pub fn zivot_andrews_at(
    s: &Series,
    spec: &UnitRootModelSpec,
    date: BreakDate,
) -> Result<(f64, usize)> {
    spec.validate()?;
    let kind = spec.break_kind.ok_or(Error::InvalidModelCombination {
        reason: "endogenous-break test requires a break form".into(),
    })?;
    let res = io_fit(
        s,
        spec.deterministic,
        kind,
        date,
        spec.lag_selection,
        spec.max_lag,
        Solver::Svd,
    )?;
    Ok((res.fitted.fit.t_stats[res.fitted.gamma_index], res.lags))
}

/// Endogenous-break unit-root test. The lag order is re-selected at every
/// candidate date with the spec's selection rule. Candidates whose dummy
/// columns are degenerate are skipped, and exact statistic ties resolve to
/// the earliest date.
pub fn zivot_andrews(
    s: &Series,
    spec: &UnitRootModelSpec,
    trim: f64,
) -> Result<UnitRootOutcome> {
    spec.validate()?;
    if spec.break_style != BreakStyle::Io {
        return Err(Error::InvalidModelCombination {
            reason: "the endogenous single-break search uses the innovational-outlier form".into(),
        });
    }
    let kind = spec.break_kind.ok_or(Error::InvalidModelCombination {
        reason: "endogenous-break test requires a break form".into(),
    })?;
    let len = s.len();
    if len < spec.max_lag + 10 {
        return Err(Error::SeriesTooShort {
            len,
            min: spec.max_lag + 10,
        });
    }
    if (trim * len as f64) < 2.0 {
        return Err(Error::TrimTooLarge { trim });
    }

    let mut best: Option<(f64, BreakDate, usize)> = None;
    for period in trimmed_periods(len, trim)? {
        let year = s.start_year() + period as i32 - 1;
        let Ok(date) = BreakDate::for_series(year, s) else {
            continue;
        };
        let candidate = io_fit(
            s,
            spec.deterministic,
            kind,
            date,
            spec.lag_selection,
            spec.max_lag,
            Solver::Fast,
        );
        let Ok(res) = candidate else {
            continue; // degenerate dummy columns at this date
        };
        let stat = res.fitted.fit.t_stats[res.fitted.gamma_index];
        if best.as_ref().is_none_or(|(b, _, _)| stat < *b) {
            best = Some((stat, date, res.lags));
        }
    }
    let (_, date, _) = best.ok_or(Error::TrimTooLarge { trim })?;

    // Reported numbers come from the canonical engine at the winning date.
    let res = io_fit(
        s,
        spec.deterministic,
        kind,
        date,
        spec.lag_selection,
        spec.max_lag,
        Solver::Svd,
    )?;
    let statistic = res.fitted.fit.t_stats[res.fitted.gamma_index];
    let names: Vec<String> = res
        .fitted
        .fit
        .names
        .iter()
        .filter(|n| n.starts_with("du_") || n.starts_with("dt_") || n.starts_with("dtb_"))
        .cloned()
        .collect();
    let name_refs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
    let dummy_report = dummy_report_for(&res.fitted.fit, &name_refs);

    let spec_key = unit_root_spec_key(spec.deterministic, Some(kind));
    let critical_values =
        lookup_quantiles(TestFamily::ZivotAndrews, &spec_key, len, &[date.fraction]);
    let decision = decide_left_tail(statistic, &critical_values, DEFAULT_LEVEL);

    Ok(UnitRootOutcome {
        family: TestFamily::ZivotAndrews,
        spec_label: format!("zivot_andrews;{};trim={}", spec.label(), trim),
        statistic,
        alpha_minus_one: res.fitted.fit.coefficients[res.fitted.gamma_index],
        chosen_lags: res.lags,
        breaks: vec![date],
        critical_values,
        level: DEFAULT_LEVEL,
        decision,
        dummy_report,
        bandwidth: None,
        nobs: res.fitted.fit.nobs,
    })
}
