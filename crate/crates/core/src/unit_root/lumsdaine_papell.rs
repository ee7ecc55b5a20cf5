//! Lumsdaine-Papell two-break unit-root test: a trending innovational
//! regression with level and slope dummies at two dates, minimized over all
//! admissible break pairs.

use super::*;
use crate::critical_values::{lookup_quantiles, TestFamily};
use crate::error::{Error, Result};
use crate::series::{
    break_dummies, BreakDate, BreakKind, BreakSpec, Column, DeterministicSpec, DummyStyle, Series,
};

fn lp_columns(s: &Series, first: BreakDate, second: BreakDate) -> Result<Vec<Column>> {
    let len = s.len();
    let mut cols = deterministic_columns(DeterministicSpec::ConstantAndTrend, len);
    let spec = BreakSpec::new(BreakKind::Both, vec![first, second])?;
    cols.extend(break_dummies(s.start_year(), len, &spec, DummyStyle::Shift)?);
    Ok(cols)
}

fn lp_fit(
    s: &Series,
    first: BreakDate,
    second: BreakDate,
    selection: LagSelection,
    max_lag: usize,
    solver: Solver,
) -> Result<(AdfStyleFit, usize)> {
    let cols = lp_columns(s, first, second)?;
    let k = choose_lags_with(s.values(), selection, max_lag, solver, |_| cols.clone())?;
    let fitted = adf_style_fit_with(s.values(), k, k + 1, &cols, solver)?;
    Ok((fitted, k))
}

/// Minimum separation between the two break periods.
const MIN_SEPARATION: usize = 2;

/// Evaluates the two-break regression at one fixed break pair, returning
/// the t-ratio on the lagged level and the selected lag order.
pub fn lumsdaine_papell_at(
    s: &Series,
    first: BreakDate,
    second: BreakDate,
    max_lag: usize,
    selection: LagSelection,
) -> Result<(f64, usize)> {
    let (fitted, lags) = lp_fit(s, first, second, selection, max_lag, Solver::Svd)?;
    Ok((fitted.fit.t_stats[fitted.gamma_index], lags))
}

/// Two-break test: grid search over all admissible (TB1, TB2) pairs in the
/// trimmed interior with TB2 >= TB1 + 2, minimizing the t-ratio on the
/// lagged level. Lags are re-selected for every pair (general-to-specific
/// by default); ties resolve to the earliest pair.
pub fn lumsdaine_papell(
    s: &Series,
    trim: f64,
    max_lag: usize,
    selection: LagSelection,
) -> Result<UnitRootOutcome> {
    let len = s.len();
    if len < max_lag + 14 {
        return Err(Error::SeriesTooShort {
            len,
            min: max_lag + 14,
        });
    }
    let periods = trimmed_periods(len, trim)?;

    let mut best: Option<(f64, BreakDate, BreakDate)> = None;
    for (i, &p1) in periods.iter().enumerate() {
        let year1 = s.start_year() + p1 as i32 - 1;
        let Ok(d1) = BreakDate::for_series(year1, s) else {
            continue;
        };
        for &p2 in &periods[i + 1..] {
            if p2 < p1 + MIN_SEPARATION {
                continue;
            }
            let year2 = s.start_year() + p2 as i32 - 1;
            let Ok(d2) = BreakDate::for_series(year2, s) else {
                continue;
            };
            let Ok((fitted, _)) = lp_fit(s, d1, d2, selection, max_lag, Solver::Fast) else {
                continue;
            };
            let stat = fitted.fit.t_stats[fitted.gamma_index];
            if best.as_ref().is_none_or(|(b, _, _)| stat < *b) {
                best = Some((stat, d1, d2));
            }
        }
    }
    let (_, d1, d2) = best.ok_or(Error::TrimTooLarge { trim })?;

    let (fitted, lags) = lp_fit(s, d1, d2, selection, max_lag, Solver::Svd)?;
    let statistic = fitted.fit.t_stats[fitted.gamma_index];
    let names = [
        format!("du_{}", d1.year),
        format!("dt_{}", d1.year),
        format!("du_{}", d2.year),
        format!("dt_{}", d2.year),
    ];
    let name_refs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
    let dummy_report = dummy_report_for(&fitted.fit, &name_refs);

    let critical_values = lookup_quantiles(
        TestFamily::LumsdainePapell,
        "det=constant_and_trend;break=both",
        len,
        &[d1.fraction, d2.fraction],
    );
    let decision = decide_left_tail(statistic, &critical_values, DEFAULT_LEVEL);

    Ok(UnitRootOutcome {
        family: TestFamily::LumsdainePapell,
        spec_label: format!("lumsdaine_papell;trim={trim};lags={}", selection.label()),
        statistic,
        alpha_minus_one: fitted.fit.coefficients[fitted.gamma_index],
        chosen_lags: lags,
        breaks: vec![d1, d2],
        critical_values,
        level: DEFAULT_LEVEL,
        decision,
        dummy_report,
        bandwidth: None,
        nobs: fitted.fit.nobs,
    })
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    #[test]
    fn argmin_property_over_full_grid() {
        let s = random_walk(3, 60, 0.1);
        let out = lumsdaine_papell(&s, 0.1, 0, LagSelection::Fixed(0)).unwrap();
        let periods = trimmed_periods(s.len(), 0.1).unwrap();
        for (i, &p1) in periods.iter().enumerate() {
            for &p2 in &periods[i + 1..] {
                if p2 < p1 + MIN_SEPARATION {
                    continue;
                }
                let d1 =
                    BreakDate::for_series(s.start_year() + p1 as i32 - 1, &s).unwrap();
                let d2 =
                    BreakDate::for_series(s.start_year() + p2 as i32 - 1, &s).unwrap();
                let Ok((fitted, _)) = lp_fit(&s, d1, d2, LagSelection::Fixed(0), 0, Solver::Svd)
                else {
                    continue;
                };
                let stat = fitted.fit.t_stats[fitted.gamma_index];
                assert!(
                    out.statistic <= stat + 1e-12,
                    "pair ({}, {}) beats reported minimum",
                    d1.year,
                    d2.year
                );
            }
        }
    }

    #[test]
    fn re_evaluation_reproduces_statistic() {
        let s = random_walk(8, 70, 0.0);
        let out = lumsdaine_papell(&s, 0.1, 2, LagSelection::GeneralToSpecific(0.90)).unwrap();
        let (fitted, lags) = lp_fit(
            &s,
            out.breaks[0],
            out.breaks[1],
            LagSelection::GeneralToSpecific(0.90),
            2,
            Solver::Svd,
        )
        .unwrap();
        assert!((out.statistic - fitted.fit.t_stats[fitted.gamma_index]).abs() < 1e-9);
        assert_eq!(out.chosen_lags, lags);
    }

    #[test]
    fn breaks_ordered_and_separated() {
        let s = random_walk(21, 80, 0.05);
        let out = lumsdaine_papell(&s, 0.1, 1, LagSelection::GeneralToSpecific(0.90)).unwrap();
        assert!(out.breaks[1].year >= out.breaks[0].year + MIN_SEPARATION as i32);
        assert_eq!(out.dummy_report.len(), 4);
    }

    #[test]
    fn short_series_rejected() {
        let s = random_walk(2, 12, 0.0);
        assert!(matches!(
            lumsdaine_papell(&s, 0.1, 4, LagSelection::Fixed(0)),
            Err(Error::SeriesTooShort { .. })
        ));
    }
}
