//! Clemente-Montanes-Reyes double mean-shift unit-root test, in the
//! innovational (one-stage) and additive (two-stage) outlier forms. The
//! printed definition of the level dummy activates after the break, as in
//! the rest of the battery.

use super::perron::ao_fit;
use super::*;
use crate::critical_values::{lookup_quantiles, TestFamily};
use crate::error::{Error, Result};
use crate::series::{
    break_dummies, BreakDate, BreakKind, BreakSpec, Column, DeterministicSpec, DummyStyle, Series,
};

/// Transition form of the double mean shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClementeVariant {
    Io,
    Ao,
}

fn clemente_io_columns(s: &Series, first: BreakDate, second: BreakDate) -> Result<Vec<Column>> {
    let len = s.len();
    let mut cols = deterministic_columns(DeterministicSpec::Constant, len);
    let spec = BreakSpec::new(BreakKind::Intercept, vec![first, second])?;
    cols.extend(break_dummies(s.start_year(), len, &spec, DummyStyle::Pulse)?);
    cols.extend(break_dummies(s.start_year(), len, &spec, DummyStyle::Shift)?);
    Ok(cols)
}

fn clemente_io_fit(
    s: &Series,
    first: BreakDate,
    second: BreakDate,
    selection: LagSelection,
    max_lag: usize,
    solver: Solver,
) -> Result<(AdfStyleFit, usize)> {
    let cols = clemente_io_columns(s, first, second)?;
    let k = choose_lags_with(s.values(), selection, max_lag, solver, |_| cols.clone())?;
    let fitted = adf_style_fit_with(s.values(), k, k + 1, &cols, solver)?;
    Ok((fitted, k))
}

const MIN_SEPARATION: usize = 2;

/// Evaluates the double mean-shift regression at one fixed break pair,
/// returning the pseudo t-ratio and the selected lag order.
pub fn clemente_at(
    s: &Series,
    variant: ClementeVariant,
    first: BreakDate,
    second: BreakDate,
    max_lag: usize,
    selection: LagSelection,
) -> Result<(f64, usize)> {
    let (fitted, lags) = match variant {
        ClementeVariant::Io => clemente_io_fit(s, first, second, selection, max_lag, Solver::Svd)?,
        ClementeVariant::Ao => {
            let res = ao_fit(
                s,
                DeterministicSpec::Constant,
                BreakKind::Intercept,
                &[first, second],
                selection,
                max_lag,
                Solver::Svd,
            )?;
            (res.fitted, res.lags)
        }
    };
    Ok((fitted.fit.t_stats[fitted.gamma_index], lags))
}

/// Double mean-shift test: minimizes the pseudo t-ratio for rho = 1 over
/// all admissible break pairs inside the trimmed interior, re-selecting the
/// lag order (general-to-specific by default) at every pair.
pub fn clemente(
    s: &Series,
    variant: ClementeVariant,
    trim: f64,
    max_lag: usize,
    selection: LagSelection,
) -> Result<UnitRootOutcome> {
    let len = s.len();
    if len < max_lag + 12 {
        return Err(Error::SeriesTooShort {
            len,
            min: max_lag + 12,
        });
    }
    if (trim * len as f64) < 2.0 {
        return Err(Error::TrimTooLarge { trim });
    }
    let periods = trimmed_periods(len, trim)?;

    let evaluate = |d1: BreakDate, d2: BreakDate, solver: Solver| -> Result<(AdfStyleFit, usize)> {
        match variant {
            ClementeVariant::Io => clemente_io_fit(s, d1, d2, selection, max_lag, solver),
            ClementeVariant::Ao => {
                let res = ao_fit(
                    s,
                    DeterministicSpec::Constant,
                    BreakKind::Intercept,
                    &[d1, d2],
                    selection,
                    max_lag,
                    solver,
                )?;
                Ok((res.fitted, res.lags))
            }
        }
    };

    let mut best: Option<(f64, BreakDate, BreakDate)> = None;
    for (i, &p1) in periods.iter().enumerate() {
        let Ok(d1) = BreakDate::for_series(s.start_year() + p1 as i32 - 1, s) else {
            continue;
        };
        for &p2 in &periods[i + 1..] {
            if p2 < p1 + MIN_SEPARATION {
                continue;
            }
            let Ok(d2) = BreakDate::for_series(s.start_year() + p2 as i32 - 1, s) else {
                continue;
            };
            let Ok((fitted, _)) = evaluate(d1, d2, Solver::Fast) else {
                continue;
            };
            let stat = fitted.fit.t_stats[fitted.gamma_index];
            if best.as_ref().is_none_or(|(b, _, _)| stat < *b) {
                best = Some((stat, d1, d2));
            }
        }
    }
    let (_, d1, d2) = best.ok_or(Error::TrimTooLarge { trim })?;

    let (fitted, lags) = evaluate(d1, d2, Solver::Svd)?;
    let statistic = fitted.fit.t_stats[fitted.gamma_index];

    let dummy_report = match variant {
        ClementeVariant::Io => {
            let names = [format!("du_{}", d1.year), format!("du_{}", d2.year)];
            let refs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
            dummy_report_for(&fitted.fit, &refs)
        }
        ClementeVariant::Ao => {
            // Mean-shift magnitudes come from the first-stage detrending.
            let res = ao_fit(
                s,
                DeterministicSpec::Constant,
                BreakKind::Intercept,
                &[d1, d2],
                selection,
                max_lag,
                Solver::Svd,
            )?;
            let names = [format!("du_{}", d1.year), format!("du_{}", d2.year)];
            let refs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
            dummy_report_for(&res.first_stage, &refs)
        }
    };

    let family = match variant {
        ClementeVariant::Io => TestFamily::ClementeIo,
        ClementeVariant::Ao => TestFamily::ClementeAo,
    };
    let critical_values = lookup_quantiles(
        family,
        "det=constant;break=intercept",
        len,
        &[d1.fraction, d2.fraction],
    );
    let decision = decide_left_tail(statistic, &critical_values, DEFAULT_LEVEL);

    Ok(UnitRootOutcome {
        family,
        spec_label: format!("{};trim={trim};lags={}", family.label(), selection.label()),
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
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rayon::prelude::*;

    #[test]
    fn argmin_property_over_full_grid() {
        let s = random_walk(5, 50, 0.0);
        let out = clemente(&s, ClementeVariant::Io, 0.1, 0, LagSelection::Fixed(0)).unwrap();
        let periods = trimmed_periods(s.len(), 0.1).unwrap();
        for (i, &p1) in periods.iter().enumerate() {
            for &p2 in &periods[i + 1..] {
                if p2 < p1 + MIN_SEPARATION {
                    continue;
                }
                let d1 = BreakDate::for_series(s.start_year() + p1 as i32 - 1, &s).unwrap();
                let d2 = BreakDate::for_series(s.start_year() + p2 as i32 - 1, &s).unwrap();
                let Ok((fitted, _)) =
                    clemente_io_fit(&s, d1, d2, LagSelection::Fixed(0), 0, Solver::Svd)
                else {
                    continue;
                };
                assert!(
                    out.statistic <= fitted.fit.t_stats[fitted.gamma_index] + 1e-12,
                    "pair ({}, {}) beats reported minimum",
                    d1.year,
                    d2.year
                );
            }
        }
    }

    #[test]
    fn detects_double_mean_shift_power() {
        // Stationary noise with two level shifts: reject in at least 85% of
        // replications at the published 95% critical value.
        let rejections: usize = (0..200u64)
            .into_par_iter()
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed + 77_000);
                let values: Vec<f64> = (0..300)
                    .map(|t| {
                        let shift = if t >= 200 {
                            5.0
                        } else if t >= 100 {
                            3.0
                        } else {
                            0.0
                        };
                        shift + normal(&mut rng)
                    })
                    .collect();
                let s = Series::new("dm", 1600, values).unwrap();
                let out = clemente(
                    &s,
                    ClementeVariant::Io,
                    0.1,
                    2,
                    LagSelection::GeneralToSpecific(0.90),
                )
                .unwrap();
                usize::from(out.decision == Decision::RejectUnitRoot)
            })
            .sum();
        assert!(rejections >= 170, "rejected only {rejections}/200");
    }

    #[test]
    fn ao_variant_reports_first_stage_shifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let values: Vec<f64> = (0..120)
            .map(|t| {
                let shift = if t >= 80 {
                    -2.0
                } else if t >= 40 {
                    2.5
                } else {
                    0.0
                };
                shift + 0.5 * normal(&mut rng)
            })
            .collect();
        let s = Series::new("dm", 1700, values).unwrap();
        let out = clemente(&s, ClementeVariant::Ao, 0.15, 1, LagSelection::Fixed(1)).unwrap();
        assert_eq!(out.dummy_report.len(), 2);
        assert!(out.dummy_report[0].coefficient > 1.0);
        assert!(out.dummy_report[1].coefficient < -1.0);
        assert_eq!(out.breaks.len(), 2);
    }

    #[test]
    fn trim_validation() {
        let s = random_walk(9, 40, 0.0);
        assert!(matches!(
            clemente(&s, ClementeVariant::Io, 0.01, 0, LagSelection::Fixed(0)),
            Err(Error::TrimTooLarge { .. })
        ));
    }
}
