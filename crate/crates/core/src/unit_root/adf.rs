//! Augmented Dickey-Fuller test.

use super::*;
use crate::critical_values::{lookup_quantiles, unit_root_spec_key, TestFamily};
use crate::error::{Error, Result};
use crate::series::{DeterministicSpec, Series};

/// Augmented Dickey-Fuller regression of the first difference on the lagged
/// level, deterministic terms, and `k` lagged differences; `k` is chosen by
/// the requested criterion over a common sample, then the final equation is
/// re-fit on the maximal sample.
pub fn adf(
    s: &Series,
    det: DeterministicSpec,
    max_lag: usize,
    selection: LagSelection,
) -> Result<UnitRootOutcome> {
    let len = s.len();
    if len < max_lag + 10 {
        return Err(Error::SeriesTooShort {
            len,
            min: max_lag + 10,
        });
    }
    let det_cols = deterministic_columns(det, len);
    let k = choose_lags(s.values(), &det_cols, selection, max_lag)?;
    let fitted = adf_style_fit(s.values(), k, k + 1, &det_cols)?;

    let statistic = fitted.fit.t_stats[fitted.gamma_index];
    let alpha_minus_one = fitted.fit.coefficients[fitted.gamma_index];
    let spec_key = unit_root_spec_key(det, None);
    let critical_values = lookup_quantiles(TestFamily::Adf, &spec_key, len, &[]);
    let decision = decide_left_tail(statistic, &critical_values, DEFAULT_LEVEL);
    let dummy_names: Vec<&str> = det_cols.iter().map(|c| c.name.as_str()).collect();
    let dummy_report = dummy_report_for(&fitted.fit, &dummy_names);

    Ok(UnitRootOutcome {
        family: TestFamily::Adf,
        spec_label: format!("adf;{};lags={}", spec_key, selection.label()),
        statistic,
        alpha_minus_one,
        chosen_lags: k,
        breaks: vec![],
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
    fn random_walk_keeps_unit_root() {
        // Size oracle: a pure random walk should be accepted almost always.
        let mut accepted = 0;
        for seed in 0..200u64 {
            let s = random_walk(seed, 500, 0.0);
            let out = adf(&s, DeterministicSpec::Constant, 4, LagSelection::Aic).unwrap();
            if out.decision == Decision::AcceptUnitRoot {
                accepted += 1;
            }
        }
        assert!(accepted >= 180, "accepted only {accepted}/200");
    }

    #[test]
    fn white_noise_rejects_unit_root() {
        let mut rejected = 0;
        for seed in 0..200u64 {
            let s = white_noise(seed + 1000, 500);
            let out = adf(&s, DeterministicSpec::Constant, 4, LagSelection::Aic).unwrap();
            if out.decision == Decision::RejectUnitRoot {
                rejected += 1;
            }
        }
        assert!(rejected >= 198, "rejected only {rejected}/200");
    }

    #[test]
    fn fixed_lag_matches_selected_structure() {
        let s = random_walk(7, 120, 0.0);
        let out = adf(&s, DeterministicSpec::Constant, 0, LagSelection::Fixed(0)).unwrap();
        assert_eq!(out.chosen_lags, 0);
        assert_eq!(out.nobs, 119);
        assert!(out.critical_values.p95.is_some());
    }

    #[test]
    fn location_invariance_with_constant() {
        let s = random_walk(11, 200, 0.0);
        let shifted = Series::new(
            "shifted",
            s.start_year(),
            s.values().iter().map(|v| v + 250.0).collect(),
        )
        .unwrap();
        let a = adf(&s, DeterministicSpec::Constant, 3, LagSelection::Aic).unwrap();
        let b = adf(&shifted, DeterministicSpec::Constant, 3, LagSelection::Aic).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-9);
        assert_eq!(a.chosen_lags, b.chosen_lags);
    }

    #[test]
    fn decisions_monotone_in_level() {
        for seed in 0..40u64 {
            let s = ar1(seed, 150, 0.7);
            let out = adf(&s, DeterministicSpec::Constant, 2, LagSelection::Sic).unwrap();
            let r95 = out.decide_at(0.95) == Decision::RejectUnitRoot;
            let r90 = out.decide_at(0.90) == Decision::RejectUnitRoot;
            if r95 {
                assert!(r90, "rejected at 95% but not at 90% (seed {seed})");
            }
        }
    }

    #[test]
    fn too_short_sample_rejected() {
        let s = white_noise(3, 12);
        assert!(matches!(
            adf(&s, DeterministicSpec::Constant, 4, LagSelection::Aic),
            Err(Error::SeriesTooShort { .. })
        ));
    }
}
