//! Phillips-Perron test with the Bartlett-kernel Z_t correction.

use super::*;
use crate::critical_values::{lookup_quantiles, unit_root_spec_key, TestFamily};
use crate::error::{Error, Result};
use crate::regression::{newey_west_auto_bandwidth, newey_west_lrv};
use crate::series::{DeterministicSpec, Series};

/// Phillips-Perron Z_t test: the ADF regression with no lagged differences,
/// with the t-ratio adjusted nonparametrically for serial correlation via
/// the Bartlett long-run variance of the residuals. When `bandwidth` is
/// absent the Newey-West automatic (data-based) bandwidth is used.
pub fn phillips_perron(
    s: &Series,
    det: DeterministicSpec,
    bandwidth: Option<usize>,
) -> Result<UnitRootOutcome> {
    let len = s.len();
    if len < 10 {
        return Err(Error::SeriesTooShort { len, min: 10 });
    }
    let det_cols = deterministic_columns(det, len);
    let fitted = adf_style_fit(s.values(), 0, 1, &det_cols)?;
    let fit = &fitted.fit;
    let n = fit.nobs as f64;

    let residuals = &fit.residuals;
    let gamma0 = residuals.iter().map(|e| e * e).sum::<f64>() / n;
    let m = bandwidth.unwrap_or_else(|| newey_west_auto_bandwidth(residuals));
    let lrv = newey_west_lrv(residuals, Some(m))?;
    let lambda2 = lrv.value.max(1e-300);

    let t_ratio = fit.t_stats[fitted.gamma_index];
    let se_gamma = fit.standard_errors[fitted.gamma_index];
    let s_reg = fit.sigma2.sqrt();
    let statistic = (gamma0 / lambda2).sqrt() * t_ratio
        - (lambda2 - gamma0) * n * se_gamma / (2.0 * lambda2.sqrt() * s_reg);

    let spec_key = unit_root_spec_key(det, None);
    let critical_values = lookup_quantiles(TestFamily::Pp, &spec_key, len, &[]);
    let decision = decide_left_tail(statistic, &critical_values, DEFAULT_LEVEL);
    let dummy_names: Vec<&str> = det_cols.iter().map(|c| c.name.as_str()).collect();
    let dummy_report = dummy_report_for(fit, &dummy_names);

    Ok(UnitRootOutcome {
        family: TestFamily::Pp,
        spec_label: format!("pp;{spec_key};bartlett"),
        statistic,
        alpha_minus_one: fit.coefficients[fitted.gamma_index],
        chosen_lags: 0,
        breaks: vec![],
        critical_values,
        level: DEFAULT_LEVEL,
        decision,
        dummy_report,
        bandwidth: Some(m),
        nobs: fit.nobs,
    })
}
