//! Dynamic OLS estimation of a long-run cointegrating relation: a levels
//! regression augmented with leads and lags of the differenced regressors,
//! with standard errors rescaled by the Bartlett/Newey-West long-run
//! variance of the residuals.

use crate::error::{Error, Result};
use crate::regression::{
    fixed_newey_west_bandwidth, jarque_bera, newey_west_lrv, ols, t_critical, DesignMatrix,
    JarqueBera, LongRunVariance, OlsFit,
};
use crate::series::{difference, BreakDate, Column, Series};

/// One structural break entering the long-run equation.
#[derive(Debug, Clone, Copy)]
pub struct DolsBreak {
    pub date: BreakDate,
    pub intercept_dummy: bool,
    pub trend_interaction: bool,
}

/// Shape of the trend-break interaction regressor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendBreakForm {
    /// Ramp (t - T_b) after the break; equals the DT dummy.
    Ramp,
    /// Product t * 1[t > T_b]; differs from the ramp by a reparametrization
    /// of the level dummy's coefficient.
    Product,
}

/// Specification of a dynamic OLS fit.
#[derive(Debug, Clone)]
pub struct DolsSpec {
    pub response: Series,
    pub regressors: Vec<Series>,
    pub constant: bool,
    pub trend: bool,
    pub breaks: Vec<DolsBreak>,
    /// Leads of the differenced regressors.
    pub leads: usize,
    /// Lags of the differenced regressors (the contemporaneous difference
    /// is included whenever leads + lags > 0).
    pub lags: usize,
    pub trend_break_form: TrendBreakForm,
    /// Bartlett bandwidth for the long-run variance; the fixed Newey-West
    /// rule when absent.
    pub lrv_bandwidth: Option<usize>,
    /// Skip the HAC rescaling (forces omega-hat to the residual variance);
    /// classical and HAC standard errors then coincide.
    pub force_classical_errors: bool,
}

impl DolsSpec {
    pub fn new(response: Series, regressors: Vec<Series>) -> Self {
        Self {
            response,
            regressors,
            constant: true,
            trend: false,
            breaks: vec![],
            leads: 0,
            lags: 0,
            trend_break_form: TrendBreakForm::Ramp,
            lrv_bandwidth: None,
            force_classical_errors: false,
        }
    }
}

/// A coefficient with classical and HAC-rescaled uncertainty.
#[derive(Debug, Clone)]
pub struct DolsCoefficient {
    pub name: String,
    pub estimate: f64,
    pub classical_se: f64,
    pub hac_se: f64,
    /// t-ratio on the HAC standard error.
    pub t_stat: f64,
}

/// A fitted dynamic OLS long-run relation.
#[derive(Debug, Clone)]
pub struct DolsFit {
    /// Level coefficients of the regressors (the long-run elasticities in a
    /// log-log model).
    pub long_run: Vec<DolsCoefficient>,
    /// Constant, trend, and break terms.
    pub deterministic: Vec<DolsCoefficient>,
    /// Lead/lag difference terms; estimated only to absorb endogeneity and
    /// not interpretable.
    pub nuisance: Vec<DolsCoefficient>,
    pub r2_adjusted: f64,
    pub regression_se: f64,
    pub sigma2: f64,
    pub long_run_variance: LongRunVariance,
    pub jarque_bera: JarqueBera,
    pub residuals: Vec<f64>,
    pub nobs: usize,
    pub start_year: i32,
}

impl DolsFit {
    pub fn coefficient(&self, name: &str) -> Option<&DolsCoefficient> {
        self.long_run
            .iter()
            .chain(&self.deterministic)
            .chain(&self.nuisance)
            .find(|c| c.name == name)
    }

    fn params(&self) -> usize {
        self.long_run.len() + self.deterministic.len() + self.nuisance.len()
    }
}

fn check_alignment(spec: &DolsSpec) -> Result<(i32, usize)> {
    let start = spec.response.start_year();
    let len = spec.response.len();
    for s in &spec.regressors {
        if s.start_year() != start || s.len() != len {
            return Err(Error::DimensionMismatch {
                left: len,
                right: s.len(),
            });
        }
    }
    Ok((start, len))
}

/// Builds the design and fits the long-run equation.
///
/// The estimation sample drops `lags + 1` observations at the start and
/// `leads` at the end; deterministic terms keep their full-sample dating
/// (the trend is numbered 1..=T over the whole span).
pub fn dols_fit(spec: &DolsSpec) -> Result<DolsFit> {
    let (start_year, len) = check_alignment(spec)?;
    let sample_start = spec.lags + 1;
    let sample_end = len - spec.leads; // exclusive
    if sample_end <= sample_start {
        return Err(Error::SampleTooSmall { nobs: 0, params: 0 });
    }
    let rows = sample_end - sample_start;

    let mut columns: Vec<Column> = Vec::new();
    let mut deterministic_names: Vec<String> = Vec::new();
    let mut long_run_names: Vec<String> = Vec::new();

    if spec.constant {
        columns.push(Column::new("const", vec![1.0; rows]));
        deterministic_names.push("const".into());
    }
    if spec.trend {
        columns.push(Column::new(
            "trend",
            (sample_start..sample_end).map(|t| (t + 1) as f64).collect(),
        ));
        deterministic_names.push("trend".into());
    }
    for brk in &spec.breaks {
        let period = brk.date.period(start_year);
        if period < 2 || period + 1 > len {
            return Err(Error::BreakOutOfRange {
                year: brk.date.year,
            });
        }
        if brk.intercept_dummy {
            let name = format!("du_{}", brk.date.year);
            let values = (sample_start..sample_end)
                .map(|t| if t + 1 > period { 1.0 } else { 0.0 })
                .collect();
            columns.push(Column::new(name.clone(), values));
            deterministic_names.push(name);
        }
        if brk.trend_interaction {
            let name = format!("dt_{}", brk.date.year);
            let values = (sample_start..sample_end)
                .map(|t| {
                    if t + 1 > period {
                        match spec.trend_break_form {
                            TrendBreakForm::Ramp => (t + 1 - period) as f64,
                            TrendBreakForm::Product => (t + 1) as f64,
                        }
                    } else {
                        0.0
                    }
                })
                .collect();
            columns.push(Column::new(name.clone(), values));
            deterministic_names.push(name);
        }
    }

    for s in &spec.regressors {
        let name = s.name().to_string();
        columns.push(Column::new(
            name.clone(),
            s.values()[sample_start..sample_end].to_vec(),
        ));
        long_run_names.push(name);
    }

    // Lead/lag difference block: offsets -leads..=lags of the differenced
    // regressors, skipped entirely in the static case.
    if spec.leads + spec.lags > 0 {
        for s in &spec.regressors {
            let diffed = difference(s, 1)?; // dated start_year + 1
            let dv = diffed.values();
            for offset in -(spec.leads as i64)..=(spec.lags as i64) {
                let name = match offset.signum() {
                    0 => format!("d_{}", s.name()),
                    1 => format!("d_{}_lag{}", s.name(), offset),
                    _ => format!("d_{}_lead{}", s.name(), -offset),
                };
                let values: Vec<f64> = (sample_start..sample_end)
                    .map(|t| dv[(t as i64 - 1 - offset) as usize])
                    .collect();
                columns.push(Column::new(name, values));
            }
        }
    }

    let x = DesignMatrix::from_columns(&columns)?;
    if rows <= x.ncols() {
        return Err(Error::SampleTooSmall {
            nobs: rows,
            params: x.ncols(),
        });
    }
    let y = &spec.response.values()[sample_start..sample_end];
    let fit = ols(y, &x)?;

    let omega = if spec.force_classical_errors {
        LongRunVariance {
            value: fit.sigma2,
            bandwidth: 0,
            kernel: crate::regression::Kernel::Bartlett,
        }
    } else {
        let bw = spec
            .lrv_bandwidth
            .unwrap_or_else(|| fixed_newey_west_bandwidth(rows));
        newey_west_lrv(&fit.residuals, Some(bw))?
    };
    let rescale = (omega.value / fit.sigma2).sqrt();

    let wrap = |fit: &OlsFit, j: usize| -> DolsCoefficient {
        let hac_se = fit.standard_errors[j] * rescale;
        DolsCoefficient {
            name: fit.names[j].clone(),
            estimate: fit.coefficients[j],
            classical_se: fit.standard_errors[j],
            hac_se,
            t_stat: fit.coefficients[j] / hac_se,
        }
    };

    let mut long_run = Vec::new();
    let mut deterministic = Vec::new();
    let mut nuisance = Vec::new();
    for j in 0..fit.names.len() {
        let coefficient = wrap(&fit, j);
        if long_run_names.contains(&fit.names[j]) {
            long_run.push(coefficient);
        } else if deterministic_names.contains(&fit.names[j]) {
            deterministic.push(coefficient);
        } else {
            nuisance.push(coefficient);
        }
    }

    let jb = jarque_bera(&fit.residuals)?;
    Ok(DolsFit {
        long_run,
        deterministic,
        nuisance,
        r2_adjusted: fit.r2_adjusted,
        regression_se: fit.sigma2.sqrt(),
        sigma2: fit.sigma2,
        long_run_variance: omega,
        jarque_bera: jb,
        residuals: fit.residuals,
        nobs: rows,
        start_year: start_year + sample_start as i32,
    })
}

/// Qualitative size of a long-run elasticity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElasticityClass {
    Elastic,
    Inelastic,
    Unitary,
    /// Insignificant at the requested level: no relationship.
    None,
}

impl ElasticityClass {
    pub fn label(self) -> &'static str {
        match self {
            ElasticityClass::Elastic => "elastic",
            ElasticityClass::Inelastic => "inelastic",
            ElasticityClass::Unitary => "unitary",
            ElasticityClass::None => "none",
        }
    }
}

/// A labeled long-run elasticity with its significance verdict.
#[derive(Debug, Clone)]
pub struct Elasticity {
    pub label: String,
    pub regressor: String,
    pub coefficient: f64,
    pub hac_se: f64,
    pub significant: bool,
    /// Negative long-run response.
    pub inverse: bool,
    pub class: ElasticityClass,
}

/// Canonical demand-driver labels for the first three regressors.
const DRIVER_LABELS: [&str; 3] = ["income", "price", "industrial-output"];

/// Maps each long-run coefficient to a labeled elasticity. A coefficient is
/// `unitary` when a t-test cannot distinguish its magnitude from one at the
/// given level, otherwise `elastic` or `inelastic` by |coefficient| vs 1;
/// insignificant coefficients are classified as no relationship.
pub fn elasticity_report(fit: &DolsFit, level: f64) -> Vec<Elasticity> {
    let dof = fit.nobs.saturating_sub(fit.params()).max(1);
    let crit = t_critical(dof, level);
    fit.long_run
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let significant = c.t_stat.abs() >= crit;
            let class = if !significant {
                ElasticityClass::None
            } else if (c.estimate.abs() - 1.0).abs() <= crit * c.hac_se {
                ElasticityClass::Unitary
            } else if c.estimate.abs() > 1.0 {
                ElasticityClass::Elastic
            } else {
                ElasticityClass::Inelastic
            };
            Elasticity {
                label: DRIVER_LABELS
                    .get(i)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("driver{}", i + 1)),
                regressor: c.name.clone(),
                coefficient: c.estimate,
                hac_se: c.hac_se,
                significant,
                inverse: c.estimate < 0.0,
                class,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::{ols, DesignMatrix};
    use crate::series::constant_column;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rayon::prelude::*;

    fn normal(rng: &mut ChaCha8Rng) -> f64 {
        let a: f64 = rng.gen_range(1e-12..1.0);
        let b: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * a.ln()).sqrt() * b.cos()
    }

    /// Cointegrated pair with endogenous feedback: the equilibrium error is
    /// correlated with current and lagged changes of the regressor.
    fn endogenous_pair(seed: u64, t: usize) -> (Series, Series) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = vec![0.0; t];
        let mut v = vec![0.0; t];
        for i in 1..t {
            v[i] = normal(&mut rng);
            x[i] = x[i - 1] + v[i];
        }
        let mut y = vec![0.0; t];
        for i in 0..t {
            let u = 0.6 * v[i] + 0.4 * if i > 0 { v[i - 1] } else { 0.0 } + 0.5 * normal(&mut rng);
            y[i] = 2.0 * x[i] + u;
        }
        (
            Series::new("y", 1900, y).unwrap(),
            Series::new("x", 1900, x).unwrap(),
        )
    }

    #[test]
    fn static_case_reduces_to_plain_ols() {
        let (y, x) = endogenous_pair(5, 120);
        let mut spec = DolsSpec::new(y.clone(), vec![x.clone()]);
        spec.force_classical_errors = true;
        let fit = dols_fit(&spec).unwrap();

        let cols = vec![
            constant_column(119),
            Column::new("x", x.values()[1..].to_vec()),
        ];
        let design = DesignMatrix::from_columns(&cols).unwrap();
        let reference = ols(&y.values()[1..], &design).unwrap();
        let beta_x = fit.long_run[0].estimate;
        assert!((beta_x - reference.coefficients[1]).abs() < 1e-10);
        let beta_0 = fit.deterministic[0].estimate;
        assert!((beta_0 - reference.coefficients[0]).abs() < 1e-10);
        assert!((fit.long_run[0].hac_se - fit.long_run[0].classical_se).abs() < 1e-14);
        assert!(fit.nuisance.is_empty());
    }

    #[test]
    fn hac_rescaling_identity_holds_exactly() {
        let (y, x) = endogenous_pair(9, 150);
        let mut spec = DolsSpec::new(y, vec![x]);
        spec.lags = 1;
        let fit = dols_fit(&spec).unwrap();
        let ratio = (fit.long_run_variance.value / fit.sigma2).sqrt();
        for c in fit.long_run.iter().chain(&fit.deterministic).chain(&fit.nuisance) {
            assert!(
                (c.hac_se - c.classical_se * ratio).abs() <= 1e-12 * c.hac_se.abs().max(1e-12),
                "rescaling identity violated for {}",
                c.name
            );
        }
    }

    #[test]
    fn long_run_coefficient_close_to_truth_with_leads_and_lags() {
        let hits: usize = (0..200u64)
            .into_par_iter()
            .map(|seed| {
                let (y, x) = endogenous_pair(seed + 100, 400);
                let mut spec = DolsSpec::new(y, vec![x]);
                spec.lags = 1;
                spec.leads = 1;
                let fit = dols_fit(&spec).unwrap();
                usize::from((fit.long_run[0].estimate - 2.0).abs() < 0.05)
            })
            .sum();
        assert!(hits >= 190, "within 0.05 of truth in only {hits}/200 runs");
    }

    #[test]
    fn hac_interval_coverage_on_endogenous_dgp() {
        let covered: usize = (0..200u64)
            .into_par_iter()
            .map(|seed| {
                let (y, x) = endogenous_pair(seed + 700, 400);
                let mut spec = DolsSpec::new(y, vec![x]);
                spec.lags = 1;
                spec.leads = 1;
                let fit = dols_fit(&spec).unwrap();
                let c = &fit.long_run[0];
                let crit = t_critical(fit.nobs - fit.params(), 0.95);
                usize::from((c.estimate - 2.0).abs() <= crit * c.hac_se)
            })
            .sum();
        assert!(covered >= 176, "covered in only {covered}/200 runs");
    }

    #[test]
    fn shift_of_regressor_absorbed_by_intercept() {
        let (y, x) = endogenous_pair(21, 200);
        let mut spec = DolsSpec::new(y.clone(), vec![x.clone()]);
        spec.lags = 1;
        let base = dols_fit(&spec).unwrap();

        let shifted = Series::new(
            "x",
            x.start_year(),
            x.values().iter().map(|v| v + 500.0).collect(),
        )
        .unwrap();
        let mut spec2 = DolsSpec::new(y, vec![shifted]);
        spec2.lags = 1;
        let moved = dols_fit(&spec2).unwrap();
        assert!(
            (base.long_run[0].estimate - moved.long_run[0].estimate).abs() < 1e-9,
            "{} vs {}",
            base.long_run[0].estimate,
            moved.long_run[0].estimate
        );
    }

    #[test]
    fn adding_a_lead_is_stable_without_endogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let t = 300;
        let mut x = vec![0.0; t];
        for i in 1..t {
            x[i] = x[i - 1] + normal(&mut rng);
        }
        let y: Vec<f64> = x.iter().map(|v| 1.5 * v + 0.3 * normal(&mut rng)).collect();
        let y = Series::new("y", 1900, y).unwrap();
        let x = Series::new("x", 1900, x).unwrap();

        let mut spec = DolsSpec::new(y.clone(), vec![x.clone()]);
        spec.lags = 1;
        let base = dols_fit(&spec).unwrap();
        let mut spec_lead = DolsSpec::new(y, vec![x]);
        spec_lead.lags = 1;
        spec_lead.leads = 1;
        let with_lead = dols_fit(&spec_lead).unwrap();
        let change = (base.long_run[0].estimate - with_lead.long_run[0].estimate).abs();
        assert!(
            change < 2.0 * base.long_run[0].hac_se,
            "lead shifted the estimate by {change}"
        );
    }

    #[test]
    fn elasticity_classification_rules() {
        let (y, x) = endogenous_pair(31, 200);
        let mut spec = DolsSpec::new(y, vec![x]);
        spec.lags = 1;
        let mut fit = dols_fit(&spec).unwrap();

        // True coefficient 2 with a tight SE: elastic.
        let report = elasticity_report(&fit, 0.95);
        assert_eq!(report[0].class, ElasticityClass::Elastic);
        assert!(report[0].significant);
        assert_eq!(report[0].label, "income");

        // Exactly one with a tiny SE: unitary.
        fit.long_run[0].estimate = 1.0;
        fit.long_run[0].t_stat = 1.0 / fit.long_run[0].hac_se;
        let report = elasticity_report(&fit, 0.95);
        assert_eq!(report[0].class, ElasticityClass::Unitary);

        // Zero coefficient: no relationship.
        fit.long_run[0].estimate = 0.0;
        fit.long_run[0].t_stat = 0.0;
        let report = elasticity_report(&fit, 0.95);
        assert_eq!(report[0].class, ElasticityClass::None);
        assert!(!report[0].significant);
    }

    #[test]
    fn misaligned_regressor_rejected() {
        let (y, x) = endogenous_pair(41, 100);
        let short = Series::new("x", x.start_year(), x.values()[..90].to_vec()).unwrap();
        let spec = DolsSpec::new(y, vec![short]);
        assert!(matches!(
            dols_fit(&spec),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
