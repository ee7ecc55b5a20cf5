//! VAR lag selection with exogenous regressors and the Johansen trace /
//! maximum-eigenvalue cointegration tests with structural-break dummies
//! concentrated out unrestrictedly.

use crate::critical_values::{johansen_spec_key, lookup_quantiles, Quantiles, TestFamily};
use crate::error::{Error, Result};
use crate::series::{Column, DeterministicSpec, Series};
use nalgebra::DMatrix;

/// A VAR system: aligned endogenous series, a lag order, deterministic
/// terms, and exogenous regressor columns (break dummies, trend
/// interactions) spanning the full sample.
#[derive(Debug, Clone)]
pub struct VarSpec {
    pub endogenous: Vec<Series>,
    pub lag_order: usize,
    pub deterministic: DeterministicSpec,
    pub exogenous: Vec<Column>,
    /// Break fractions backing the exogenous dummies; used to attach
    /// critical values.
    pub break_fractions: Vec<f64>,
}

impl VarSpec {
    fn validate(&self) -> Result<()> {
        let n = self.endogenous.len();
        if n < 2 {
            return Err(Error::SampleTooSmall { nobs: n, params: 2 });
        }
        let first = &self.endogenous[0];
        for s in &self.endogenous[1..] {
            if s.start_year() != first.start_year() || s.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    left: first.len(),
                    right: s.len(),
                });
            }
        }
        for c in &self.exogenous {
            if c.values.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    left: first.len(),
                    right: c.values.len(),
                });
            }
        }
        let t = first.len();
        if self.lag_order == 0 || self.lag_order * 2 * n >= t {
            return Err(Error::SampleTooSmall {
                nobs: t,
                params: self.lag_order * 2 * n,
            });
        }
        Ok(())
    }

    fn nobs(&self) -> usize {
        self.endogenous[0].len()
    }
}

/// One tested rank hypothesis.
#[derive(Debug, Clone)]
pub struct RankHypothesis {
    /// Null hypothesis: at most `rank` cointegrating relations.
    pub rank: usize,
    pub statistic: f64,
    pub critical_values: Quantiles,
    /// None when no critical value is available at the decision level.
    pub reject: Option<bool>,
}

/// Eigenvalues and both statistic families for a Johansen test.
#[derive(Debug, Clone)]
pub struct JohansenOutcome {
    pub eigenvalues: Vec<f64>,
    pub trace: Vec<RankHypothesis>,
    pub max_eigen: Vec<RankHypothesis>,
    pub level: f64,
    /// Smallest rank whose trace null is not rejected; `n` if every
    /// hypothesis is rejected; None when critical values are missing.
    pub decided_rank: Option<usize>,
    pub nobs_effective: usize,
}

/// Solves a multivariate least-squares problem, returning residuals.
/// When the regressor block is empty the raw responses are returned.
fn concentrate(responses: &DMatrix<f64>, regressors: Option<&DMatrix<f64>>) -> Result<DMatrix<f64>> {
    let Some(z) = regressors else {
        return Ok(responses.clone());
    };
    let svd = z.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 || svd.singular_values.iter().any(|&s| s <= 1e-10 * smax) {
        return Err(Error::RankDeficient {
            columns: vec!["concentration regressors".into()],
        });
    }
    let beta = svd
        .solve(responses, 1e-10 * smax)
        .map_err(|e| Error::NumericalFailure(e.to_string()))?;
    Ok(responses - z * beta)
}

struct ConcentratedMoments {
    eigenvalues: Vec<f64>,
    nobs_effective: usize,
}

/// Builds the concentrated cross-moment matrices and solves the reduced-rank
/// eigenproblem through a Cholesky-whitened symmetric form, which keeps the
/// eigenvalues inside [0, 1).
fn johansen_eigenvalues(spec: &VarSpec) -> Result<ConcentratedMoments> {
    let n = spec.endogenous.len();
    let t = spec.nobs();
    let p = spec.lag_order;
    let rows = t - p;

    let mut z0 = DMatrix::zeros(rows, n);
    let mut z1 = DMatrix::zeros(rows, n);
    for (j, s) in spec.endogenous.iter().enumerate() {
        let v = s.values();
        for (i, t_idx) in (p..t).enumerate() {
            z0[(i, j)] = v[t_idx] - v[t_idx - 1];
            z1[(i, j)] = v[t_idx - 1];
        }
    }

    let mut z2_cols: Vec<Vec<f64>> = Vec::new();
    if spec.deterministic.has_constant() {
        z2_cols.push(vec![1.0; rows]);
    }
    if spec.deterministic.has_trend() {
        z2_cols.push((p..t).map(|t_idx| (t_idx + 1) as f64).collect());
    }
    for c in &spec.exogenous {
        z2_cols.push(c.values[p..].to_vec());
    }
    for lag in 1..p {
        for s in &spec.endogenous {
            let v = s.values();
            z2_cols.push(
                (p..t)
                    .map(|t_idx| v[t_idx - lag] - v[t_idx - lag - 1])
                    .collect(),
            );
        }
    }

    if rows <= z2_cols.len() + n {
        return Err(Error::SampleTooSmall {
            nobs: rows,
            params: z2_cols.len() + n,
        });
    }

    let z2 = if z2_cols.is_empty() {
        None
    } else {
        let mut m = DMatrix::zeros(rows, z2_cols.len());
        for (j, col) in z2_cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Some(m)
    };

    let r0 = concentrate(&z0, z2.as_ref())?;
    let r1 = concentrate(&z1, z2.as_ref())?;

    let tf = rows as f64;
    let s00 = r0.transpose() * &r0 / tf;
    let s01 = r0.transpose() * &r1 / tf;
    let s11 = r1.transpose() * &r1 / tf;

    let s00_chol = s00
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("S00 not positive definite".into()))?;
    let x = s00_chol.solve(&s01); // S00^{-1} S01
    let k = s01.transpose() * x; // S10 S00^{-1} S01, symmetric

    let s11_chol = s11
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("S11 not positive definite".into()))?;
    let l = s11_chol.l();
    let y = l
        .solve_lower_triangular(&k)
        .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
    let m = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
    let sym = (m.transpose() + &m) / 2.0;

    let eigen = sym.symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eigen
        .eigenvalues
        .iter()
        .map(|&v| v.clamp(0.0, 1.0 - 1e-12))
        .collect();
    eigenvalues.sort_by(|a, b| b.partial_cmp(a).unwrap());

    Ok(ConcentratedMoments {
        eigenvalues,
        nobs_effective: rows,
    })
}

/// Johansen cointegration test. Deterministic terms and exogenous break
/// regressors are concentrated out unrestrictedly; the decided rank is the
/// smallest trace null not rejected at `level` (default 90%).
pub fn johansen_test(spec: &VarSpec) -> Result<JohansenOutcome> {
    johansen_test_at(spec, 0.90)
}

pub fn johansen_test_at(spec: &VarSpec, level: f64) -> Result<JohansenOutcome> {
    spec.validate()?;
    let n = spec.endogenous.len();
    let moments = johansen_eigenvalues(spec)?;
    let tf = moments.nobs_effective as f64;

    // Suffix sums; the max-eigenvalue statistic is the trace difference so
    // the telescoping identity holds exactly in floating point.
    let terms: Vec<f64> = moments
        .eigenvalues
        .iter()
        .map(|&l| -tf * (1.0 - l).ln())
        .collect();
    let mut trace_stats = vec![0.0; n + 1];
    for r in (0..n).rev() {
        trace_stats[r] = terms[r] + trace_stats[r + 1];
    }
    let max_eigen_stats: Vec<f64> = (0..n).map(|r| trace_stats[r] - trace_stats[r + 1]).collect();

    let n_breaks = spec.break_fractions.len();
    let mut trace = Vec::with_capacity(n);
    let mut max_eigen = Vec::with_capacity(n);
    for r in 0..n {
        let cvs = lookup_quantiles(
            TestFamily::JohansenTrace,
            &johansen_spec_key(n, r, n_breaks),
            moments.nobs_effective,
            &spec.break_fractions,
        );
        let reject = cvs.at(level).map(|cv| trace_stats[r] > cv);
        trace.push(RankHypothesis {
            rank: r,
            statistic: trace_stats[r],
            critical_values: cvs,
            reject,
        });

        let max_cvs = lookup_quantiles(
            TestFamily::JohansenMax,
            &johansen_spec_key(n, r, n_breaks),
            moments.nobs_effective,
            &spec.break_fractions,
        );
        let max_reject = max_cvs.at(level).map(|cv| max_eigen_stats[r] > cv);
        max_eigen.push(RankHypothesis {
            rank: r,
            statistic: max_eigen_stats[r],
            critical_values: max_cvs,
            reject: max_reject,
        });
    }

    let outcome = JohansenOutcome {
        eigenvalues: moments.eigenvalues,
        trace,
        max_eigen,
        level,
        decided_rank: None,
        nobs_effective: moments.nobs_effective,
    };
    let decided_rank = decide_rank(&outcome, level).ok();
    Ok(JohansenOutcome {
        decided_rank,
        ..outcome
    })
}

/// Sequential rank decision: test r = 0, 1, ... and stop at the first
/// acceptance; returns `n` when every hypothesis is rejected.
pub fn decide_rank(outcome: &JohansenOutcome, level: f64) -> Result<usize> {
    for hypothesis in &outcome.trace {
        let cv = hypothesis
            .critical_values
            .at(level)
            .ok_or(Error::MissingCriticalValues { level })?;
        if hypothesis.statistic <= cv {
            return Ok(hypothesis.rank);
        }
    }
    Ok(outcome.trace.len())
}

/// Criteria table for one candidate VAR order.
#[derive(Debug, Clone, Copy)]
pub struct VarLagRow {
    pub lag: usize,
    pub aic: f64,
    pub sic: f64,
    pub hq: f64,
}

/// Per-criterion chosen orders plus the full table.
#[derive(Debug, Clone)]
pub struct VarLagSelection {
    pub table: Vec<VarLagRow>,
    pub chosen_aic: usize,
    pub chosen_sic: usize,
    pub chosen_hq: usize,
}

/// Fits the n-equation VAR by equation-wise least squares for every order
/// up to `max_lag` on the common sample, and reports the multivariate
/// information criteria (log-determinant of the residual covariance plus
/// penalty) with each criterion's argmin.
pub fn var_lag_select(
    endogenous: &[Series],
    deterministic: DeterministicSpec,
    exogenous: &[Column],
    max_lag: usize,
) -> Result<VarLagSelection> {
    if max_lag == 0 {
        return Err(Error::InfeasibleSpec {
            reason: "maximum VAR order must be at least 1".into(),
        });
    }
    let probe = VarSpec {
        endogenous: endogenous.to_vec(),
        lag_order: max_lag,
        deterministic,
        exogenous: exogenous.to_vec(),
        break_fractions: vec![],
    };
    probe.validate()?;

    let n = endogenous.len();
    let t = endogenous[0].len();
    let rows = t - max_lag;

    let mut y = DMatrix::zeros(rows, n);
    for (j, s) in endogenous.iter().enumerate() {
        for (i, t_idx) in (max_lag..t).enumerate() {
            y[(i, j)] = s.values()[t_idx];
        }
    }

    let mut table = Vec::with_capacity(max_lag);
    for p in 1..=max_lag {
        let mut cols: Vec<Vec<f64>> = Vec::new();
        if deterministic.has_constant() {
            cols.push(vec![1.0; rows]);
        }
        if deterministic.has_trend() {
            cols.push((max_lag..t).map(|t_idx| (t_idx + 1) as f64).collect());
        }
        for c in exogenous {
            cols.push(c.values[max_lag..].to_vec());
        }
        for lag in 1..=p {
            for s in endogenous {
                cols.push((max_lag..t).map(|t_idx| s.values()[t_idx - lag]).collect());
            }
        }
        let m = cols.len();
        if rows <= m {
            return Err(Error::SampleTooSmall {
                nobs: rows,
                params: m,
            });
        }
        let mut z = DMatrix::zeros(rows, m);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                z[(i, j)] = v;
            }
        }
        let residuals = concentrate(&y, Some(&z))?;
        let sigma = residuals.transpose() * &residuals / rows as f64;
        let chol = sigma
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure("residual covariance not PD".into()))?;
        let log_det: f64 = chol.l_dirty().diagonal().iter().map(|d| 2.0 * d.ln()).sum();

        let tf = rows as f64;
        let k_total = (n * m) as f64;
        table.push(VarLagRow {
            lag: p,
            aic: log_det + 2.0 * k_total / tf,
            sic: log_det + k_total * tf.ln() / tf,
            hq: log_det + 2.0 * k_total * tf.ln().ln() / tf,
        });
    }

    let argmin = |f: fn(&VarLagRow) -> f64| -> usize {
        table
            .iter()
            .min_by(|a, b| f(a).partial_cmp(&f(b)).unwrap())
            .map(|row| row.lag)
            .unwrap()
    };
    Ok(VarLagSelection {
        chosen_aic: argmin(|r| r.aic),
        chosen_sic: argmin(|r| r.sic),
        chosen_hq: argmin(|r| r.hq),
        table,
    })
}
