//! OLS engine with diagnostics: SVD-based coefficient estimation, classical
//! and Bartlett/Newey-West long-run variance, information criteria, and the
//! Jarque-Bera normality test.

use crate::error::{Error, Result};
use crate::series::Column;
use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Relative singular-value cutoff below which a design is rank deficient.
const RANK_TOLERANCE: f64 = 1e-10;

/// Named regressor columns of equal length.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    names: Vec<String>,
    data: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn from_columns(columns: &[Column]) -> Result<Self> {
        let ncols = columns.len();
        if ncols == 0 {
            return Err(Error::SampleTooSmall { nobs: 0, params: 0 });
        }
        let nobs = columns[0].values.len();
        for c in columns {
            if c.values.len() != nobs {
                return Err(Error::DimensionMismatch {
                    left: nobs,
                    right: c.values.len(),
                });
            }
        }
        let mut data = DMatrix::zeros(nobs, ncols);
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.values.iter().enumerate() {
                data[(i, j)] = v;
            }
        }
        Ok(Self {
            names: columns.iter().map(|c| c.name.clone()).collect(),
            data,
        })
    }

    pub fn nobs(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.data.column(j).iter().copied().collect()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }
}

/// Akaike, Schwarz, and Hannan-Quinn criteria in the log-variance form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcSet {
    pub aic: f64,
    pub sic: f64,
    pub hq: f64,
}

/// A fitted least-squares regression.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub r2_adjusted: f64,
    /// Residual variance with degrees-of-freedom correction, RSS / (n - k).
    pub sigma2: f64,
    pub rss: f64,
    pub nobs: usize,
    pub ic: IcSet,
}

impl OlsFit {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.position(name).map(|j| self.coefficients[j])
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Ordinary least squares via singular value decomposition.
///
/// A singular value below `1e-10` times the largest flags the design as rank
/// deficient, and the offending columns are named in the error.
pub fn ols(y: &[f64], x: &DesignMatrix) -> Result<OlsFit> {
    let n = x.nobs();
    let k = x.ncols();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            left: y.len(),
            right: n,
        });
    }
    if n <= k {
        return Err(Error::SampleTooSmall { nobs: n, params: k });
    }

    let svd = x.matrix().clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = RANK_TOLERANCE * smax;
    if smax == 0.0 || svd.singular_values.iter().any(|&s| s <= cutoff) {
        return Err(Error::RankDeficient {
            columns: collinear_columns(&svd, x.names(), cutoff),
        });
    }

    let yv = DVector::from_row_slice(y);
    let beta = svd
        .solve(&yv, cutoff)
        .map_err(|e| Error::NumericalFailure(e.to_string()))?;

    let fitted = x.matrix() * &beta;
    let residuals: Vec<f64> = yv
        .iter()
        .zip(fitted.iter())
        .map(|(a, b)| a - b)
        .collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = rss / (n - k) as f64;

    // cov(beta) = sigma2 * V diag(1/s^2) V'
    let v_t = svd.v_t.as_ref().expect("svd computed with V");
    let mut standard_errors = Vec::with_capacity(k);
    for j in 0..k {
        let mut var_j = 0.0;
        for (r, &s) in svd.singular_values.iter().enumerate() {
            let v_jr = v_t[(r, j)];
            var_j += v_jr * v_jr / (s * s);
        }
        standard_errors.push((sigma2 * var_j).max(0.0).sqrt());
    }

    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let t_stats: Vec<f64> = coefficients
        .iter()
        .zip(&standard_errors)
        .map(|(b, se)| b / se)
        .collect();

    let has_const = x.names().iter().any(|n| n == "const");
    let tss = if has_const {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
    } else {
        y.iter().map(|v| v * v).sum::<f64>()
    };
    let r2_adjusted = if tss > 0.0 {
        1.0 - (rss / (n - k) as f64) / (tss / (n - 1) as f64)
    } else {
        f64::NAN
    };

    let ic = ic_from_rss(rss, n, k);

    Ok(OlsFit {
        names: x.names().to_vec(),
        coefficients,
        standard_errors,
        t_stats,
        residuals,
        fitted: fitted.iter().copied().collect(),
        r2_adjusted,
        sigma2,
        rss,
        nobs: n,
        ic,
    })
}

/// Normal-equation least squares with a Cholesky solve. Used to rank the
/// thousands of candidate regressions inside endogenous-break grid searches;
/// falls back to the SVD path when the cross-product matrix is not safely
/// positive definite. Reported fits always come from [`ols`].
pub(crate) fn ols_fast(y: &[f64], x: &DesignMatrix) -> Result<OlsFit> {
    let n = x.nobs();
    let k = x.ncols();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            left: y.len(),
            right: n,
        });
    }
    if n <= k {
        return Err(Error::SampleTooSmall { nobs: n, params: k });
    }

    let xm = x.matrix();
    let xtx = xm.transpose() * xm;
    let scale = xtx.diagonal().iter().cloned().fold(0.0f64, f64::max);
    let Some(chol) = xtx.clone().cholesky() else {
        return ols(y, x);
    };
    if chol
        .l_dirty()
        .diagonal()
        .iter()
        .any(|&d| d * d <= 1e-12 * scale)
    {
        return ols(y, x);
    }

    let yv = DVector::from_row_slice(y);
    let xty = xm.transpose() * &yv;
    let beta = chol.solve(&xty);
    let xtx_inv = chol.inverse();

    let fitted = xm * &beta;
    let residuals: Vec<f64> = yv.iter().zip(fitted.iter()).map(|(a, b)| a - b).collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = rss / (n - k) as f64;

    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let standard_errors: Vec<f64> = (0..k)
        .map(|j| (sigma2 * xtx_inv[(j, j)]).max(0.0).sqrt())
        .collect();
    let t_stats: Vec<f64> = coefficients
        .iter()
        .zip(&standard_errors)
        .map(|(b, se)| b / se)
        .collect();

    let has_const = x.names().iter().any(|n| n == "const");
    let tss = if has_const {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
    } else {
        y.iter().map(|v| v * v).sum::<f64>()
    };
    let r2_adjusted = if tss > 0.0 {
        1.0 - (rss / (n - k) as f64) / (tss / (n - 1) as f64)
    } else {
        f64::NAN
    };

    Ok(OlsFit {
        names: x.names().to_vec(),
        coefficients,
        standard_errors,
        t_stats,
        residuals,
        fitted: fitted.iter().copied().collect(),
        r2_adjusted,
        sigma2,
        rss,
        nobs: n,
        ic: ic_from_rss(rss, n, k),
    })
}

/// Names the columns loading on near-null singular directions.
fn collinear_columns(
    svd: &nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    names: &[String],
    cutoff: f64,
) -> Vec<String> {
    let Some(v_t) = svd.v_t.as_ref() else {
        return names.to_vec();
    };
    let mut flagged = Vec::new();
    for (r, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            continue;
        }
        let row = v_t.row(r);
        let max_load = row.iter().cloned().map(f64::abs).fold(0.0f64, f64::max);
        for (j, &v) in row.iter().enumerate() {
            if v.abs() >= 0.5 * max_load && !flagged.contains(&names[j]) {
                flagged.push(names[j].clone());
            }
        }
    }
    if flagged.is_empty() {
        flagged = names.to_vec();
    }
    flagged
}

/// Kernel used by the long-run variance estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Bartlett,
}

/// A Bartlett-kernel long-run variance estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongRunVariance {
    pub value: f64,
    pub bandwidth: usize,
    pub kernel: Kernel,
}

/// Fixed Newey-West bandwidth rule, floor(4 (T/100)^{2/9}).
pub fn fixed_newey_west_bandwidth(nobs: usize) -> usize {
    (4.0 * (nobs as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Lag-j autocovariance with divisor T (not T - j).
fn autocovariance(u: &[f64], j: usize) -> f64 {
    let n = u.len();
    let mut acc = 0.0;
    for t in j..n {
        acc += u[t] * u[t - j];
    }
    acc / n as f64
}

/// Bartlett-kernel long-run variance of a (mean-zero) residual series:
/// omega = gamma_0 + 2 sum_{j=1..m} (1 - j/(m+1)) gamma_j.
///
/// With `bandwidth` absent the fixed Newey-West rule is used.
pub fn newey_west_lrv(residuals: &[f64], bandwidth: Option<usize>) -> Result<LongRunVariance> {
    let n = residuals.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { len: n, min: 2 });
    }
    let m = bandwidth.unwrap_or_else(|| fixed_newey_west_bandwidth(n));
    if m >= n {
        return Err(Error::InfeasibleSpec {
            reason: format!("bandwidth {m} must be below the sample size {n}"),
        });
    }
    let mut omega = autocovariance(residuals, 0);
    for j in 1..=m {
        let weight = 1.0 - j as f64 / (m as f64 + 1.0);
        omega += 2.0 * weight * autocovariance(residuals, j);
    }
    Ok(LongRunVariance {
        value: omega.max(0.0),
        bandwidth: m,
        kernel: Kernel::Bartlett,
    })
}

/// Newey-West (1994) automatic data-based bandwidth for the Bartlett kernel.
pub fn newey_west_auto_bandwidth(residuals: &[f64]) -> usize {
    let n = residuals.len();
    if n < 3 {
        return 0;
    }
    let lag_window = fixed_newey_west_bandwidth(n).min(n - 1);
    let mut s0 = autocovariance(residuals, 0);
    let mut s1 = 0.0;
    for j in 1..=lag_window {
        let g = autocovariance(residuals, j);
        s0 += 2.0 * g;
        s1 += 2.0 * j as f64 * g;
    }
    if s0.abs() < 1e-300 {
        return 0;
    }
    let gamma_hat = 1.1447 * ((s1 / s0) * (s1 / s0)).powf(1.0 / 3.0);
    let m = (gamma_hat * (n as f64).powf(1.0 / 3.0)).floor();
    if m.is_finite() && m > 0.0 {
        (m as usize).min(n - 1)
    } else {
        0
    }
}

/// Jarque-Bera test outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JarqueBera {
    pub statistic: f64,
    pub p_value: f64,
}

/// Jarque-Bera normality test: JB = T/6 (S^2 + (K-3)^2 / 4) with the
/// p-value from the chi-square(2) upper tail.
pub fn jarque_bera(residuals: &[f64]) -> Result<JarqueBera> {
    let n = residuals.len();
    if n < 4 {
        return Err(Error::SeriesTooShort { len: n, min: 4 });
    }
    let nf = n as f64;
    let mean = residuals.iter().sum::<f64>() / nf;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &u in residuals {
        let d = u - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if m2 <= 0.0 {
        return Err(Error::NumericalFailure(
            "degenerate residuals: zero variance".into(),
        ));
    }
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    let statistic = nf / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
    // chi-square(2) survival function has the closed form exp(-x/2).
    let p_value = (-statistic / 2.0).exp();
    Ok(JarqueBera { statistic, p_value })
}

fn ic_from_rss(rss: f64, nobs: usize, k: usize) -> IcSet {
    let t = nobs as f64;
    let log_var = (rss / t).ln();
    IcSet {
        aic: log_var + 2.0 * k as f64 / t,
        sic: log_var + k as f64 * t.ln() / t,
        hq: log_var + 2.0 * k as f64 * t.ln().ln() / t,
    }
}

/// Information criteria for a fitted regression, with explicit sample size
/// and parameter count (sigma^2 here is RSS/T).
pub fn info_criteria(fit: &OlsFit, nobs: usize, k: usize) -> IcSet {
    ic_from_rss(fit.rss, nobs, k)
}

/// Two-sided Student-t critical value at the given confidence level.
pub fn t_critical(dof: usize, level: f64) -> f64 {
    let dof = dof.max(1) as f64;
    let dist = StudentsT::new(0.0, 1.0, dof).expect("valid t distribution");
    dist.inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Two-sided p-value of a t statistic.
pub fn t_p_value(t: f64, dof: usize) -> f64 {
    let dof = dof.max(1) as f64;
    let dist = StudentsT::new(0.0, 1.0, dof).expect("valid t distribution");
    2.0 * (1.0 - dist.cdf(t.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Column;
    use proptest::prelude::*;
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn design(cols: Vec<(&str, Vec<f64>)>) -> DesignMatrix {
        let columns: Vec<Column> = cols
            .into_iter()
            .map(|(n, v)| Column::new(n, v))
            .collect();
        DesignMatrix::from_columns(&columns).unwrap()
    }

    #[test]
    fn exact_line_through_origin() {
        let x: Vec<f64> = (1..=10).map(|v| v as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let fit = ols(&y, &design(vec![("x", x)])).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-10));
    }

    #[test]
    fn intercept_only_recovers_mean() {
        let y = vec![1.0, 2.0, 3.0, 4.0];
        let fit = ols(&y, &design(vec![("const", vec![1.0; 4])])).unwrap();
        assert!((fit.coefficients[0] - 2.5).abs() < 1e-12);
    }

    /// Independent oracle: solve the normal equations X'X b = X'y by exact
    /// Gaussian elimination with partial pivoting.
    fn normal_equation_oracle(y: &[f64], cols: &[Vec<f64>]) -> Vec<f64> {
        let k = cols.len();
        let mut a = vec![vec![0.0; k + 1]; k];
        for i in 0..k {
            for j in 0..k {
                a[i][j] = cols[i].iter().zip(&cols[j]).map(|(p, q)| p * q).sum();
            }
            a[i][k] = cols[i].iter().zip(y).map(|(p, q)| p * q).sum();
        }
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())
                .unwrap();
            a.swap(col, pivot);
            for row in 0..k {
                if row != col {
                    let f = a[row][col] / a[col][col];
                    let pivot_row = a[col].clone();
                    for (j, pivot_value) in pivot_row.iter().enumerate().take(k + 1).skip(col) {
                        a[row][j] -= f * pivot_value;
                    }
                }
            }
        }
        (0..k).map(|i| a[i][k] / a[i][i]).collect()
    }

    #[test]
    fn three_regressor_fixture_matches_normal_equations() {
        let c0 = vec![1.0; 8];
        let c1 = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let c2 = vec![2.0, -1.0, 0.5, 3.0, -2.0, 1.0, 0.0, 4.0];
        let y = vec![3.1, 4.0, 6.2, 9.5, 6.8, 11.0, 12.1, 18.0];
        let oracle = normal_equation_oracle(&y, &[c0.clone(), c1.clone(), c2.clone()]);
        let fit = ols(
            &y,
            &design(vec![("const", c0), ("t", c1), ("z", c2)]),
        )
        .unwrap();
        for (est, exp) in fit.coefficients.iter().zip(&oracle) {
            assert!((est - exp).abs() < 1e-10, "{est} vs {exp}");
        }
    }

    #[test]
    fn zero_column_is_rank_deficient() {
        let x = design(vec![
            ("const", vec![1.0; 6]),
            ("zeros", vec![0.0; 6]),
        ]);
        let y = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        match ols(&y, &x) {
            Err(Error::RankDeficient { columns }) => {
                assert!(columns.contains(&"zeros".to_string()), "{columns:?}");
            }
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let v = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let x = design(vec![("a", v.clone()), ("b", v)]);
        let y = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(matches!(ols(&y, &x), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn dimension_mismatch_reported() {
        let x = design(vec![("a", vec![1.0, 2.0, 3.0])]);
        assert!(matches!(
            ols(&[1.0, 2.0], &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn residuals_orthogonal_to_regressors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 60;
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let fit = ols(
            &y,
            &design(vec![
                ("a", cols[0].clone()),
                ("b", cols[1].clone()),
                ("c", cols[2].clone()),
            ]),
        )
        .unwrap();
        for col in &cols {
            let dot: f64 = col.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
            let norm: f64 = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            let rnorm: f64 = fit.residuals.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(dot.abs() / (norm * rnorm.max(1e-30)) < 1e-8);
        }
    }

    #[test]
    fn lrv_bandwidth_zero_is_biased_sample_variance() {
        let u = vec![0.3, -1.2, 0.8, 0.1, -0.4, 0.9, -0.5];
        let lrv = newey_west_lrv(&u, Some(0)).unwrap();
        let var: f64 = u.iter().map(|v| v * v).sum::<f64>() / u.len() as f64;
        assert_eq!(lrv.value, var);
        assert_eq!(lrv.bandwidth, 0);
    }

    #[test]
    fn lrv_alternating_fixture() {
        // gamma_0 = 1, gamma_1 = -3/4 (divisor T), bartlett weight 1/2:
        // omega = 1 + 2 * (1/2) * (-3/4) = 0.25.
        let u = vec![1.0, -1.0, 1.0, -1.0];
        let lrv = newey_west_lrv(&u, Some(1)).unwrap();
        assert!((lrv.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fixed_bandwidth_rule_at_t46() {
        assert_eq!(fixed_newey_west_bandwidth(46), 3);
        assert_eq!(fixed_newey_west_bandwidth(100), 4);
    }

    #[test]
    fn jarque_bera_alternating_sample() {
        // S = 0, K = 1 -> JB = (20/6) * (2^2/4) = 10/3.
        let u: Vec<f64> = (0..20).map(|t| if t % 2 == 0 { -1.0 } else { 1.0 }).collect();
        let jb = jarque_bera(&u).unwrap();
        assert!((jb.statistic - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn jarque_bera_affine_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.5)).collect();
        let jb = jarque_bera(&u).unwrap();
        let scaled: Vec<f64> = u.iter().map(|v| 3.5 * v - 42.0).collect();
        let jb2 = jarque_bera(&scaled).unwrap();
        assert!((jb.statistic - jb2.statistic).abs() < 1e-9);
    }

    #[test]
    fn jarque_bera_size_on_normal_samples() {
        // p > 0.01 should hold in at least 99% of seeds under the null.
        let mut ok = 0usize;
        for seed in 0..500u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u: Vec<f64> = (0..10_000)
                .map(|_| {
                    // Box-Muller from two uniforms.
                    let a: f64 = rng.gen_range(1e-12..1.0);
                    let b: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    (-2.0f64 * a.ln()).sqrt() * b.cos()
                })
                .collect();
            if jarque_bera(&u).unwrap().p_value > 0.01 {
                ok += 1;
            }
        }
        assert!(ok >= 495, "only {ok}/500 seeds exceeded p = 0.01");
    }

    #[test]
    fn ic_with_zero_params_all_equal() {
        let set = ic_from_rss(2.5, 40, 0);
        assert_eq!(set.aic, set.sic);
        assert_eq!(set.aic, set.hq);
        assert!((set.aic - (2.5f64 / 40.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn sic_penalizes_irrelevant_regressor() {
        // Same RSS, one extra parameter, T >= 8 so ln(T) > 2.
        let base = ic_from_rss(1.0, 12, 2);
        let extra = ic_from_rss(1.0, 12, 3);
        assert!(extra.sic > base.sic);
        assert!(extra.sic - base.sic > extra.aic - base.aic);
    }

    #[test]
    fn ic_fixture_direct_evaluation() {
        let set = ic_from_rss(1.0, 46, 3);
        let expected = (1.0f64 / 46.0).ln() + 6.0 / 46.0;
        assert!((set.aic - expected).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn recovers_beta_exactly_on_noiseless_data(
            b0 in -5.0f64..5.0,
            b1 in -5.0f64..5.0,
            seed in 0u64..1000,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 30;
            let x1: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let y: Vec<f64> = x1.iter().map(|v| b0 + b1 * v).collect();
            let fit = ols(
                &y,
                &design(vec![("const", vec![1.0; n]), ("x", x1)]),
            )
            .unwrap();
            prop_assert!((fit.coefficients[0] - b0).abs() < 1e-10);
            prop_assert!((fit.coefficients[1] - b1).abs() < 1e-10);
        }

        #[test]
        fn lrv_bandwidth_zero_equals_biased_variance(
            vals in proptest::collection::vec(-10.0f64..10.0, 2..50),
        ) {
            let lrv = newey_west_lrv(&vals, Some(0)).unwrap();
            let var: f64 = vals.iter().map(|v| v * v).sum::<f64>() / vals.len() as f64;
            prop_assert_eq!(lrv.value, var.max(0.0));
        }
    }
}
