//! Annual time-series container and deterministic-regressor construction:
//! logs, differences, lags, linear trend, and structural-break dummies.

use crate::error::{Error, Result};

/// An annual time series: a name, the calendar year of the first
/// observation, and a gap-free vector of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    name: String,
    start_year: i32,
    values: Vec<f64>,
}

impl Series {
    /// Builds a series after validating that every value is finite and the
    /// series is non-empty.
    pub fn new(name: impl Into<String>, start_year: i32, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { len: 0, min: 1 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self {
            name: name.into(),
            start_year,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Calendar year of observation `t` (0-based).
    pub fn year_of(&self, t: usize) -> i32 {
        self.start_year + t as i32
    }

    /// Last calendar year covered by the sample.
    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    /// 0-based observation index of a calendar year, if inside the sample.
    pub fn index_of_year(&self, year: i32) -> Option<usize> {
        if year < self.start_year || year > self.end_year() {
            None
        } else {
            Some((year - self.start_year) as usize)
        }
    }
}

/// A structural-break date, stored by calendar year together with its
/// sample fraction lambda = T_b / T where T_b is the 1-based break period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakDate {
    pub year: i32,
    pub fraction: f64,
}

impl BreakDate {
    /// Resolves a break year against a sample span, requiring 0 < lambda < 1.
    pub fn resolve(year: i32, start_year: i32, len: usize) -> Result<Self> {
        let period = year - start_year + 1;
        if period < 1 || period as usize >= len {
            return Err(Error::BreakOutOfRange { year });
        }
        Ok(Self {
            year,
            fraction: period as f64 / len as f64,
        })
    }

    /// Resolves against a series' span.
    pub fn for_series(year: i32, s: &Series) -> Result<Self> {
        Self::resolve(year, s.start_year(), s.len())
    }

    /// 1-based break period T_b relative to `start_year`.
    pub fn period(&self, start_year: i32) -> usize {
        (self.year - start_year + 1) as usize
    }
}

/// Deterministic terms included in a test or regression equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeterministicSpec {
    /// No intercept column is ever generated.
    None,
    Constant,
    ConstantAndTrend,
}

impl DeterministicSpec {
    pub fn has_constant(self) -> bool {
        !matches!(self, DeterministicSpec::None)
    }

    pub fn has_trend(self) -> bool {
        matches!(self, DeterministicSpec::ConstantAndTrend)
    }

    pub fn label(self) -> &'static str {
        match self {
            DeterministicSpec::None => "none",
            DeterministicSpec::Constant => "constant",
            DeterministicSpec::ConstantAndTrend => "constant_and_trend",
        }
    }
}

/// Which deterministic component breaks at the break date(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakKind {
    Intercept,
    Trend,
    Both,
}

impl BreakKind {
    pub fn has_intercept_shift(self) -> bool {
        matches!(self, BreakKind::Intercept | BreakKind::Both)
    }

    pub fn has_trend_shift(self) -> bool {
        matches!(self, BreakKind::Trend | BreakKind::Both)
    }

    pub fn label(self) -> &'static str {
        match self {
            BreakKind::Intercept => "intercept",
            BreakKind::Trend => "trend",
            BreakKind::Both => "both",
        }
    }
}

/// One or two break dates plus the component they shift.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakSpec {
    pub kind: BreakKind,
    pub dates: Vec<BreakDate>,
}

impl BreakSpec {
    /// Validates that one or two dates are present and strictly increasing.
    pub fn new(kind: BreakKind, dates: Vec<BreakDate>) -> Result<Self> {
        if dates.is_empty() || dates.len() > 2 {
            return Err(Error::InvalidModelCombination {
                reason: format!("break spec requires one or two dates, got {}", dates.len()),
            });
        }
        if dates.len() == 2 && dates[1].year <= dates[0].year {
            return Err(Error::InvalidModelCombination {
                reason: "break dates must be strictly increasing".into(),
            });
        }
        Ok(Self { kind, dates })
    }
}

/// A named regressor column.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }
}

/// How a break enters the regressor set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DummyStyle {
    /// Step (`DU`) and/or ramp (`DT`) columns that stay on after the break.
    Shift,
    /// A single one at the first post-break observation (`DTB`).
    Pulse,
}

/// Element-wise natural logarithm; fails on the first non-positive value.
pub fn log_transform(s: &Series) -> Result<Series> {
    if let Some(index) = s.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositiveValue {
            index,
            value: s.values()[index],
        });
    }
    Series::new(
        format!("ln_{}", s.name()),
        s.start_year(),
        s.values().iter().map(|v| v.ln()).collect(),
    )
}

/// Differences of the given order; the sample start advances by `order`.
pub fn difference(s: &Series, order: usize) -> Result<Series> {
    if order == 0 {
        return Ok(s.clone());
    }
    if s.len() <= order {
        return Err(Error::SeriesTooShort {
            len: s.len(),
            min: order + 1,
        });
    }
    let mut values = s.values().to_vec();
    for _ in 0..order {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Series::new(
        format!("d{}_{}", order, s.name()),
        s.start_year() + order as i32,
        values,
    )
}

/// Lags the series by `k` periods: the value dated year `y` is the original
/// value at `y - k`. Usable length drops to T - k.
pub fn lag(s: &Series, k: usize) -> Result<Series> {
    if s.len() <= k {
        return Err(Error::SeriesTooShort {
            len: s.len(),
            min: k + 1,
        });
    }
    Series::new(
        format!("l{}_{}", k, s.name()),
        s.start_year() + k as i32,
        s.values()[..s.len() - k].to_vec(),
    )
}

/// Intercept column of ones.
pub fn constant_column(len: usize) -> Column {
    Column::new("const", vec![1.0; len])
}

/// Linear trend numbered 1..=T.
pub fn trend_column(len: usize) -> Column {
    Column::new("trend", (1..=len).map(|t| t as f64).collect())
}

/// Step dummy: one for 1-based periods t > T_b.
fn step_values(len: usize, period: usize) -> Vec<f64> {
    (1..=len)
        .map(|t| if t > period { 1.0 } else { 0.0 })
        .collect()
}

/// Ramp dummy: t - T_b for t > T_b, zero before.
fn ramp_values(len: usize, period: usize) -> Vec<f64> {
    (1..=len)
        .map(|t| if t > period { (t - period) as f64 } else { 0.0 })
        .collect()
}

/// Pulse dummy: one at t = T_b + 1 only.
fn pulse_values(len: usize, period: usize) -> Vec<f64> {
    (1..=len)
        .map(|t| if t == period + 1 { 1.0 } else { 0.0 })
        .collect()
}

/// Builds the break regressors for a sample starting at `start_year` with
/// `len` observations. Shift style emits `du_<year>` / `dt_<year>` columns
/// according to the break kind; pulse style emits `dtb_<year>` columns.
/// Dummies activate at the first post-break observation (period T_b + 1).
pub fn break_dummies(
    start_year: i32,
    len: usize,
    spec: &BreakSpec,
    style: DummyStyle,
) -> Result<Vec<Column>> {
    let mut columns = Vec::new();
    for date in &spec.dates {
        let period = date.period(start_year);
        if period < 2 || period + 1 > len {
            return Err(Error::BreakOutOfRange { year: date.year });
        }
        match style {
            DummyStyle::Shift => {
                if spec.kind.has_intercept_shift() {
                    columns.push(Column::new(
                        format!("du_{}", date.year),
                        step_values(len, period),
                    ));
                }
                if spec.kind.has_trend_shift() {
                    columns.push(Column::new(
                        format!("dt_{}", date.year),
                        ramp_values(len, period),
                    ));
                }
            }
            DummyStyle::Pulse => {
                columns.push(Column::new(
                    format!("dtb_{}", date.year),
                    pulse_values(len, period),
                ));
            }
        }
    }
    Ok(columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(values: Vec<f64>) -> Series {
        Series::new("x", 1970, values).unwrap()
    }

    #[test]
    fn log_transform_exact_powers() {
        let s = series(vec![1.0, std::f64::consts::E, std::f64::consts::E.powi(2)]);
        let ln = log_transform(&s).unwrap();
        assert!((ln.values()[0] - 0.0).abs() < 1e-15);
        assert!((ln.values()[1] - 1.0).abs() < 1e-15);
        assert!((ln.values()[2] - 2.0).abs() < 1e-14);
        assert_eq!(ln.name(), "ln_x");
    }

    #[test]
    fn log_transform_preserves_constancy() {
        let s = series(vec![5.0, 5.0, 5.0]);
        let ln = log_transform(&s).unwrap();
        assert!(ln.values().iter().all(|&v| v == 5f64.ln()));
    }

    #[test]
    fn log_transform_rejects_non_positive() {
        let s = series(vec![1.0, 0.0, 2.0]);
        match log_transform(&s) {
            Err(Error::NonPositiveValue { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected NonPositiveValue, got {other:?}"),
        }
    }

    #[test]
    fn difference_hand_arithmetic() {
        let s = series(vec![1.0, 2.0, 4.0, 7.0]);
        let d = difference(&s, 1).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(d.start_year(), 1971);
    }

    #[test]
    fn difference_of_linear_trend_is_constant() {
        let s = series((0..20).map(|t| 3.0 + 0.5 * t as f64).collect());
        let d = difference(&s, 1).unwrap();
        assert!(d.values().iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn second_difference_matches_twice_applied_first_difference() {
        let s = series(vec![1.0, 2.0, 4.0, 7.0]);
        let d2 = difference(&s, 2).unwrap();
        let oracle = difference(&difference(&s, 1).unwrap(), 1).unwrap();
        assert_eq!(d2.values(), oracle.values());
        assert_eq!(d2.values(), &[1.0, 1.0]);
        assert_eq!(d2.start_year(), 1972);
    }

    #[test]
    fn difference_rejects_short_series() {
        let s = series(vec![1.0, 2.0]);
        assert!(matches!(
            difference(&s, 2),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn lag_aligns_pairs() {
        let s = series(vec![1.0, 2.0, 3.0]);
        let l = lag(&s, 1).unwrap();
        // lag(s,1) dated 1971 and 1972 holds the 1970 and 1971 values.
        assert_eq!(l.start_year(), 1971);
        assert_eq!(l.values(), &[1.0, 2.0]);
    }

    #[test]
    fn lag_boundary_single_observation() {
        let s = series(vec![1.0, 2.0, 3.0, 4.0]);
        let l = lag(&s, 3).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.values(), &[1.0]);
    }

    #[test]
    fn lag_and_difference_commute() {
        let s = series(vec![1.0, 4.0, 9.0, 16.0, 25.0, 36.0]);
        let a = difference(&lag(&s, 1).unwrap(), 1).unwrap();
        let b = lag(&difference(&s, 1).unwrap(), 1).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.start_year(), b.start_year());
    }

    #[test]
    fn shift_dummies_match_definitions() {
        // T = 6, break period T_b = 3 (year 1972 with start 1970).
        let date = BreakDate::resolve(1972, 1970, 6).unwrap();
        let spec = BreakSpec::new(BreakKind::Both, vec![date]).unwrap();
        let cols = break_dummies(1970, 6, &spec, DummyStyle::Shift).unwrap();
        assert_eq!(cols[0].name, "du_1972");
        assert_eq!(cols[0].values, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(cols[1].name, "dt_1972");
        assert_eq!(cols[1].values, vec![0.0, 0.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn pulse_dummy_hits_first_post_break_observation() {
        let date = BreakDate::resolve(1973, 1970, 6).unwrap();
        let spec = BreakSpec::new(BreakKind::Intercept, vec![date]).unwrap();
        let cols = break_dummies(1970, 6, &spec, DummyStyle::Pulse).unwrap();
        // T_b = 4, so the single one sits at period 5.
        assert_eq!(cols[0].values, vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn break_out_of_range_rejected() {
        let date = BreakDate::resolve(1970, 1970, 6).unwrap();
        let spec = BreakSpec::new(BreakKind::Intercept, vec![date]).unwrap();
        assert!(matches!(
            break_dummies(1970, 6, &spec, DummyStyle::Shift),
            Err(Error::BreakOutOfRange { .. })
        ));
    }

    #[test]
    fn break_dates_must_increase() {
        let d1 = BreakDate::resolve(1980, 1970, 46).unwrap();
        let d2 = BreakDate::resolve(1975, 1970, 46).unwrap();
        assert!(BreakSpec::new(BreakKind::Intercept, vec![d1, d2]).is_err());
    }

    proptest! {
        #[test]
        fn log_exp_roundtrip(values in proptest::collection::vec(0.01f64..1e6, 1..60)) {
            let s = series(values.clone());
            let ln = log_transform(&s).unwrap();
            for (orig, logged) in values.iter().zip(ln.values()) {
                let back = logged.exp();
                prop_assert!((back - orig).abs() <= 1e-12 * orig.abs());
            }
        }

        #[test]
        fn du_has_t_minus_tb_ones_and_dt_increments(
            len in 6usize..80,
            offset in 1usize..70,
        ) {
            let period = 2 + offset % (len - 2).max(1);
            prop_assume!(period >= 2 && period < len);
            let year = 1970 + period as i32 - 1;
            let date = BreakDate::resolve(year, 1970, len).unwrap();
            let spec = BreakSpec::new(BreakKind::Both, vec![date]).unwrap();
            let cols = break_dummies(1970, len, &spec, DummyStyle::Shift).unwrap();
            let ones = cols[0].values.iter().filter(|&&v| v == 1.0).count();
            prop_assert_eq!(ones, len - period);
            let dt = &cols[1].values;
            for w in dt.windows(2) {
                let inc = w[1] - w[0];
                prop_assert!(inc == 0.0 || inc == 1.0);
            }
            prop_assert_eq!(dt[len - 1], (len - period) as f64);
        }

        #[test]
        fn lag_difference_commute_prop(values in proptest::collection::vec(-1e3f64..1e3, 4..40)) {
            let s = series(values);
            let a = difference(&lag(&s, 1).unwrap(), 1).unwrap();
            let b = lag(&difference(&s, 1).unwrap(), 1).unwrap();
            prop_assert_eq!(a.values(), b.values());
        }
    }
}
