//! Bundled critical-value tables.
//!
//! Dickey-Fuller rows are MacKinnon-style values for samples near T = 45;
//! the endogenous-break rows are the Vogelsang minimum-t asymptotics; the
//! two-break rows are the published Lumsdaine-Papell and
//! Clemente-Montanes-Reyes values; the Johansen break grids follow the
//! Johansen-Mosconi-Nielsen response surface for one and two exogenous
//! breaks at the tabulated fractions. Everything not covered here is
//! generated on demand by the Monte Carlo engine.

use super::{CriticalValueSurface, Provenance, Quantiles, SampleSize, TestFamily};
use std::sync::OnceLock;

fn surface(
    family: TestFamily,
    spec_key: &str,
    fractions: Vec<f64>,
    p90: Option<f64>,
    p95: Option<f64>,
    p99: Option<f64>,
) -> CriticalValueSurface {
    CriticalValueSurface {
        test_family: family,
        spec_key: spec_key.to_string(),
        sample_size: SampleSize::Asymptotic,
        break_fractions: fractions,
        quantiles: Quantiles { p90, p95, p99 },
        provenance: Provenance::BundledTable,
        quantile_errors: None,
    }
}

fn dickey_fuller(family: TestFamily) -> Vec<CriticalValueSurface> {
    vec![
        surface(
            family,
            "det=none",
            vec![],
            Some(-1.612),
            Some(-1.948),
            Some(-2.617),
        ),
        surface(
            family,
            "det=constant",
            vec![],
            Some(-2.601),
            Some(-2.926),
            Some(-3.581),
        ),
        surface(
            family,
            "det=constant_and_trend",
            vec![],
            Some(-3.187),
            Some(-3.513),
            Some(-4.176),
        ),
    ]
}

/// Minimum-t single-break rows. The distribution of the minimum-t
/// statistic does not depend on a chosen fraction, so the rows match any
/// requested break placement (empty fraction list = wildcard).
fn min_t_break_rows(family: TestFamily) -> Vec<CriticalValueSurface> {
    vec![
        surface(
            family,
            "det=constant;break=intercept",
            vec![],
            Some(-4.19),
            Some(-4.44),
            Some(-4.95),
        ),
        surface(
            family,
            "det=constant_and_trend;break=intercept",
            vec![],
            Some(-4.19),
            Some(-4.44),
            Some(-4.95),
        ),
        surface(
            family,
            "det=constant_and_trend;break=trend",
            vec![],
            Some(-4.26),
            Some(-4.52),
            Some(-5.07),
        ),
        surface(
            family,
            "det=constant_and_trend;break=both",
            vec![],
            Some(-4.61),
            Some(-4.86),
            Some(-5.35),
        ),
    ]
}

fn johansen_no_break() -> Vec<CriticalValueSurface> {
    // Trace test with an unrestricted constant, n - r = 1..4.
    let rows = [
        (1, 2.69, 3.76, 6.65),
        (2, 13.33, 15.41, 20.04),
        (3, 26.79, 29.68, 35.65),
        (4, 43.95, 47.21, 54.46),
    ];
    let mut out = Vec::new();
    for n in 2..=4usize {
        for r in 0..n {
            let gap = n - r;
            let (_, p90, p95, p99) = rows[gap - 1];
            out.push(surface(
                TestFamily::JohansenTrace,
                &super::johansen_spec_key(n, r, 0),
                vec![],
                Some(p90),
                Some(p95),
                Some(p99),
            ));
        }
    }
    out
}

fn johansen_break_grids() -> Vec<CriticalValueSurface> {
    let lambda_early = 14.0 / 46.0;
    let lambda_late = 31.0 / 46.0;
    let configs: [(&[f64], [[f64; 3]; 4]); 3] = [
        (
            &[lambda_early],
            [
                [78.38, 82.60, 90.91],
                [53.85, 57.43, 64.57],
                [33.13, 36.06, 41.98],
                [16.05, 18.24, 22.85],
            ],
        ),
        (
            &[lambda_late],
            [
                [78.95, 83.18, 91.52],
                [54.35, 57.95, 65.11],
                [33.53, 36.47, 42.40],
                [16.28, 18.46, 23.04],
            ],
        ),
        (
            &[lambda_early, lambda_late],
            [
                [100.57, 105.37, 114.77],
                [71.13, 75.23, 83.34],
                [45.34, 48.69, 55.38],
                [22.62, 25.06, 30.07],
            ],
        ),
    ];
    let mut out = Vec::new();
    for (fractions, grid) in configs {
        for (r, row) in grid.iter().enumerate() {
            out.push(surface(
                TestFamily::JohansenTrace,
                &super::johansen_spec_key(4, r, fractions.len()),
                fractions.to_vec(),
                Some(row[0]),
                Some(row[1]),
                Some(row[2]),
            ));
        }
    }
    out
}

fn clemente_rows(family: TestFamily) -> Vec<CriticalValueSurface> {
    // Only the published 95% value ships; other levels fall back to the
    // Monte Carlo engine. The search distribution is fraction-free.
    vec![surface(
        family,
        "det=constant;break=intercept",
        vec![],
        None,
        Some(-5.490),
        None,
    )]
}

fn lumsdaine_papell_rows() -> Vec<CriticalValueSurface> {
    vec![surface(
        TestFamily::LumsdainePapell,
        "det=constant_and_trend;break=both",
        vec![],
        Some(-6.49),
        Some(-6.82),
        Some(-7.34),
    )]
}

static TABLES: OnceLock<Vec<CriticalValueSurface>> = OnceLock::new();

/// Every bundled surface.
pub fn bundled_surfaces() -> &'static [CriticalValueSurface] {
    TABLES.get_or_init(|| {
        let mut all = Vec::new();
        all.extend(dickey_fuller(TestFamily::Adf));
        all.extend(dickey_fuller(TestFamily::Pp));
        all.extend(min_t_break_rows(TestFamily::ZivotAndrews));
        all.extend(min_t_break_rows(TestFamily::PerronIo));
        all.extend(min_t_break_rows(TestFamily::PerronAo));
        all.extend(lumsdaine_papell_rows());
        all.extend(clemente_rows(TestFamily::ClementeIo));
        all.extend(clemente_rows(TestFamily::ClementeAo));
        all.extend(johansen_no_break());
        all.extend(johansen_break_grids());
        all
    })
}
