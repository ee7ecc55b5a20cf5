//! Critical-value surfaces: bundled tables for every test family plus a
//! seeded, replicate-parallel Monte Carlo engine and an on-disk cache.

mod cache;
mod monte_carlo;
mod tables;

pub use cache::{surface_cache_load, surface_cache_store};
pub use monte_carlo::{monte_carlo_cv, McQuantileErrors, NullDgp, NullDgpSpec};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Test families that own a null distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    Adf,
    Pp,
    PerronAo,
    PerronIo,
    ZivotAndrews,
    LumsdainePapell,
    ClementeIo,
    ClementeAo,
    JohansenTrace,
    JohansenMax,
}

impl TestFamily {
    pub fn label(self) -> &'static str {
        match self {
            TestFamily::Adf => "adf",
            TestFamily::Pp => "pp",
            TestFamily::PerronAo => "perron_ao",
            TestFamily::PerronIo => "perron_io",
            TestFamily::ZivotAndrews => "zivot_andrews",
            TestFamily::LumsdainePapell => "lumsdaine_papell",
            TestFamily::ClementeIo => "clemente_io",
            TestFamily::ClementeAo => "clemente_ao",
            TestFamily::JohansenTrace => "johansen_trace",
            TestFamily::JohansenMax => "johansen_max",
        }
    }

    /// Trace statistics reject in the right tail; every unit-root family
    /// rejects in the left tail.
    pub fn right_tailed(self) -> bool {
        matches!(self, TestFamily::JohansenTrace | TestFamily::JohansenMax)
    }
}

/// Quantiles of a null distribution at the three conventional levels.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quantiles {
    pub p90: Option<f64>,
    pub p95: Option<f64>,
    pub p99: Option<f64>,
}

impl Quantiles {
    pub fn full(p90: f64, p95: f64, p99: f64) -> Self {
        Self {
            p90: Some(p90),
            p95: Some(p95),
            p99: Some(p99),
        }
    }

    /// Value at a confidence level in {0.90, 0.95, 0.99}.
    pub fn at(&self, level: f64) -> Option<f64> {
        if (level - 0.90).abs() < 1e-9 {
            self.p90
        } else if (level - 0.95).abs() < 1e-9 {
            self.p95
        } else if (level - 0.99).abs() < 1e-9 {
            self.p99
        } else {
            None
        }
    }

    /// Monotonicity across levels: magnitudes grow with confidence for
    /// left-tail tests; values grow for right-tail tests.
    pub fn is_monotone(&self, right_tailed: bool) -> bool {
        let seq: Vec<f64> = [self.p90, self.p95, self.p99]
            .into_iter()
            .flatten()
            .collect();
        seq.windows(2).all(|w| {
            if right_tailed {
                w[1] >= w[0]
            } else {
                w[1].abs() >= w[0].abs()
            }
        })
    }
}

/// Finite or asymptotic table index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSize {
    Finite(usize),
    Asymptotic,
}

/// Where a surface came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    BundledTable,
    MonteCarlo { seed: u64, replications: usize },
}

/// Quantiles of a test statistic's null distribution, indexed by model
/// specification, sample size, and break fraction(s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueSurface {
    pub test_family: TestFamily,
    pub spec_key: String,
    pub sample_size: SampleSize,
    pub break_fractions: Vec<f64>,
    pub quantiles: Quantiles,
    pub provenance: Provenance,
    /// Monte Carlo standard errors of the quantiles, when simulated.
    pub quantile_errors: Option<McQuantileErrors>,
}

/// A successful critical-value lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct CvLookup {
    pub value: f64,
    pub provenance: Provenance,
    /// Set when the asymptotic table is applied to a small sample.
    pub warning: Option<String>,
}

/// Break fractions match a bundled surface within this absolute slack.
const FRACTION_SLACK: f64 = 0.03;

/// Asymptotic tables apply from this sample size upward.
const MIN_ASYMPTOTIC_T: usize = 30;

/// Sample sizes below this trigger a small-sample warning.
const SMALL_SAMPLE_WARNING_T: usize = 50;

/// An empty fraction list on a bundled surface matches any request: the
/// null distributions of the search-based tests do not depend on where the
/// reported break lands.
fn fractions_match(surface: &[f64], requested: &[f64]) -> bool {
    surface.is_empty()
        || surface.len() == requested.len()
            && surface
                .iter()
                .zip(requested)
                .all(|(x, y)| (x - y).abs() <= FRACTION_SLACK)
}

/// Looks up a critical value from the bundled tables.
///
/// Returns `NotTabulated` when no bundled surface covers the request; the
/// caller may then fall back to [`monte_carlo_cv`].
pub fn lookup(
    family: TestFamily,
    spec_key: &str,
    nobs: usize,
    break_fractions: &[f64],
    level: f64,
) -> Result<CvLookup> {
    let request = format!(
        "{} [{}] T={} fractions={:?} level={}",
        family.label(),
        spec_key,
        nobs,
        break_fractions,
        level
    );
    if nobs < MIN_ASYMPTOTIC_T {
        return Err(Error::NotTabulated { request });
    }
    for surface in tables::bundled_surfaces() {
        if surface.test_family == family
            && surface.spec_key == spec_key
            && fractions_match(&surface.break_fractions, break_fractions)
        {
            if let Some(value) = surface.quantiles.at(level) {
                let warning = (nobs < SMALL_SAMPLE_WARNING_T).then(|| {
                    format!("asymptotic critical values applied to a sample of {nobs} observations")
                });
                return Ok(CvLookup {
                    value,
                    provenance: surface.provenance,
                    warning,
                });
            }
        }
    }
    Err(Error::NotTabulated { request })
}

/// Full bundled quantile set for a request, when one exists.
pub fn lookup_quantiles(
    family: TestFamily,
    spec_key: &str,
    nobs: usize,
    break_fractions: &[f64],
) -> Quantiles {
    if nobs < MIN_ASYMPTOTIC_T {
        return Quantiles::default();
    }
    for surface in tables::bundled_surfaces() {
        if surface.test_family == family
            && surface.spec_key == spec_key
            && fractions_match(&surface.break_fractions, break_fractions)
        {
            return surface.quantiles;
        }
    }
    Quantiles::default()
}

/// Canonical spec-key encoding for univariate unit-root surfaces.
pub fn unit_root_spec_key(
    det: crate::series::DeterministicSpec,
    break_kind: Option<crate::series::BreakKind>,
) -> String {
    match break_kind {
        None => format!("det={}", det.label()),
        Some(kind) => format!("det={};break={}", det.label(), kind.label()),
    }
}

/// Canonical spec-key encoding for Johansen surfaces.
pub fn johansen_spec_key(n: usize, r: usize, n_breaks: usize) -> String {
    format!("n={n};r={r};breaks={n_breaks}")
}
