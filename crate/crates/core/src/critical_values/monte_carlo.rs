//! Seeded Monte Carlo simulation of null distributions. Every replicate
//! draws from its own counter-derived random stream, so results are
//! bitwise-identical regardless of how work is scheduled across threads.

use super::{CriticalValueSurface, Provenance, Quantiles, SampleSize, TestFamily};
use crate::cointegration::{johansen_test, VarSpec};
use crate::error::{Error, Result};
use crate::series::{BreakDate, BreakKind, Column, DeterministicSpec, Series};
use crate::unit_root::{
    adf, clemente, lumsdaine_papell, perron_known_break, phillips_perron, zivot_andrews,
    BreakStyle, ClementeVariant, LagSelection, UnitRootModelSpec,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Monte Carlo standard errors attached to simulated quantiles.
pub type McQuantileErrors = Quantiles;

/// Null data-generating processes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NullDgp {
    RandomWalk,
    RandomWalkWithDrift { drift: f64 },
    /// A system with `n - rank` independent stochastic trends; the trace
    /// null of rank r over n variables is simulated as rank 0 over n - r.
    VarUnitRoot { n: usize, rank: usize },
}

/// A fully specified null simulation: process, sample size, and the break
/// fractions at which dummies are constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct NullDgpSpec {
    pub process: NullDgp,
    pub sample_size: usize,
    pub break_fractions: Vec<f64>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream for one replicate, derived from (seed, replicate).
fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(replicate)))
}

pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let a: f64 = rng.gen_range(1e-300..1.0);
    let b: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * a.ln()).sqrt() * b.cos()
}

fn simulate_walk(rng: &mut ChaCha8Rng, len: usize, drift: f64) -> Series {
    let mut level = 0.0;
    let values = (0..len)
        .map(|_| {
            level += drift + standard_normal(rng);
            level
        })
        .collect();
    Series::new("sim", 1, values).expect("simulated series is finite")
}

/// Parses the canonical unit-root spec key back into its components.
fn parse_spec_key(spec_key: &str) -> Result<(DeterministicSpec, Option<BreakKind>)> {
    let mut det = None;
    let mut kind = None;
    for part in spec_key.split(';') {
        if let Some(v) = part.strip_prefix("det=") {
            det = Some(match v {
                "none" => DeterministicSpec::None,
                "constant" => DeterministicSpec::Constant,
                "constant_and_trend" => DeterministicSpec::ConstantAndTrend,
                _ => {
                    return Err(Error::InfeasibleSpec {
                        reason: format!("unknown deterministic spec `{v}`"),
                    })
                }
            });
        } else if let Some(v) = part.strip_prefix("break=") {
            kind = Some(match v {
                "intercept" => BreakKind::Intercept,
                "trend" => BreakKind::Trend,
                "both" => BreakKind::Both,
                _ => {
                    return Err(Error::InfeasibleSpec {
                        reason: format!("unknown break kind `{v}`"),
                    })
                }
            });
        }
    }
    det.map(|d| (d, kind)).ok_or(Error::InfeasibleSpec {
        reason: format!("spec key `{spec_key}` has no deterministic component"),
    })
}

const SEARCH_TRIM: f64 = 0.10;

fn break_date_at(fraction: f64, len: usize) -> Result<BreakDate> {
    let period = (fraction * len as f64).round() as i64;
    if period < 2 || period as usize + 1 > len {
        return Err(Error::InfeasibleSpec {
            reason: format!("break fraction {fraction} falls outside the sample interior"),
        });
    }
    Ok(BreakDate {
        year: period as i32,
        fraction: period as f64 / len as f64,
    })
}

/// Runs the exact test operation for one simulated replicate and returns
/// the test statistic.
fn replicate_statistic(
    family: TestFamily,
    spec_key: &str,
    dgp: &NullDgpSpec,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let len = dgp.sample_size;
    let drift = match dgp.process {
        NullDgp::RandomWalk => 0.0,
        NullDgp::RandomWalkWithDrift { drift } => drift,
        NullDgp::VarUnitRoot { .. } => 0.0,
    };
    match family {
        TestFamily::Adf => {
            let (det, _) = parse_spec_key(spec_key)?;
            let s = simulate_walk(rng, len, drift);
            Ok(adf(&s, det, 0, LagSelection::Fixed(0))?.statistic)
        }
        TestFamily::Pp => {
            let (det, _) = parse_spec_key(spec_key)?;
            let s = simulate_walk(rng, len, drift);
            Ok(phillips_perron(&s, det, None)?.statistic)
        }
        TestFamily::PerronAo | TestFamily::PerronIo => {
            let (det, kind) = parse_spec_key(spec_key)?;
            let kind = kind.ok_or(Error::InfeasibleSpec {
                reason: "known-break family needs a break kind in the spec key".into(),
            })?;
            let [fraction] = dgp.break_fractions[..] else {
                return Err(Error::InfeasibleSpec {
                    reason: "known-break family needs exactly one break fraction".into(),
                });
            };
            let s = simulate_walk(rng, len, drift);
            let date = BreakDate::for_series(break_date_at(fraction, len)?.year, &s)?;
            let style = if family == TestFamily::PerronAo {
                BreakStyle::Ao
            } else {
                BreakStyle::Io
            };
            let spec =
                UnitRootModelSpec::with_break(det, style, kind, LagSelection::Fixed(0), 0);
            Ok(perron_known_break(&s, &spec, date)?.statistic)
        }
        TestFamily::ZivotAndrews => {
            let (det, kind) = parse_spec_key(spec_key)?;
            let kind = kind.ok_or(Error::InfeasibleSpec {
                reason: "endogenous-break family needs a break kind in the spec key".into(),
            })?;
            let s = simulate_walk(rng, len, drift);
            let spec = UnitRootModelSpec::with_break(
                det,
                BreakStyle::Io,
                kind,
                LagSelection::Fixed(0),
                0,
            );
            Ok(zivot_andrews(&s, &spec, SEARCH_TRIM)?.statistic)
        }
        TestFamily::LumsdainePapell => {
            let s = simulate_walk(rng, len, drift);
            Ok(lumsdaine_papell(&s, SEARCH_TRIM, 0, LagSelection::Fixed(0))?.statistic)
        }
        TestFamily::ClementeIo | TestFamily::ClementeAo => {
            let variant = if family == TestFamily::ClementeIo {
                ClementeVariant::Io
            } else {
                ClementeVariant::Ao
            };
            let s = simulate_walk(rng, len, drift);
            Ok(clemente(&s, variant, SEARCH_TRIM, 0, LagSelection::Fixed(0))?.statistic)
        }
        TestFamily::JohansenTrace | TestFamily::JohansenMax => {
            let NullDgp::VarUnitRoot { n, rank } = dgp.process else {
                return Err(Error::InfeasibleSpec {
                    reason: "Johansen families need a VAR null process".into(),
                });
            };
            let dims = n - rank;
            if dims == 0 {
                return Err(Error::InfeasibleSpec {
                    reason: "null rank must be below the system dimension".into(),
                });
            }
            // The standard unrestricted-constant trace tables are derived
            // for a drifted system; simulate the common trends with drift.
            let endogenous: Vec<Series> =
                (0..dims).map(|_| simulate_walk(rng, len, 1.0)).collect();
            let mut exogenous = Vec::new();
            for fraction in &dgp.break_fractions {
                let date = break_date_at(*fraction, len)?;
                let period = date.year as usize;
                let du: Vec<f64> = (1..=len)
                    .map(|t| if t > period { 1.0 } else { 0.0 })
                    .collect();
                let dt: Vec<f64> = (1..=len)
                    .map(|t| if t > period { (t - period) as f64 } else { 0.0 })
                    .collect();
                exogenous.push(Column::new(format!("du_{period}"), du));
                exogenous.push(Column::new(format!("dt_{period}"), dt));
            }
            let spec = VarSpec {
                endogenous,
                lag_order: 1,
                deterministic: DeterministicSpec::Constant,
                exogenous,
                break_fractions: vec![],
            };
            let out = johansen_test(&spec)?;
            if family == TestFamily::JohansenTrace {
                Ok(out.trace[0].statistic)
            } else {
                Ok(out.max_eigen[0].statistic)
            }
        }
    }
}

fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let idx = ((p * n as f64).ceil() as usize).clamp(1, n) - 1;
    sorted[idx]
}

/// Quantile standard error from the binomial variance and a finite
/// difference density estimate.
fn quantile_se(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len() as f64;
    let h = (0.5 * p.min(1.0 - p)).min(0.01).max(1.0 / n);
    let upper = empirical_quantile(sorted, (p + h).min(1.0));
    let lower = empirical_quantile(sorted, (p - h).max(0.0));
    let density = 2.0 * h / (upper - lower).abs().max(1e-12);
    (p * (1.0 - p) / n).sqrt() / density
}

/// Simulates the null distribution of a test family and extracts the 90%,
/// 95%, and 99% critical values with Monte Carlo standard errors. Results
/// are fully reproducible given (seed, replications, sample size) and do
/// not depend on the number of worker threads.
pub fn monte_carlo_cv(
    family: TestFamily,
    spec_key: &str,
    dgp: &NullDgpSpec,
    replications: usize,
    seed: u64,
) -> Result<CriticalValueSurface> {
    if replications < 1000 {
        return Err(Error::InfeasibleSpec {
            reason: format!("needs at least 1000 replications, got {replications}"),
        });
    }
    if dgp.sample_size < 20 {
        return Err(Error::InfeasibleSpec {
            reason: "null samples shorter than 20 observations are not supported".into(),
        });
    }
    for fraction in &dgp.break_fractions {
        if !(SEARCH_TRIM..=1.0 - SEARCH_TRIM).contains(fraction) {
            return Err(Error::InfeasibleSpec {
                reason: format!("break fraction {fraction} outside the trimmed interior"),
            });
        }
    }

    let mut stats = (0..replications as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, rep);
            replicate_statistic(family, spec_key, dgp, &mut rng)
        })
        .collect::<Result<Vec<f64>>>()?;
    stats.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let (p90, p95, p99) = if family.right_tailed() {
        (0.90, 0.95, 0.99)
    } else {
        (0.10, 0.05, 0.01)
    };
    let quantiles = Quantiles::full(
        empirical_quantile(&stats, p90),
        empirical_quantile(&stats, p95),
        empirical_quantile(&stats, p99),
    );
    if !quantiles.is_monotone(family.right_tailed()) {
        return Err(Error::NumericalFailure(format!(
            "simulated quantiles are not monotone across levels: {quantiles:?}"
        )));
    }
    let errors = Quantiles::full(
        quantile_se(&stats, p90),
        quantile_se(&stats, p95),
        quantile_se(&stats, p99),
    );

    Ok(CriticalValueSurface {
        test_family: family,
        spec_key: spec_key.to_string(),
        sample_size: SampleSize::Finite(dgp.sample_size),
        break_fractions: dgp.break_fractions.clone(),
        quantiles,
        provenance: Provenance::MonteCarlo {
            seed,
            replications,
        },
        quantile_errors: Some(errors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical_values::unit_root_spec_key;

    fn adf_none_dgp(len: usize) -> NullDgpSpec {
        NullDgpSpec {
            process: NullDgp::RandomWalk,
            sample_size: len,
            break_fractions: vec![],
        }
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let key = unit_root_spec_key(DeterministicSpec::None, None);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                monte_carlo_cv(TestFamily::Adf, &key, &adf_none_dgp(100), 1000, 42).unwrap()
            })
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.quantiles.p95.unwrap().to_bits(), b.quantiles.p95.unwrap().to_bits());
        assert_eq!(a.quantiles.p99.unwrap().to_bits(), b.quantiles.p99.unwrap().to_bits());
    }

    #[test]
    fn adf_quantile_near_tabulated_value() {
        let key = unit_root_spec_key(DeterministicSpec::None, None);
        let surface =
            monte_carlo_cv(TestFamily::Adf, &key, &adf_none_dgp(400), 8000, 7).unwrap();
        let cv = surface.quantiles.p95.unwrap();
        assert!((cv - (-1.948)).abs() < 0.06, "5% quantile {cv}");
        assert!(surface.quantile_errors.is_some());
    }

    #[test]
    fn doubling_replications_shrinks_standard_error() {
        let key = unit_root_spec_key(DeterministicSpec::Constant, None);
        let small =
            monte_carlo_cv(TestFamily::Adf, &key, &adf_none_dgp(200), 2000, 11).unwrap();
        let large =
            monte_carlo_cv(TestFamily::Adf, &key, &adf_none_dgp(200), 8000, 11).unwrap();
        let se_small = small.quantile_errors.unwrap().p95.unwrap();
        let se_large = large.quantile_errors.unwrap().p95.unwrap();
        // Quadrupling replications should halve the error within slack.
        assert!(
            se_large < se_small / 2.0 * 1.5,
            "se {se_small} -> {se_large} did not shrink as expected"
        );
    }

    #[test]
    fn replication_floor_enforced() {
        let key = unit_root_spec_key(DeterministicSpec::None, None);
        assert!(matches!(
            monte_carlo_cv(TestFamily::Adf, &key, &adf_none_dgp(100), 500, 1),
            Err(Error::InfeasibleSpec { .. })
        ));
    }

    #[test]
    fn break_fraction_outside_trim_rejected() {
        let key = unit_root_spec_key(DeterministicSpec::Constant, Some(BreakKind::Intercept));
        let dgp = NullDgpSpec {
            process: NullDgp::RandomWalk,
            sample_size: 100,
            break_fractions: vec![0.02],
        };
        assert!(matches!(
            monte_carlo_cv(TestFamily::PerronIo, &key, &dgp, 1000, 1),
            Err(Error::InfeasibleSpec { .. })
        ));
    }

    #[test]
    fn johansen_trace_null_large_system_near_published_value() {
        // Four-variable trace null at r = 0; the published 95% value is
        // close to 47.9.
        let dgp = NullDgpSpec {
            process: NullDgp::VarUnitRoot { n: 4, rank: 0 },
            sample_size: 1000,
            break_fractions: vec![],
        };
        let surface = monte_carlo_cv(
            TestFamily::JohansenTrace,
            &crate::critical_values::johansen_spec_key(4, 0, 0),
            &dgp,
            10_000,
            29,
        )
        .unwrap();
        let cv = surface.quantiles.p95.unwrap();
        assert!((cv - 47.9).abs() < 1.0, "95% trace quantile {cv}");
    }

    #[test]
    fn johansen_trace_null_matches_published_scale() {
        let dgp = NullDgpSpec {
            process: NullDgp::VarUnitRoot { n: 2, rank: 0 },
            sample_size: 300,
            break_fractions: vec![],
        };
        let surface = monte_carlo_cv(
            TestFamily::JohansenTrace,
            &crate::critical_values::johansen_spec_key(2, 0, 0),
            &dgp,
            4000,
            3,
        )
        .unwrap();
        // Published 95% value for n - r = 2 with unrestricted constant.
        let cv = surface.quantiles.p95.unwrap();
        assert!((cv - 15.41).abs() < 1.2, "95% trace quantile {cv}");
    }
}
