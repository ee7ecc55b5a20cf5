//! Time-series econometrics with structural breaks.
//!
//! The crate covers the full workflow for long-run demand studies on short
//! annual samples: a validated series container with break-dummy algebra, an
//! SVD-backed OLS engine with HAC diagnostics, a unit-root battery (ADF,
//! Phillips-Perron, known-break Perron, Zivot-Andrews, Lumsdaine-Papell,
//! Clemente-Montanes-Reyes), Johansen trace/max-eigenvalue cointegration
//! tests with exogenous break regressors, dynamic OLS estimation of long-run
//! elasticities, and a seeded Monte Carlo engine for critical values.

pub mod cointegration;
pub mod critical_values;
pub mod dols;
pub mod error;
pub mod regression;
pub mod series;
pub mod unit_root;

pub use error::{Error, Result};
pub use series::Series;
