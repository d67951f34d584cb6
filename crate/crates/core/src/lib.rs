//! Time-series econometrics for cointegration analysis.
//!
//! The crate covers the usual applied workflow for mixed I(0)/I(1) data:
//! descriptive statistics and distribution functions, augmented Dickey-Fuller
//! unit-root tests, VAR lag selection with Granger causality, OLS with robust
//! covariance estimators and residual diagnostics, the ARDL bounds test for
//! cointegration with long-run multipliers, and the restricted error-correction
//! model.
//!
//! Grid searches and Monte Carlo loops run on rayon when the `parallel`
//! feature is enabled (the default). Results never depend on scheduling: every
//! parallel map preserves input order, and simulated replications draw from
//! per-replication random streams.

pub mod ardl;
pub mod dataio;
pub mod diagnostics;
pub mod dist;
mod error;
pub mod linalg;
pub mod par;
pub mod regression;
pub mod report;
pub mod sim;
pub mod stats;
pub mod unit_root;
pub mod var;

pub use error::{Error, ErrorKind, Result};
