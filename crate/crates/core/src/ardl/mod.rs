//! ARDL modelling in unrestricted error-correction form: lag-order search,
//! the bounds test for a level relationship, long-run multipliers and the
//! restricted error-correction model.
//!
//! For orders `(p, q_1, …, q_m)` the estimated equation is
//!
//! ```text
//! Δy_t = [c] + [δt] + Σ_{i=1..p} γ_i Δy_{t−i} + Σ_j Σ_{i=0..q_j} η_ji Δx_{j,t−i}
//!        + φ_y y_{t−1} + Σ_j φ_j x_{j,t−1} + Σ_f φ_f f_{t−1} + ε_t
//! ```
//!
//! where `x_j` are the dynamic regressors and `f` the fixed regressors
//! (typically event dummies), which enter the level block only. The
//! deterministic terms follow the five cases of the bounds-test literature.

mod bounds;
mod ecm;
mod long_run;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub(crate) use bounds::percent;
pub use bounds::{bounds_test, bounds_verdict, BoundsOutcome, BoundsRow, BoundsTable, BoundsVerdict, LevelVerdict};
pub use ecm::{ect_from_levels, ecm_fit, EcmFit};
pub use long_run::{long_run, long_run_multipliers, LongRunMultiplier, LongRunMultipliers};

use crate::dataio::Dataset;
use crate::par::Exec;
use crate::regression::{ols_fit, Bandwidth, Covariance, InfoCriterion, OlsFit, RegressionSpec, SeriesRef, Term};
use crate::{Error, Result};

/// Deterministic specification, numbered as in the bounds-test tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum BoundsCase {
    /// No intercept, no trend.
    #[default]
    I,
    /// Intercept restricted to the level relationship.
    II,
    /// Unrestricted intercept.
    III,
    /// Unrestricted intercept, trend restricted to the level relationship.
    IV,
    /// Unrestricted intercept and trend.
    V,
}

impl BoundsCase {
    pub const ALL: [BoundsCase; 5] = [BoundsCase::I, BoundsCase::II, BoundsCase::III, BoundsCase::IV, BoundsCase::V];

    pub fn has_intercept(self) -> bool {
        self != BoundsCase::I
    }

    pub fn has_trend(self) -> bool {
        matches!(self, BoundsCase::IV | BoundsCase::V)
    }

    /// Whether the error-correction model keeps its own intercept.
    pub(crate) fn ecm_intercept(self) -> bool {
        matches!(self, BoundsCase::III | BoundsCase::IV | BoundsCase::V)
    }
}

impl fmt::Display for BoundsCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundsCase::I => "I",
            BoundsCase::II => "II",
            BoundsCase::III => "III",
            BoundsCase::IV => "IV",
            BoundsCase::V => "V",
        })
    }
}

impl FromStr for BoundsCase {
    type Err = Error;

    /// Roman or arabic numeral, optionally prefixed by `case`/`case_`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let t = t.strip_prefix("CASE").unwrap_or(&t).trim_start_matches(['_', ' ', '-']);
        match t {
            "I" | "1" => Ok(BoundsCase::I),
            "II" | "2" => Ok(BoundsCase::II),
            "III" | "3" => Ok(BoundsCase::III),
            "IV" | "4" => Ok(BoundsCase::IV),
            "V" | "5" => Ok(BoundsCase::V),
            _ => Err(Error::InvalidSpec(format!("unknown bounds case `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicRegressor {
    pub name: String,
    pub max_lag: usize,
}

fn default_covariance() -> Covariance {
    Covariance::Hac(Bandwidth::Auto)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArdlSpec {
    pub dependent: String,
    /// Largest lag of the differenced dependent; the search starts at 1.
    pub max_p: usize,
    pub regressors: Vec<DynamicRegressor>,
    #[serde(default)]
    pub fixed: Vec<String>,
    #[serde(default)]
    pub case: BoundsCase,
    #[serde(default)]
    pub criterion: InfoCriterion,
    #[serde(default = "default_covariance")]
    pub covariance: Covariance,
}

impl ArdlSpec {
    pub fn new(dependent: impl Into<String>, max_p: usize) -> Self {
        ArdlSpec {
            dependent: dependent.into(),
            max_p,
            regressors: Vec::new(),
            fixed: Vec::new(),
            case: BoundsCase::I,
            criterion: InfoCriterion::Sic,
            covariance: default_covariance(),
        }
    }

    pub fn regressor(mut self, name: impl Into<String>, max_lag: usize) -> Self {
        self.regressors.push(DynamicRegressor { name: name.into(), max_lag });
        self
    }

    pub fn fixed(mut self, name: impl Into<String>) -> Self {
        self.fixed.push(name.into());
        self
    }

    pub fn with_case(mut self, case: BoundsCase) -> Self {
        self.case = case;
        self
    }

    pub fn with_criterion(mut self, criterion: InfoCriterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn with_covariance(mut self, covariance: Covariance) -> Self {
        self.covariance = covariance;
        self
    }

    /// The same model with every maximum lag pinned to `orders`, so that
    /// the grid holds exactly one candidate.
    pub fn with_orders(&self, orders: &ArdlOrders) -> ArdlSpec {
        let mut s = self.clone();
        s.max_p = orders.p;
        for (r, q) in s.regressors.iter_mut().zip(&orders.q) {
            r.max_lag = *q;
        }
        s
    }

    /// Level-block variables in order: dependent, dynamic, fixed.
    pub fn level_variables(&self) -> Vec<String> {
        std::iter::once(self.dependent.clone())
            .chain(self.regressors.iter().map(|r| r.name.clone()))
            .chain(self.fixed.iter().cloned())
            .collect()
    }

    /// Number of level regressors besides the dependent.
    pub fn k(&self) -> usize {
        self.regressors.len() + self.fixed.len()
    }

    /// Number of candidate lag combinations, `max_p · Π (max_lag_j + 1)`.
    pub fn grid_size(&self) -> usize {
        self.max_p * self.regressors.iter().map(|r| r.max_lag + 1).product::<usize>()
    }

    pub fn validate(&self) -> Result<()> {
        if self.regressors.is_empty() {
            return Err(Error::InvalidSpec("ARDL needs at least one dynamic regressor".into()));
        }
        if self.max_p == 0 {
            return Err(Error::EmptyGrid);
        }
        let vars = self.level_variables();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidSpec(format!("`{v}` appears twice in the ARDL specification")));
            }
        }
        Ok(())
    }

    /// Largest lag any term reaches; the first usable row of differenced
    /// terms at that lag.
    fn max_offset(&self) -> usize {
        self.regressors.iter().map(|r| r.max_lag).chain([self.max_p]).max().unwrap_or(0) + 1
    }

    fn level_terms(&self) -> Vec<Term> {
        self.level_variables().into_iter().map(|v| SeriesRef::level(v).at(1)).collect()
    }

    /// Regression for the given orders, short-run terms first.
    pub fn regression(&self, orders: &ArdlOrders) -> RegressionSpec {
        let mut terms: Vec<Term> = (1..=orders.p).map(|i| SeriesRef::diffed(self.dependent.clone()).at(i)).collect();
        for (r, &q) in self.regressors.iter().zip(&orders.q) {
            terms.extend((0..=q).map(|i| SeriesRef::diffed(r.name.clone()).at(i)));
        }
        terms.extend(self.level_terms());
        RegressionSpec::new(SeriesRef::diffed(self.dependent.clone()), terms)
            .with_intercept(self.case.has_intercept())
            .with_trend(self.case.has_trend())
            .with_covariance(self.covariance)
    }

    /// Static levels regression of the dependent on the other level
    /// variables; its residuals are the equilibrium errors.
    pub fn levels_regression(&self) -> RegressionSpec {
        let terms = self.level_variables()[1..].iter().map(|v| SeriesRef::level(v.clone()).at(0)).collect();
        RegressionSpec::new(SeriesRef::level(self.dependent.clone()), terms)
            .with_intercept(self.case.has_intercept())
            .with_trend(self.case.has_trend())
            .with_covariance(self.covariance)
    }
}

/// Lag orders `(p, q_1, …, q_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArdlOrders {
    pub p: usize,
    pub q: Vec<usize>,
}

impl ArdlOrders {
    pub fn total(&self) -> usize {
        self.p + self.q.iter().sum::<usize>()
    }
}

impl fmt::Display for ArdlOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ARDL({}", self.p)?;
        for q in &self.q {
            write!(f, ",{q}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArdlFit {
    pub spec: ArdlSpec,
    pub orders: ArdlOrders,
    /// The winning model re-estimated on its largest available sample.
    pub fit: OlsFit,
    #[serde(skip)]
    pub regression: RegressionSpec,
    /// Criterion of every candidate on the common search sample, in
    /// enumeration order (see [`ArdlFit::trace_orders`]); `inf` marks a
    /// rank-deficient candidate.
    pub criterion_trace: Vec<f64>,
    pub criterion_value: f64,
    pub n_search: usize,
}

impl ArdlFit {
    /// Lag orders of trace entry `index`: `p` varies slowest, the last
    /// regressor fastest.
    pub fn trace_orders(&self, index: usize) -> ArdlOrders {
        search::decode(&self.spec, index)
    }

    /// Positions of the level-block coefficients in `fit`, dependent first.
    pub fn level_indices(&self) -> Vec<usize> {
        self.spec
            .level_variables()
            .iter()
            .map(|v| self.fit.position(&SeriesRef::level(v.clone()).at(1).to_string()).expect("level term present"))
            .collect()
    }

    /// `(φ, se)` of the level term of `variable`.
    pub fn phi(&self, variable: &str) -> Option<(f64, f64)> {
        let j = self.fit.position(&SeriesRef::level(variable).at(1).to_string())?;
        Some((self.fit.coefficients[j], self.fit.std_errors[j]))
    }

    /// The selected model as a single-candidate specification.
    pub fn selected_spec(&self) -> ArdlSpec {
        self.spec.with_orders(&self.orders)
    }
}

pub fn ardl_search(spec: &ArdlSpec, data: &Dataset) -> Result<ArdlFit> {
    ardl_search_with(spec, data, Exec::default())
}

pub fn ardl_search_with(spec: &ArdlSpec, data: &Dataset, exec: Exec) -> Result<ArdlFit> {
    spec.validate()?;
    let outcome = search::run(spec, data, exec)?;
    let orders = search::decode(spec, outcome.best);
    let regression = spec.regression(&orders);
    let fit = ols_fit(&regression, data)?;
    Ok(ArdlFit {
        spec: spec.clone(),
        orders,
        fit,
        regression,
        criterion_value: outcome.trace[outcome.best],
        criterion_trace: outcome.trace,
        n_search: outcome.n,
    })
}

/// Fits the model at fixed orders, without searching.
pub fn ardl_fit(spec: &ArdlSpec, orders: &ArdlOrders, data: &Dataset) -> Result<ArdlFit> {
    if orders.q.len() != spec.regressors.len() {
        return Err(Error::InvalidSpec("one lag order per dynamic regressor required".into()));
    }
    ardl_search(&spec.with_orders(orders), data)
}
