use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::ardl::BoundsCase;
use crate::dataio::Frequency;
use crate::diagnostics::CusumLevel;
use crate::regression::{Covariance, InfoCriterion};
use crate::unit_root::AdfDeterministic;
use crate::{Error, Result};

use super::Stage;

/// Everything a pipeline run needs besides the data itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Input CSV; relative paths resolve against the config file's directory.
    #[serde(default)]
    pub data: Option<PathBuf>,
    #[serde(default)]
    pub frequency: Frequency,
    pub dependent: String,
    pub regressors: Vec<String>,
    /// Regressors that enter only in levels, such as event dummies.
    #[serde(default)]
    pub fixed: Vec<String>,
    /// Event calendar used to build any fixed regressor missing from the data.
    #[serde(default)]
    pub events: Option<PathBuf>,
    /// Stages to run; all stages of the frequency's path when absent.
    #[serde(default)]
    pub stages: Option<Vec<Stage>>,
    #[serde(default)]
    pub adf: AdfOptions,
    #[serde(default)]
    pub var: VarOptions,
    #[serde(default)]
    pub ols: OlsOptions,
    #[serde(default)]
    pub ardl: ArdlOptions,
    #[serde(default)]
    pub diagnostics: DiagnosticsOptions,
    #[serde(default)]
    pub cusum: CusumOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdfOptions {
    pub deterministic: AdfDeterministic,
    pub max_lag: usize,
    pub criterion: InfoCriterion,
}

impl Default for AdfOptions {
    fn default() -> Self {
        AdfOptions { deterministic: AdfDeterministic::Constant, max_lag: 8, criterion: InfoCriterion::Sic }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VarOptions {
    pub max_lag: usize,
    /// VAR orders for Granger tests and estimates; when absent, the orders
    /// picked by AIC and SC in lag selection.
    pub lags: Option<Vec<usize>>,
    /// Drop each series' own lag of this order from its equation.
    pub exclude_own_lag: Option<usize>,
}

impl Default for VarOptions {
    fn default() -> Self {
        VarOptions { max_lag: 8, lags: None, exclude_own_lag: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OlsOptions {
    pub intercept: bool,
    pub covariance: Covariance,
}

impl Default for OlsOptions {
    fn default() -> Self {
        OlsOptions { intercept: true, covariance: Covariance::Classical }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArdlOptions {
    pub max_p: usize,
    /// Maximum lag for every dynamic regressor.
    pub max_q: usize,
    pub case: BoundsCase,
    pub criterion: InfoCriterion,
    pub covariance: Covariance,
    pub bounds_table: Option<PathBuf>,
}

impl Default for ArdlOptions {
    fn default() -> Self {
        ArdlOptions {
            max_p: 4,
            max_q: 4,
            case: BoundsCase::I,
            criterion: InfoCriterion::Aic,
            covariance: Covariance::Hac(crate::regression::Bandwidth::Auto),
            bounds_table: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsOptions {
    pub bg_lags: usize,
    pub bpg: bool,
    pub white: bool,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        DiagnosticsOptions { bg_lags: 2, bpg: true, white: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CusumOptions {
    pub level: CusumLevel,
}

impl PipelineConfig {
    pub fn new(dependent: impl Into<String>, regressors: Vec<String>) -> Self {
        PipelineConfig {
            data: None,
            frequency: Frequency::Monthly,
            dependent: dependent.into(),
            regressors,
            fixed: Vec::new(),
            events: None,
            stages: None,
            adf: AdfOptions::default(),
            var: VarOptions::default(),
            ols: OlsOptions::default(),
            ardl: ArdlOptions::default(),
            diagnostics: DiagnosticsOptions::default(),
            cusum: CusumOptions::default(),
        }
    }

    /// Dependent, dynamic and fixed variables, in that order.
    pub fn variables(&self) -> Vec<String> {
        std::iter::once(self.dependent.clone()).chain(self.regressors.iter().cloned()).chain(self.fixed.iter().cloned()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.regressors.is_empty() {
            return Err(Error::InvalidSpec("config needs at least one regressor".into()));
        }
        let vars = self.variables();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidSpec(format!("`{v}` is listed twice in the config")));
            }
        }
        if self.ardl.max_p == 0 {
            return Err(Error::InvalidSpec("ardl.max_p must be at least 1".into()));
        }
        if self.var.lags.as_ref().is_some_and(|l| l.contains(&0)) {
            return Err(Error::InvalidSpec("var.lags must be positive".into()));
        }
        Ok(())
    }
}
