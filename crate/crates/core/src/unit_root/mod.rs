//! Augmented Dickey-Fuller unit-root test with information-criterion lag
//! selection.
//!
//! The test regression is
//! `Δy_t = [c] + [δt] + ρ·y_{t−1} + Σ_{i=1..k} γ_i Δy_{t−i} + ε_t`
//! and the statistic is the t-ratio of ρ (null: unit root). The lag `k` is
//! chosen over `0..=max_lag` with every candidate estimated on the same
//! trimmed sample; the chosen regression is then re-estimated on the
//! largest sample available for that lag.
//!
//! p-values and critical values come from embedded Dickey-Fuller quantile
//! tables (see [`tables`]), interpolated linearly in `1/n` across sample
//! sizes and linearly on the probit scale across quantiles.

pub mod tables;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataio::{diff, Dataset, TimeSeries};
use crate::dist::{normal_cdf, normal_quantile};
use crate::par::{map_range, Exec};
use crate::regression::{fit_design, Covariance, Design, InfoCriterion, OlsFit, RegressionSpec, SeriesRef, Term};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum AdfDeterministic {
    #[serde(rename = "none")]
    None,
    #[default]
    #[serde(rename = "const", alias = "constant", alias = "c")]
    Constant,
    #[serde(rename = "trend", alias = "ct", alias = "constant_trend")]
    ConstantTrend,
}

impl AdfDeterministic {
    fn table_row(self) -> usize {
        match self {
            AdfDeterministic::None => 0,
            AdfDeterministic::Constant => 1,
            AdfDeterministic::ConstantTrend => 2,
        }
    }
}

impl FromStr for AdfDeterministic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "nc" | "n" => Ok(AdfDeterministic::None),
            "const" | "constant" | "c" => Ok(AdfDeterministic::Constant),
            "trend" | "ct" | "const_trend" | "constant_trend" => Ok(AdfDeterministic::ConstantTrend),
            other => Err(Error::InvalidSpec(format!("unknown deterministic case `{other}`"))),
        }
    }
}

impl fmt::Display for AdfDeterministic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdfDeterministic::None => "none",
            AdfDeterministic::Constant => "const",
            AdfDeterministic::ConstantTrend => "trend",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdfSpec {
    pub deterministic: AdfDeterministic,
    pub max_lag: usize,
    pub criterion: InfoCriterion,
}

impl Default for AdfSpec {
    fn default() -> Self {
        AdfSpec { deterministic: AdfDeterministic::Constant, max_lag: 8, criterion: InfoCriterion::Sic }
    }
}

impl AdfSpec {
    pub fn new(deterministic: AdfDeterministic, max_lag: usize, criterion: InfoCriterion) -> Self {
        AdfSpec { deterministic, max_lag, criterion }
    }
}

/// Significance levels reported by the test, in order.
pub const LEVELS: [f64; 3] = [0.01, 0.05, 0.10];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub chosen_lag: usize,
    pub p_value: f64,
    /// Critical values at 1%, 5%, 10%.
    pub critical_values: [f64; 3],
    /// Unit-root rejection at 1%, 5%, 10%.
    pub rejects: [bool; 3],
    pub durbin_watson: Option<f64>,
    pub n_effective: usize,
    pub deterministic: AdfDeterministic,
    /// Criterion value per candidate lag on the common sample.
    pub criterion_trace: Vec<f64>,
}

impl AdfResult {
    pub fn rejects_at_5(&self) -> bool {
        self.rejects[1]
    }
}

const Y: &str = "y";

fn candidate_spec(det: AdfDeterministic, lag: usize, sample_start: usize) -> RegressionSpec {
    let mut terms = vec![Term { series: SeriesRef::level(Y), lag: 1 }];
    terms.extend((1..=lag).map(|i| SeriesRef::diffed(Y).at(i)));
    RegressionSpec::new(SeriesRef::diffed(Y), terms)
        .with_intercept(det != AdfDeterministic::None)
        .with_trend(det == AdfDeterministic::ConstantTrend)
        .with_covariance(Covariance::Classical)
        .with_sample_start(sample_start)
}

fn rho_index(det: AdfDeterministic) -> usize {
    match det {
        AdfDeterministic::None => 0,
        AdfDeterministic::Constant => 1,
        AdfDeterministic::ConstantTrend => 2,
    }
}

pub fn adf_test(s: &TimeSeries, spec: &AdfSpec) -> Result<AdfResult> {
    adf_test_with(s, spec, Exec::default())
}

pub fn adf_test_with(s: &TimeSeries, spec: &AdfSpec, exec: Exec) -> Result<AdfResult> {
    let n = s.len();
    if n < spec.max_lag + 11 {
        return Err(Error::TooShort { needed: spec.max_lag + 11, got: n });
    }
    let data = Dataset::from_series(vec![s.clone().rename(Y)])?;
    let det = spec.deterministic;
    let common_start = spec.max_lag + 1;
    let trace: Vec<f64> = map_range(exec, spec.max_lag + 1, |lag| {
        let design = Design::build(&candidate_spec(det, lag, common_start), &data)?;
        fit_design(&design, Covariance::Classical).map(|f| spec.criterion.of(&f))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let chosen_lag = argmin_first(&trace);
    let fit = fit_design(&Design::build(&candidate_spec(det, chosen_lag, 0), &data)?, Covariance::Classical)?;
    Ok(finish(fit, det, chosen_lag, trace))
}

/// Index of the smallest value; ties go to the earliest index.
pub(crate) fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

fn finish(fit: OlsFit, det: AdfDeterministic, chosen_lag: usize, criterion_trace: Vec<f64>) -> AdfResult {
    let statistic = fit.t_stats[rho_index(det)];
    let n = fit.n_effective;
    let critical_values = LEVELS.map(|p| df_critical_value(det, n, p));
    AdfResult {
        statistic,
        chosen_lag,
        p_value: df_p_value(det, n, statistic),
        critical_values,
        rejects: critical_values.map(|c| statistic < c),
        durbin_watson: fit.durbin_watson,
        n_effective: n,
        deterministic: det,
        criterion_trace,
    }
}

/// Smallest `d ≤ max_d` whose `d`-th difference rejects a unit root at 5%.
pub fn integration_order(s: &TimeSeries, spec: &AdfSpec, max_d: usize) -> Result<usize> {
    for d in 0..=max_d {
        let series = if d == 0 { s.clone() } else { diff(s, d)? };
        if adf_test(&series, spec)?.rejects_at_5() {
            return Ok(d);
        }
    }
    Err(Error::Inconclusive { max_d })
}

/// Dickey-Fuller quantiles at sample size `n`, interpolated in `1/n`.
fn quantiles_at(det: AdfDeterministic, n: usize) -> [f64; tables::PROBS.len()] {
    let rows = &tables::QUANTILES[det.table_row()];
    let sizes = tables::SAMPLE_SIZES;
    let inv = 1.0 / n as f64;
    let last = sizes.len() - 1;
    let (i, w) = if n <= sizes[0] {
        (0, 0.0)
    } else if n >= sizes[last] {
        (last - 1, 1.0)
    } else {
        let j = sizes.iter().position(|&s| s > n).expect("bracketed") - 1;
        let (a, b) = (1.0 / sizes[j] as f64, 1.0 / sizes[j + 1] as f64);
        (j, (a - inv) / (a - b))
    };
    let mut q = [0.0; tables::PROBS.len()];
    for (k, v) in q.iter_mut().enumerate() {
        *v = rows[i][k] + w * (rows[i + 1][k] - rows[i][k]);
    }
    q
}

/// Left-tail p-value of a Dickey-Fuller statistic.
pub fn df_p_value(det: AdfDeterministic, n: usize, statistic: f64) -> f64 {
    if statistic.is_nan() {
        return f64::NAN;
    }
    let q = quantiles_at(det, n);
    let probs = tables::PROBS;
    let m = probs.len();
    let seg = if statistic <= q[0] {
        0
    } else if statistic >= q[m - 1] {
        m - 2
    } else {
        q.iter().position(|&v| v > statistic).expect("bracketed") - 1
    };
    let (z0, z1) = (normal_quantile(probs[seg]), normal_quantile(probs[seg + 1]));
    let t = (statistic - q[seg]) / (q[seg + 1] - q[seg]);
    normal_cdf(z0 + t * (z1 - z0)).clamp(0.0, 1.0)
}

/// Dickey-Fuller critical value at level `p` (one of the tabulated probabilities).
pub fn df_critical_value(det: AdfDeterministic, n: usize, p: f64) -> f64 {
    let k = tables::PROBS
        .iter()
        .position(|&q| (q - p).abs() < 1e-12)
        .expect("level must be a tabulated probability");
    quantiles_at(det, n)[k]
}
