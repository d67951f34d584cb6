//! Residual and stability diagnostics.
//!
//! The LM tests all take the form `n·R²` of an auxiliary regression and are
//! referred to χ². A fit with identically zero residuals yields `LM = 0,
//! p = 1` rather than an error.

mod cusum;

use serde::Serialize;

pub use cusum::{cusum, cusum_with, CusumLevel, CusumResult};

use crate::dataio::Dataset;
use crate::dist::chi2_sf;
use crate::linalg::Matrix;
use crate::regression::{least_squares, Design, OlsFit, RegressionSpec};
use crate::{Error, Result};

/// `Σ(e_t − e_{t−1})² / Σe_t²`.
pub fn durbin_watson(residuals: &[f64]) -> Result<f64> {
    if residuals.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: residuals.len() });
    }
    let den: f64 = residuals.iter().map(|e| e * e).sum();
    if den == 0.0 {
        return Err(Error::ZeroResiduals);
    }
    let num: f64 = residuals.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    Ok(num / den)
}

/// An LM statistic with its χ² degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LmTest {
    pub statistic: f64,
    pub df: usize,
    pub p: f64,
}

impl LmTest {
    fn degenerate(df: usize) -> Self {
        LmTest { statistic: 0.0, df, p: 1.0 }
    }

    fn new(statistic: f64, df: usize) -> Self {
        let statistic = statistic.max(0.0);
        LmTest { statistic, df, p: chi2_sf(statistic, df) }
    }
}

fn all_zero(e: &[f64]) -> bool {
    e.iter().all(|v| *v == 0.0)
}

/// Breusch-Godfrey serial correlation LM test.
///
/// Residuals are regressed on the original regressors and `lags` of
/// themselves, with presample lags set to zero so the sample is unchanged.
/// The auxiliary R² is uncentered, which equals the centered value whenever
/// the original model has an intercept.
pub fn breusch_godfrey(fit: &OlsFit, spec: &RegressionSpec, data: &Dataset, lags: usize) -> Result<LmTest> {
    if lags == 0 {
        return Err(Error::InvalidSpec("Breusch-Godfrey needs at least one lag".into()));
    }
    let design = Design::build(spec, data)?;
    let e = &fit.residuals;
    let n = e.len();
    if all_zero(e) {
        return Ok(LmTest::degenerate(lags));
    }
    if lags + design.k() >= n {
        return Err(Error::TooFewObservations { n, k: lags + design.k() });
    }
    let mut cols: Vec<Vec<f64>> = (0..design.k()).map(|j| design.x.column(j)).collect();
    let mut names = design.names.clone();
    for l in 1..=lags {
        cols.push((0..n).map(|t| if t >= l { e[t - l] } else { 0.0 }).collect());
        names.push(format!("resid(-{l})"));
    }
    let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
    let aux = least_squares(&Matrix::from_columns(n, &refs), e, &names)?;
    let ee: f64 = e.iter().map(|v| v * v).sum();
    let r2 = 1.0 - aux.ssr / ee;
    Ok(LmTest::new(n as f64 * r2, lags))
}

/// Centered `n·R²` from regressing `target` on an intercept plus `cols`.
fn aux_lm(target: &[f64], cols: Vec<Vec<f64>>, names: Vec<String>) -> Result<LmTest> {
    let n = target.len();
    let df = cols.len();
    let mean = target.iter().sum::<f64>() / n as f64;
    let tss: f64 = target.iter().map(|v| (v - mean).powi(2)).sum();
    if tss <= 1e-300 || df == 0 {
        return Ok(LmTest::degenerate(df.max(1)));
    }
    let ones = vec![1.0; n];
    let mut refs: Vec<&[f64]> = vec![&ones];
    refs.extend(cols.iter().map(Vec::as_slice));
    let mut all_names = vec!["const".to_string()];
    all_names.extend(names);
    let aux = least_squares(&Matrix::from_columns(n, &refs), target, &all_names)?;
    Ok(LmTest::new(n as f64 * (1.0 - aux.ssr / tss), df))
}

/// Non-constant regressor columns of the original design.
fn slope_columns(design: &Design) -> (Vec<Vec<f64>>, Vec<String>) {
    let mut cols = Vec::new();
    let mut names = Vec::new();
    for j in 0..design.k() {
        let c = design.x.column(j);
        if c.iter().all(|v| *v == c[0]) {
            continue;
        }
        cols.push(c);
        names.push(design.names[j].clone());
    }
    (cols, names)
}

/// Breusch-Pagan-Godfrey: squared residuals on the original regressors.
pub fn breusch_pagan_godfrey(fit: &OlsFit, spec: &RegressionSpec, data: &Dataset) -> Result<LmTest> {
    let design = Design::build(spec, data)?;
    let (cols, names) = slope_columns(&design);
    if all_zero(&fit.residuals) {
        return Ok(LmTest::degenerate(cols.len().max(1)));
    }
    let e2: Vec<f64> = fit.residuals.iter().map(|e| e * e).collect();
    aux_lm(&e2, cols, names)
}

/// White's test: squared residuals on regressors, their squares, and
/// cross products. Constant and duplicate columns (e.g. the square of a
/// 0/1 dummy) are dropped before fitting.
pub fn white_test(fit: &OlsFit, spec: &RegressionSpec, data: &Dataset) -> Result<LmTest> {
    let design = Design::build(spec, data)?;
    let (base, base_names) = slope_columns(&design);
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut add = |c: Vec<f64>, name: String, cols: &mut Vec<Vec<f64>>| {
        if c.iter().all(|v| *v == c[0]) || cols.iter().any(|o| *o == c) {
            return;
        }
        cols.push(c);
        names.push(name);
    };
    for (c, nm) in base.iter().zip(&base_names) {
        add(c.clone(), nm.clone(), &mut cols);
    }
    for i in 0..base.len() {
        for j in i..base.len() {
            let prod = base[i].iter().zip(&base[j]).map(|(a, b)| a * b).collect();
            add(prod, format!("{}*{}", base_names[i], base_names[j]), &mut cols);
        }
    }
    if all_zero(&fit.residuals) {
        return Ok(LmTest::degenerate(cols.len().max(1)));
    }
    let e2: Vec<f64> = fit.residuals.iter().map(|e| e * e).collect();
    aux_lm(&e2, cols, names)
}

/// Which diagnostics to compute for a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagnosticsRequest {
    pub bg_lags: Option<usize>,
    pub bpg: bool,
    pub white: bool,
}

impl Default for DiagnosticsRequest {
    fn default() -> Self {
        DiagnosticsRequest { bg_lags: Some(2), bpg: true, white: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub durbin_watson: Option<f64>,
    pub bg_lm: Option<LmTest>,
    pub bpg: Option<LmTest>,
    pub white: Option<LmTest>,
}

pub fn diagnose(fit: &OlsFit, spec: &RegressionSpec, data: &Dataset, req: DiagnosticsRequest) -> Result<DiagnosticsReport> {
    Ok(DiagnosticsReport {
        durbin_watson: fit.durbin_watson,
        bg_lm: req.bg_lags.map(|l| breusch_godfrey(fit, spec, data, l)).transpose()?,
        bpg: req.bpg.then(|| breusch_pagan_godfrey(fit, spec, data)).transpose()?,
        white: req.white.then(|| white_test(fit, spec, data)).transpose()?,
    })
}
