use serde::{Deserialize, Serialize};

use crate::dataio::{Dataset, Period};
use crate::linalg::RowUpdatingQr;
use crate::regression::{Design, RegressionSpec};
use crate::{Error, Result};

/// Significance level for the CUSUM boundary lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CusumLevel {
    #[serde(rename = "1%")]
    One,
    #[default]
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl CusumLevel {
    /// Brown-Durbin-Evans boundary constant.
    pub fn constant(self) -> f64 {
        match self {
            CusumLevel::One => 1.143,
            CusumLevel::Five => 0.948,
            CusumLevel::Ten => 0.850,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CusumResult {
    /// Periods for observations `k+1..n` of the effective sample.
    pub periods: Vec<Period>,
    pub recursive_residuals: Vec<f64>,
    /// Cumulative sum of recursive residuals scaled by the full-sample σ̂.
    pub w: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub sigma: f64,
    pub level: CusumLevel,
    pub stable: bool,
    pub first_crossing: Option<Period>,
}

pub fn cusum(spec: &RegressionSpec, data: &Dataset) -> Result<CusumResult> {
    cusum_with(spec, data, CusumLevel::Five)
}

/// CUSUM of recursive residuals with boundaries
/// `±a·[√(n−k) + 2(t−k)/√(n−k)]`.
pub fn cusum_with(spec: &RegressionSpec, data: &Dataset, level: CusumLevel) -> Result<CusumResult> {
    let design = Design::build(spec, data)?;
    let (n, k) = (design.n(), design.k());
    if n <= k + 1 {
        return Err(Error::TooFewObservations { n, k: k + 1 });
    }
    let mut qr = RowUpdatingQr::new(k);
    for t in 0..k {
        qr.push(design.x.row(t), design.y[t]);
    }
    if let Some(j) = qr.first_deficient_column() {
        return Err(Error::RankDeficient { column: design.names[j].clone(), step: Some(k) });
    }
    let mut rec = Vec::with_capacity(n - k);
    for t in k..n {
        let x = design.x.row(t);
        rec.push(qr.recursive_residual(x, design.y[t]));
        qr.push(x, design.y[t]);
    }
    // Σw² equals the full-sample SSR, so σ̂² = Σw²/(n−k).
    let m = (n - k) as f64;
    let ssr: f64 = rec.iter().map(|w| w * w).sum();
    let sigma = (ssr / m).sqrt();
    // Residuals at round-off level mean an exact fit: the path is flat.
    let y_scale = design.y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let exact = sigma <= 1e-12 * y_scale.max(f64::MIN_POSITIVE);
    let a = level.constant();
    let sq = m.sqrt();
    let mut w = Vec::with_capacity(n - k);
    let mut acc = 0.0;
    for r in &rec {
        acc += r;
        w.push(if exact { 0.0 } else { acc / sigma });
    }
    let upper: Vec<f64> = (1..=n - k).map(|j| a * (sq + 2.0 * j as f64 / sq)).collect();
    let lower: Vec<f64> = upper.iter().map(|u| -u).collect();
    let periods = design.index[k..].to_vec();
    let first_crossing = w.iter().zip(&upper).position(|(wt, u)| wt.abs() > *u).map(|i| periods[i]);
    Ok(CusumResult {
        periods,
        recursive_residuals: rec,
        w,
        upper,
        lower,
        sigma,
        level,
        stable: first_crossing.is_none(),
        first_crossing,
    })
}
