use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::Matrix;
use crate::Error;

/// Coefficient covariance estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Covariance {
    #[default]
    Classical,
    /// White heteroskedasticity-consistent, HC1 small-sample scaling.
    White,
    /// Newey-West (Bartlett kernel), no small-sample scaling.
    Hac(Bandwidth),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bandwidth {
    Fixed(usize),
    /// `floor(4·(n/100)^(2/9))`.
    #[default]
    Auto,
}

impl Bandwidth {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Bandwidth::Fixed(l) => l,
            Bandwidth::Auto => (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize,
        }
    }
}

impl fmt::Display for Covariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Covariance::Classical => f.write_str("classical"),
            Covariance::White => f.write_str("white"),
            Covariance::Hac(Bandwidth::Auto) => f.write_str("hac"),
            Covariance::Hac(Bandwidth::Fixed(l)) => write!(f, "hac:{l}"),
        }
    }
}

impl FromStr for Covariance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "classical" | "ols" => Ok(Covariance::Classical),
            "white" | "hc1" => Ok(Covariance::White),
            "hac" => Ok(Covariance::Hac(Bandwidth::Auto)),
            _ => s
                .strip_prefix("hac:")
                .and_then(|l| l.parse().ok())
                .map(|l| Covariance::Hac(Bandwidth::Fixed(l)))
                .ok_or_else(|| Error::InvalidSpec(format!("unknown covariance `{s}`"))),
        }
    }
}

impl Serialize for Covariance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Covariance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn sandwich(bread: &Matrix, meat: &Matrix) -> Matrix {
    let mut v = bread.matmul(meat).matmul(bread);
    // Symmetrize away rounding asymmetry.
    let k = v.rows();
    for i in 0..k {
        for j in 0..i {
            let m = 0.5 * (v[(i, j)] + v[(j, i)]);
            v[(i, j)] = m;
            v[(j, i)] = m;
        }
    }
    v
}

fn hc0_meat(x: &Matrix, e: &[f64]) -> Matrix {
    let k = x.cols();
    let mut meat = Matrix::zeros(k, k);
    for (t, et) in e.iter().enumerate() {
        let w = et * et;
        if w == 0.0 {
            continue;
        }
        let r = x.row(t);
        for a in 0..k {
            for b in a..k {
                meat[(a, b)] += w * r[a] * r[b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            meat[(a, b)] = meat[(b, a)];
        }
    }
    meat
}

/// White HC1: `n/(n−k) · (XᵀX)⁻¹ Xᵀdiag(e²)X (XᵀX)⁻¹`.
pub fn white_cov(x: &Matrix, residuals: &[f64], xtx_inv: &Matrix) -> Matrix {
    let (n, k) = (x.rows(), x.cols());
    let mut v = sandwich(xtx_inv, &hc0_meat(x, residuals));
    v.scale(n as f64 / (n - k) as f64);
    v
}

/// Newey-West HAC with Bartlett weights `1 − l/(L+1)`; `L = 0` is HC0.
pub fn hac_cov(x: &Matrix, residuals: &[f64], xtx_inv: &Matrix, bandwidth: usize) -> Matrix {
    let k = x.cols();
    let n = x.rows();
    let mut meat = hc0_meat(x, residuals);
    for l in 1..=bandwidth.min(n.saturating_sub(1)) {
        let w = 1.0 - l as f64 / (bandwidth as f64 + 1.0);
        let mut gamma = Matrix::zeros(k, k);
        for t in l..n {
            let s = residuals[t] * residuals[t - l];
            if s == 0.0 {
                continue;
            }
            let (rt, rl) = (x.row(t), x.row(t - l));
            for a in 0..k {
                for b in 0..k {
                    gamma[(a, b)] += s * rt[a] * rl[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                meat[(a, b)] += w * (gamma[(a, b)] + gamma[(b, a)]);
            }
        }
    }
    sandwich(xtx_inv, &meat)
}
