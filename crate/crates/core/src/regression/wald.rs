use serde::Serialize;

use super::OlsFit;
use crate::dist::f_sf;
use crate::linalg::{cholesky, cholesky_solve};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaldTest {
    pub f: f64,
    pub df1: usize,
    pub df2: usize,
    pub p: f64,
}

/// Wald F for the joint exclusion restriction `β_i = 0, i ∈ restriction`,
/// `F = βᵣᵀ Vᵣ⁻¹ βᵣ / q`, using the fit's own covariance.
pub fn wald_f(fit: &OlsFit, restriction: &[usize]) -> Result<WaldTest> {
    if restriction.is_empty() {
        return Err(Error::InvalidSpec("empty restriction".into()));
    }
    if let Some(bad) = restriction.iter().find(|&&i| i >= fit.k_terms) {
        return Err(Error::InvalidSpec(format!("restriction index {bad} out of range")));
    }
    let q = restriction.len();
    let v = fit.cov_matrix.submatrix(restriction);
    let l = cholesky(&v).ok_or(Error::SingularRestriction)?;
    let b: Vec<f64> = restriction.iter().map(|&i| fit.coefficients[i]).collect();
    let sol = cholesky_solve(&l, &b);
    let f = b.iter().zip(&sol).map(|(a, c)| a * c).sum::<f64>() / q as f64;
    let df2 = fit.df_resid();
    Ok(WaldTest { f, df1: q, df2, p: f_sf(f, q, df2) })
}
