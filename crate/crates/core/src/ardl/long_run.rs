use serde::Serialize;

use super::{ArdlFit, BoundsCase};
use crate::dist::t_two_sided;
use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongRunMultiplier {
    pub name: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub t_stat: Option<f64>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongRunMultipliers {
    pub dependent: String,
    pub phi_dependent: f64,
    pub multipliers: Vec<LongRunMultiplier>,
}

impl LongRunMultipliers {
    pub fn get(&self, name: &str) -> Option<&LongRunMultiplier> {
        self.multipliers.iter().find(|m| m.name == name)
    }
}

/// Relative size below which the dependent's level coefficient is treated
/// as zero.
const DENOMINATOR_TOL: f64 = 1e-12;

/// Long-run multipliers `−φ_i / φ_dep` from level-block coefficients.
///
/// `cov`, when given, is the covariance of `(φ_dep, φ_1, …, φ_m)` in that
/// order; standard errors then follow from the first-order delta method,
/// and `df` (if any) turns t-ratios into p-values.
pub fn long_run_multipliers(
    dependent: &str,
    phi_dep: f64,
    phis: &[(String, f64)],
    cov: Option<&Matrix>,
    df: Option<usize>,
) -> Result<LongRunMultipliers> {
    let scale = phis.iter().map(|(_, v)| v.abs()).fold(phi_dep.abs(), f64::max);
    if !(phi_dep.abs() > DENOMINATOR_TOL * scale) {
        return Err(Error::DegenerateDenominator);
    }
    let multipliers = phis
        .iter()
        .enumerate()
        .map(|(i, (name, phi))| {
            let value = -phi / phi_dep;
            let std_error = cov.map(|v| {
                // Gradient of −φ_i/φ_d with respect to (φ_d, φ_i).
                let (gd, gi) = (phi / (phi_dep * phi_dep), -1.0 / phi_dep);
                let var = gd * gd * v[(0, 0)] + 2.0 * gd * gi * v[(0, i + 1)] + gi * gi * v[(i + 1, i + 1)];
                var.max(0.0).sqrt()
            });
            let t_stat = std_error.map(|s| value / s);
            let p_value = t_stat.zip(df).map(|(t, df)| t_two_sided(t, df));
            LongRunMultiplier { name: name.clone(), value, std_error, t_stat, p_value }
        })
        .collect();
    Ok(LongRunMultipliers { dependent: dependent.to_string(), phi_dependent: phi_dep, multipliers })
}

/// Long-run multipliers of every level regressor of an ARDL fit, plus the
/// restricted intercept (case II) or trend (case IV).
pub fn long_run(fit: &ArdlFit) -> Result<LongRunMultipliers> {
    let vars = fit.spec.level_variables();
    let mut idx = fit.level_indices();
    let mut names: Vec<String> = vars[1..].to_vec();
    match fit.spec.case {
        BoundsCase::II => {
            idx.push(fit.fit.position("const").expect("intercept present"));
            names.push("const".into());
        }
        BoundsCase::IV => {
            idx.push(fit.fit.position("trend").expect("trend present"));
            names.push("trend".into());
        }
        _ => {}
    }
    let b = &fit.fit.coefficients;
    let phis: Vec<(String, f64)> = names.into_iter().zip(&idx[1..]).map(|(n, &i)| (n, b[i])).collect();
    let cov = fit.fit.cov_matrix.submatrix(&idx);
    long_run_multipliers(&vars[0], b[idx[0]], &phis, Some(&cov), Some(fit.fit.df_resid()))
}
