use serde::Serialize;

use super::{ArdlOrders, ArdlSpec};
use crate::dataio::{Dataset, TimeSeries};
use crate::regression::{ols_fit, OlsFit, RegressionSpec, SeriesRef, Term};
use crate::{Error, Result};

/// Name under which the equilibrium error enters the model.
pub const ECT: &str = "ECT";

/// Significance level at which the adjustment coefficient must be
/// significant for the model to count as valid.
pub const ECM_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct EcmFit {
    pub orders: ArdlOrders,
    /// Coefficient of `ECT(-1)`, the adjustment speed.
    pub lambda: f64,
    pub lambda_se: f64,
    pub lambda_p: f64,
    /// `λ` significant at 5% and strictly inside `(−1, 0)`.
    pub valid: bool,
    pub interpretation: String,
    pub fit: OlsFit,
    #[serde(skip)]
    pub regression: RegressionSpec,
    /// The input data with the equilibrium error appended as `ECT`.
    #[serde(skip)]
    pub data: Dataset,
}

/// Residuals of a static levels regression, indexed by period, for use as
/// the equilibrium error of an error-correction model.
pub fn ect_from_levels(levels_fit: &OlsFit) -> TimeSeries {
    TimeSeries::new(ECT, levels_fit.index.clone(), levels_fit.residuals.clone()).expect("fit index is a valid index")
}

fn interpretation(lambda: f64) -> String {
    if lambda < 0.0 {
        format!("corrects {:.2}% of previous-period disequilibrium", -lambda * 100.0)
    } else {
        format!("no error correction (adjustment coefficient {lambda:.4})")
    }
}

/// Restricted error-correction model at the specification's maximum lags:
/// `Δy` on `Δy` lags `1..=p`, `Δx_j` lags `0..=q_j`, the contemporaneous
/// difference of each fixed regressor, and `ECT(-1)`. An intercept is
/// included in cases III to V and a trend in case V.
///
/// The equilibrium error is matched to the data by period; the sample
/// starts once its lag is available and must have no holes after that.
pub fn ecm_fit(spec: &ArdlSpec, data: &Dataset, longrun_residuals: &TimeSeries) -> Result<EcmFit> {
    spec.validate()?;
    if data.position(ECT).is_ok() {
        return Err(Error::DuplicateSeries(ECT.into()));
    }
    let index = data.index();
    let ect: Vec<Option<f64>> = index.iter().map(|p| longrun_residuals.get(p)).collect();
    let Some(first) = ect.iter().position(Option::is_some) else {
        return Err(Error::MisalignedResiduals(index.first().map(ToString::to_string).unwrap_or_default()));
    };

    let orders = ArdlOrders { p: spec.max_p, q: spec.regressors.iter().map(|r| r.max_lag).collect() };
    let mut terms: Vec<Term> = (1..=orders.p).map(|i| SeriesRef::diffed(spec.dependent.clone()).at(i)).collect();
    for r in &spec.regressors {
        terms.extend((0..=r.max_lag).map(|i| SeriesRef::diffed(r.name.clone()).at(i)));
    }
    terms.extend(spec.fixed.iter().map(|f| SeriesRef::diffed(f.clone()).at(0)));
    terms.push(SeriesRef::level(ECT).at(1));
    let regression = RegressionSpec::new(SeriesRef::diffed(spec.dependent.clone()), terms)
        .with_intercept(spec.case.ecm_intercept())
        .with_trend(spec.case == super::BoundsCase::V)
        .with_covariance(spec.covariance)
        .with_sample_start(first + 1);
    let start = regression.first_row();
    if start >= data.len() {
        return Err(Error::TooShort { needed: start + 1, got: data.len() });
    }
    if let Some(t) = (start..data.len()).find(|&t| ect[t - 1].is_none()) {
        return Err(Error::MisalignedResiduals(index[t - 1].to_string()));
    }

    let mut extended = data.clone();
    extended.push(TimeSeries::new(ECT, index.to_vec(), ect.iter().map(|v| v.unwrap_or(0.0)).collect())?)?;
    let fit = ols_fit(&regression, &extended)?;
    let j = fit.position(&SeriesRef::level(ECT).at(1).to_string()).expect("ECT term present");
    let (lambda, lambda_se, lambda_p) = (fit.coefficients[j], fit.std_errors[j], fit.p_values[j]);
    Ok(EcmFit {
        orders,
        lambda,
        lambda_se,
        lambda_p,
        valid: lambda_p < ECM_LEVEL && lambda > -1.0 && lambda < 0.0,
        interpretation: interpretation(lambda),
        fit,
        regression,
        data: extended,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpretation_strings() {
        assert_eq!(interpretation(-0.2018), "corrects 20.18% of previous-period disequilibrium");
        assert_eq!(interpretation(-0.3731), "corrects 37.31% of previous-period disequilibrium");
        assert!(interpretation(0.1).starts_with("no error correction"));
    }
}
