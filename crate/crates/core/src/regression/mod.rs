//! Ordinary least squares with lag/difference term specifications.
//!
//! Coefficients come from a Householder QR of the design, never from the
//! normal equations. Covariance can be classical, White HC1, or a Bartlett
//! kernel HAC estimator.

mod covariance;
mod wald;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use covariance::{hac_cov, white_cov, Bandwidth, Covariance};
pub use wald::{wald_f, WaldTest};

use crate::dataio::{diff_values, Dataset, Period};
use crate::dist::t_two_sided;
use crate::linalg::{Matrix, Qr};
use crate::{Error, Result};

/// A dataset column, optionally differenced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeriesRef {
    pub name: String,
    pub diff: usize,
}

impl SeriesRef {
    pub fn level(name: impl Into<String>) -> Self {
        SeriesRef { name: name.into(), diff: 0 }
    }

    pub fn diffed(name: impl Into<String>) -> Self {
        SeriesRef { name: name.into(), diff: 1 }
    }

    pub fn at(self, lag: usize) -> Term {
        Term { series: self, lag }
    }
}

impl fmt::Display for SeriesRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.diff {
            0 => write!(f, "{}", self.name),
            1 => write!(f, "d.{}", self.name),
            d => write!(f, "d{d}.{}", self.name),
        }
    }
}

impl FromStr for SeriesRef {
    type Err = Error;

    /// `NAME`, `d.NAME`, or `dK.NAME`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((prefix, name)) = s.split_once('.') {
            if let Some(order) = prefix.strip_prefix('d') {
                let diff = if order.is_empty() {
                    1
                } else {
                    order.parse().map_err(|_| Error::InvalidSpec(format!("bad difference prefix in `{s}`")))?
                };
                if !name.is_empty() {
                    return Ok(SeriesRef { name: name.to_string(), diff });
                }
            }
        }
        if s.is_empty() {
            return Err(Error::InvalidSpec("empty series name".into()));
        }
        Ok(SeriesRef::level(s))
    }
}

/// A regressor: a (possibly differenced) series at a lag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub series: SeriesRef,
    pub lag: usize,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lag == 0 {
            write!(f, "{}", self.series)
        } else {
            write!(f, "{}(-{})", self.series, self.lag)
        }
    }
}

impl FromStr for Term {
    type Err = Error;

    /// `SERIES` or `SERIES@LAG`, e.g. `d.CDS@1`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('@') {
            Some((series, lag)) => Ok(Term {
                series: series.parse()?,
                lag: lag.trim().parse().map_err(|_| Error::InvalidSpec(format!("bad lag in `{s}`")))?,
            }),
            None => Ok(Term { series: s.parse()?, lag: 0 }),
        }
    }
}

/// Dependent variable, ordered regressors, deterministic terms and covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSpec {
    pub dependent: SeriesRef,
    pub terms: Vec<Term>,
    pub intercept: bool,
    #[serde(default)]
    pub trend: bool,
    #[serde(default)]
    pub covariance: Covariance,
    /// Earliest dataset row allowed in the estimation sample; used to put
    /// competing specifications on a common sample.
    #[serde(default)]
    pub sample_start: usize,
}

impl RegressionSpec {
    pub fn new(dependent: SeriesRef, terms: Vec<Term>) -> Self {
        RegressionSpec {
            dependent,
            terms,
            intercept: true,
            trend: false,
            covariance: Covariance::Classical,
            sample_start: 0,
        }
    }

    pub fn with_intercept(mut self, on: bool) -> Self {
        self.intercept = on;
        self
    }

    pub fn with_trend(mut self, on: bool) -> Self {
        self.trend = on;
        self
    }

    pub fn with_covariance(mut self, cov: Covariance) -> Self {
        self.covariance = cov;
        self
    }

    pub fn with_sample_start(mut self, row: usize) -> Self {
        self.sample_start = row;
        self
    }

    pub fn k_terms(&self) -> usize {
        self.terms.len() + usize::from(self.intercept) + usize::from(self.trend)
    }

    /// First dataset row at which every term is defined.
    pub fn first_row(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.lag + t.series.diff)
            .chain([self.dependent.diff, self.sample_start])
            .max()
            .unwrap_or(0)
    }

    pub fn term_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.k_terms());
        if self.intercept {
            names.push("const".to_string());
        }
        if self.trend {
            names.push("trend".to_string());
        }
        names.extend(self.terms.iter().map(Term::to_string));
        names
    }

    fn validate(&self) -> Result<()> {
        for (i, t) in self.terms.iter().enumerate() {
            if self.terms[..i].contains(t) {
                return Err(Error::InvalidSpec(format!("duplicate term `{t}`")));
            }
        }
        if self.k_terms() == 0 {
            return Err(Error::InvalidSpec("regression has no terms".into()));
        }
        Ok(())
    }
}

/// A materialized design matrix on its effective sample.
#[derive(Debug, Clone)]
pub struct Design {
    pub x: Matrix,
    pub y: Vec<f64>,
    pub names: Vec<String>,
    pub index: Vec<Period>,
    pub intercept: bool,
    /// Dataset row of the first observation.
    pub first_row: usize,
}

impl Design {
    pub fn build(spec: &RegressionSpec, data: &Dataset) -> Result<Design> {
        spec.validate()?;
        let start = spec.first_row();
        let n_rows = data.len();
        if start >= n_rows {
            return Err(Error::TooShort { needed: start + 1, got: n_rows });
        }
        let n = n_rows - start;
        let k = spec.k_terms();
        let y = aligned(data, &spec.dependent, 0, start)?;
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
        if spec.intercept {
            cols.push(vec![1.0; n]);
        }
        if spec.trend {
            cols.push((start..n_rows).map(|t| t as f64).collect());
        }
        for term in &spec.terms {
            cols.push(aligned(data, &term.series, term.lag, start)?);
        }
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        Ok(Design {
            x: Matrix::from_columns(n, &refs),
            y,
            names: spec.term_names(),
            index: data.index()[start..].to_vec(),
            intercept: spec.intercept,
            first_row: start,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn k(&self) -> usize {
        self.x.cols()
    }
}

/// Values of `series` lagged by `lag` for dataset rows `start..`.
pub(crate) fn aligned(data: &Dataset, series: &SeriesRef, lag: usize, start: usize) -> Result<Vec<f64>> {
    let raw = data.column(&series.name)?;
    let base = if series.diff == 0 { raw.to_vec() } else { diff_values(raw, series.diff) };
    // base[j] holds the value for dataset row j + diff.
    let offset = series.diff + lag;
    debug_assert!(start >= offset);
    Ok((start..data.len()).map(|t| base[t - offset]).collect())
}

/// Result of a least-squares fit.
#[derive(Debug, Clone, Serialize)]
pub struct OlsFit {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub residuals: Vec<f64>,
    #[serde(skip)]
    pub index: Vec<Period>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    /// `false` when the model has no intercept and R² is uncentered.
    pub centered_r2: bool,
    pub ssr: f64,
    pub sigma: f64,
    pub log_likelihood: f64,
    /// `None` when the residuals are identically zero.
    pub durbin_watson: Option<f64>,
    pub n_effective: usize,
    pub k_terms: usize,
    #[serde(skip)]
    pub cov_matrix: Matrix,
    pub covariance: Covariance,
}

impl OlsFit {
    pub fn df_resid(&self) -> usize {
        self.n_effective - self.k_terms
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Akaike criterion per observation, `−2ℓ/n + 2k/n`.
    pub fn aic(&self) -> f64 {
        info_criterion(self.log_likelihood, self.n_effective, self.k_terms, 2.0)
    }

    /// Schwarz criterion per observation, `−2ℓ/n + k·ln(n)/n`.
    pub fn sic(&self) -> f64 {
        info_criterion(self.log_likelihood, self.n_effective, self.k_terms, (self.n_effective as f64).ln())
    }

    pub fn hq(&self) -> f64 {
        let n = self.n_effective as f64;
        info_criterion(self.log_likelihood, self.n_effective, self.k_terms, 2.0 * n.ln().ln())
    }
}

/// Information criterion used for lag-order searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfoCriterion {
    Aic,
    #[default]
    Sic,
    Hq,
}

impl InfoCriterion {
    /// Per-observation criterion from a Gaussian log-likelihood.
    pub fn evaluate(self, loglik: f64, n: usize, k: usize) -> f64 {
        let nf = n as f64;
        let penalty = match self {
            InfoCriterion::Aic => 2.0,
            InfoCriterion::Sic => nf.ln(),
            InfoCriterion::Hq => 2.0 * nf.ln().ln(),
        };
        info_criterion(loglik, n, k, penalty)
    }

    /// Criterion for a regression with residual sum of squares `ssr`.
    pub fn from_ssr(self, ssr: f64, n: usize, k: usize) -> f64 {
        self.evaluate(gaussian_loglik(ssr, n), n, k)
    }

    pub fn of(self, fit: &OlsFit) -> f64 {
        self.evaluate(fit.log_likelihood, fit.n_effective, fit.k_terms)
    }
}

impl FromStr for InfoCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "aic" => Ok(InfoCriterion::Aic),
            "sic" | "bic" | "sc" => Ok(InfoCriterion::Sic),
            "hq" | "hqic" => Ok(InfoCriterion::Hq),
            other => Err(Error::InvalidSpec(format!("unknown information criterion `{other}`"))),
        }
    }
}

impl fmt::Display for InfoCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfoCriterion::Aic => "aic",
            InfoCriterion::Sic => "sic",
            InfoCriterion::Hq => "hq",
        })
    }
}

pub(crate) fn info_criterion(loglik: f64, n: usize, k: usize, penalty: f64) -> f64 {
    let n = n as f64;
    -2.0 * loglik / n + penalty * k as f64 / n
}

/// Gaussian log-likelihood at the ML variance `ssr / n`.
pub(crate) fn gaussian_loglik(ssr: f64, n: usize) -> f64 {
    let n = n as f64;
    -0.5 * n * (1.0 + (2.0 * std::f64::consts::PI).ln() + (ssr / n).ln())
}

pub fn ols_fit(spec: &RegressionSpec, data: &Dataset) -> Result<OlsFit> {
    let design = Design::build(spec, data)?;
    fit_design(&design, spec.covariance)
}

/// Plain least squares on a matrix; the building block for auxiliary regressions.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    pub(crate) qr: Qr,
}

pub fn least_squares(x: &Matrix, y: &[f64], names: &[String]) -> Result<LeastSquares> {
    let (n, k) = (x.rows(), x.cols());
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }
    let qr = Qr::new(x);
    if let Some(j) = qr.first_deficient_column() {
        let column = names.get(j).cloned().unwrap_or_else(|| format!("#{j}"));
        return Err(Error::rank(column));
    }
    let coefficients = qr.solve(y);
    let fitted = x.mul_vec(&coefficients);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr = residuals.iter().map(|e| e * e).sum();
    Ok(LeastSquares { coefficients, residuals, ssr, qr })
}

pub fn fit_design(design: &Design, covariance: Covariance) -> Result<OlsFit> {
    let ls = least_squares(&design.x, &design.y, &design.names)?;
    let (n, k) = (design.n(), design.k());
    let df = n - k;
    let xtx_inv = ls.qr.xtx_inverse();
    let sigma2 = ls.ssr / df as f64;
    let cov_matrix = match covariance {
        Covariance::Classical => {
            let mut v = xtx_inv.clone();
            v.scale(sigma2);
            v
        }
        Covariance::White => white_cov(&design.x, &ls.residuals, &xtx_inv),
        Covariance::Hac(bw) => hac_cov(&design.x, &ls.residuals, &xtx_inv, bw.resolve(n)),
    };
    let std_errors: Vec<f64> = cov_matrix.diagonal().iter().map(|v| v.max(0.0).sqrt()).collect();
    let t_stats: Vec<f64> = ls.coefficients.iter().zip(&std_errors).map(|(b, s)| b / s).collect();
    let p_values = t_stats.iter().map(|t| t_two_sided(*t, df)).collect();

    let tss = if design.intercept {
        let mean = design.y.iter().sum::<f64>() / n as f64;
        design.y.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
    } else {
        design.y.iter().map(|v| v * v).sum::<f64>()
    };
    let r_squared = if tss > 0.0 { (1.0 - ls.ssr / tss).clamp(0.0, 1.0) } else { 1.0 };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n - usize::from(design.intercept)) as f64 / df as f64;
    let durbin_watson = crate::diagnostics::durbin_watson(&ls.residuals).ok();

    Ok(OlsFit {
        names: design.names.clone(),
        coefficients: ls.coefficients,
        std_errors,
        t_stats,
        p_values,
        residuals: ls.residuals,
        index: design.index.clone(),
        r_squared,
        adj_r_squared,
        centered_r2: design.intercept,
        ssr: ls.ssr,
        sigma: sigma2.sqrt(),
        log_likelihood: gaussian_loglik(ls.ssr, n),
        durbin_watson,
        n_effective: n,
        k_terms: k,
        cov_matrix,
        covariance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cholesky;
    use proptest::prelude::*;

    fn data(cols: Vec<(&str, Vec<f64>)>) -> Dataset {
        let n = cols[0].1.len();
        Dataset::from_columns(
            Period::month(2000, 1).range(n),
            cols.into_iter().map(|(a, b)| (a.to_string(), b)).collect(),
        )
        .unwrap()
    }

    fn simple(y: &[f64], x: &[f64]) -> OlsFit {
        let d = data(vec![("y", y.to_vec()), ("x", x.to_vec())]);
        ols_fit(&RegressionSpec::new(SeriesRef::level("y"), vec![SeriesRef::level("x").at(0)]), &d).unwrap()
    }

    #[test]
    fn perfect_fit() {
        let f = simple(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        assert!(f.coefficients[0].abs() < 1e-14);
        assert!((f.coefficients[1] - 1.0).abs() < 1e-14);
        assert_eq!(f.r_squared, 1.0);
        assert!(f.residuals.iter().all(|e| e.abs() < 1e-14));
    }

    #[test]
    fn hand_normal_equations() {
        // Sxy = 4.5, Sxx = 5, x̄ = 2.5, ȳ = 2.25 → slope 0.9, intercept 0.
        let f = simple(&[1.0, 2.0, 2.0, 4.0], &[1.0, 2.0, 3.0, 4.0]);
        assert!((f.coefficients[1] - 0.9).abs() < 1e-14);
        assert!(f.coefficients[0].abs() < 1e-14);
    }

    #[test]
    fn duplicated_regressor_is_rank_deficient() {
        let d = data(vec![("y", vec![1.0, 3.0, 2.0, 5.0]), ("x", vec![1.0, 2.0, 3.0, 4.0]), ("z", vec![2.0, 4.0, 6.0, 8.0])]);
        let spec = RegressionSpec::new(
            SeriesRef::level("y"),
            vec![SeriesRef::level("x").at(0), SeriesRef::level("z").at(0)],
        );
        match ols_fit(&spec, &d) {
            Err(Error::RankDeficient { column, .. }) => assert_eq!(column, "z"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn too_few_observations() {
        let d = data(vec![("y", vec![1.0, 3.0]), ("x", vec![1.0, 2.0])]);
        let spec = RegressionSpec::new(SeriesRef::level("y"), vec![SeriesRef::level("x").at(0)]);
        assert!(matches!(ols_fit(&spec, &d), Err(Error::TooFewObservations { .. })));
    }

    #[test]
    fn term_parsing_and_sample() {
        let t: Term = "d.CDS@2".parse().unwrap();
        assert_eq!(t, SeriesRef::diffed("CDS").at(2));
        assert_eq!(t.to_string(), "d.CDS(-2)");
        assert_eq!("BIST".parse::<Term>().unwrap(), SeriesRef::level("BIST").at(0));
        assert_eq!("d2.x".parse::<SeriesRef>().unwrap().diff, 2);
        let spec = RegressionSpec::new(SeriesRef::diffed("y"), vec![t]);
        assert_eq!(spec.first_row(), 3);
        let dup = RegressionSpec::new(SeriesRef::level("y"), vec![SeriesRef::level("x").at(1), SeriesRef::level("x").at(1)]);
        assert!(matches!(dup.validate(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn lagged_design_alignment() {
        let d = data(vec![("y", vec![1.0, 4.0, 9.0, 16.0, 25.0, 36.0])]);
        let spec = RegressionSpec::new(SeriesRef::diffed("y"), vec![SeriesRef::diffed("y").at(1), SeriesRef::level("y").at(1)]);
        let des = Design::build(&spec, &d).unwrap();
        // rows 2..6: Δy_t = 5,7,9,11; Δy_{t-1} = 3,5,7,9; y_{t-1} = 4,9,16,25
        assert_eq!(des.y, vec![5.0, 7.0, 9.0, 11.0]);
        assert_eq!(des.x.column(1), vec![3.0, 5.0, 7.0, 9.0]);
        assert_eq!(des.x.column(2), vec![4.0, 9.0, 16.0, 25.0]);
        assert_eq!(des.index[0], Period::month(2000, 3));
    }

    #[test]
    fn uncentered_r2_without_intercept() {
        let d = data(vec![("y", vec![2.0, 4.1, 5.9, 8.2, 9.9]), ("x", vec![1.0, 2.0, 3.0, 4.0, 5.0])]);
        let spec = RegressionSpec::new(SeriesRef::level("y"), vec![SeriesRef::level("x").at(0)]).with_intercept(false);
        let f = ols_fit(&spec, &d).unwrap();
        assert!(!f.centered_r2);
        let yy: f64 = [2.0f64, 4.1, 5.9, 8.2, 9.9].iter().map(|v| v * v).sum();
        assert!((f.r_squared - (1.0 - f.ssr / yy)).abs() < 1e-14);
    }

    fn random_case(seed: u64, n: usize, k: usize) -> (Dataset, RegressionSpec) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut cols = vec![("y".to_string(), (0..n).map(|_| rng.random_range(-5.0..5.0)).collect::<Vec<f64>>())];
        let mut terms = Vec::new();
        for j in 0..k {
            let scale = 10f64.powi(j as i32 - 1);
            cols.push((format!("x{j}"), (0..n).map(|_| scale * rng.random_range(-1.0..1.0)).collect()));
            terms.push(SeriesRef::level(format!("x{j}")).at(0));
        }
        let d = Dataset::from_columns(Period::month(2000, 1).range(n), cols).unwrap();
        (d, RegressionSpec::new(SeriesRef::level("y"), terms))
    }

    proptest! {
        #[test]
        fn residuals_orthogonal_and_cov_psd(seed in any::<u64>(), n in 12usize..40, k in 1usize..5, cov in 0usize..3) {
            let (d, spec) = random_case(seed, n, k);
            let cov = [Covariance::Classical, Covariance::White, Covariance::Hac(Bandwidth::Auto)][cov];
            let f = ols_fit(&spec.clone().with_covariance(cov), &d).unwrap();
            let des = Design::build(&spec, &d).unwrap();
            let scale = des.x.max_abs() * des.y.iter().fold(0.0f64, |m, v| m.max(v.abs())) * n as f64;
            for j in 0..des.k() {
                let xe: f64 = des.x.column(j).iter().zip(&f.residuals).map(|(a, b)| a * b).sum();
                prop_assert!(xe.abs() <= 1e-8 * scale);
            }
            let mean: f64 = f.residuals.iter().sum::<f64>() / n as f64;
            prop_assert!(mean.abs() <= 1e-10 * scale);
            prop_assert!((0.0..=1.0).contains(&f.r_squared));
            prop_assert!(f.cov_matrix.is_symmetric(1e-12 * f.cov_matrix.max_abs()));
            // PSD: a tiny ridge must make it Cholesky-factorable.
            let mut v = f.cov_matrix.clone();
            let ridge = 1e-9 * v.max_abs();
            for i in 0..v.rows() { v[(i, i)] += ridge; }
            prop_assert!(cholesky(&v).is_some());
        }

        #[test]
        fn regressor_rescaling(seed in any::<u64>(), c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0]) {
            let (d, spec) = random_case(seed, 30, 3);
            let f1 = ols_fit(&spec, &d).unwrap();
            let mut cols: Vec<(String, Vec<f64>)> = d.iter().map(|s| (s.name().to_string(), s.values().to_vec())).collect();
            cols[2].1.iter_mut().for_each(|v| *v *= c);
            let d2 = Dataset::from_columns(d.index().to_vec(), cols).unwrap();
            let f2 = ols_fit(&spec, &d2).unwrap();
            prop_assert!((f2.coefficients[2] * c - f1.coefficients[2]).abs() <= 1e-9 * (1.0 + f1.coefficients[2].abs()));
            prop_assert!((f2.t_stats[2] * c.signum() - f1.t_stats[2]).abs() <= 1e-9 * (1.0 + f1.t_stats[2].abs()));
            prop_assert!((f2.r_squared - f1.r_squared).abs() <= 1e-9);
            for (a, b) in f1.residuals.iter().zip(&f2.residuals) {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
            }
        }

        #[test]
        fn dependent_rescaling(seed in any::<u64>(), c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0]) {
            let (d, spec) = random_case(seed, 30, 2);
            let f1 = ols_fit(&spec, &d).unwrap();
            let mut cols: Vec<(String, Vec<f64>)> = d.iter().map(|s| (s.name().to_string(), s.values().to_vec())).collect();
            cols[0].1.iter_mut().for_each(|v| *v *= c);
            let d2 = Dataset::from_columns(d.index().to_vec(), cols).unwrap();
            let f2 = ols_fit(&spec, &d2).unwrap();
            for j in 0..3 {
                prop_assert!((f2.coefficients[j] - c * f1.coefficients[j]).abs() <= 1e-9 * c.abs() * (1.0 + f1.coefficients[j].abs()));
                prop_assert!((f2.t_stats[j] - c.signum() * f1.t_stats[j]).abs() <= 1e-8 * (1.0 + f1.t_stats[j].abs()));
            }
            prop_assert!((f2.r_squared - f1.r_squared).abs() <= 1e-9);
            prop_assert!((f2.durbin_watson.unwrap() - f1.durbin_watson.unwrap()).abs() <= 1e-9);
        }

        #[test]
        fn adding_linear_combination_is_rank_deficient(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let (d, mut spec) = random_case(seed, 25, 2);
            let x0 = d.column("x0").unwrap().to_vec();
            let x1 = d.column("x1").unwrap();
            let combo: Vec<f64> = x0.iter().zip(x1).map(|(p, q)| a * p + b * q).collect();
            let mut d2 = d.clone();
            d2.push(crate::dataio::TimeSeries::new("combo", d.index().to_vec(), combo).unwrap()).unwrap();
            spec.terms.push(SeriesRef::level("combo").at(0));
            let is_rank_deficient = matches!(ols_fit(&spec, &d2), Err(Error::RankDeficient { .. }));
            prop_assert!(is_rank_deficient);
        }
    }
}
