//! Vector autoregressions: equation-by-equation estimation, lag-order
//! selection and Granger causality.
//!
//! Every series of the dataset is an endogenous variable. Each equation
//! regresses one series on an intercept and lags `1..=p` of all series
//! (series-major order), on the common sample that drops the first `p` rows.
//! Pass differenced data when the variables are I(1).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dataio::Dataset;
use crate::dist::{chi2_sf, f_sf};
use crate::linalg::{cholesky, cholesky_log_det, Matrix};
use crate::par::{map_range, Exec};
use crate::regression::{ols_fit, Covariance, OlsFit, RegressionSpec, SeriesRef};
use crate::{Error, Result};

/// Lags removed from individual VAR equations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TermMask {
    excluded: BTreeSet<(String, String, usize)>,
}

impl TermMask {
    pub fn new() -> Self {
        Self::default()
    }

    /// Drops lag `lag` of `series` from the equation of `equation`.
    pub fn exclude(mut self, equation: &str, series: &str, lag: usize) -> Self {
        self.excluded.insert((equation.to_string(), series.to_string(), lag));
        self
    }

    /// Drops each series' own lag `lag` from its equation.
    pub fn exclude_own_lag(mut self, names: &[String], lag: usize) -> Self {
        for n in names {
            self.excluded.insert((n.clone(), n.clone(), lag));
        }
        self
    }

    pub fn is_excluded(&self, equation: &str, series: &str, lag: usize) -> bool {
        self.excluded.contains(&(equation.to_string(), series.to_string(), lag))
    }

    pub fn is_empty(&self) -> bool {
        self.excluded.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VarFit {
    pub lag_order: usize,
    pub names: Vec<String>,
    /// One fit per series, in dataset order.
    pub equations: Vec<OlsFit>,
    #[serde(skip)]
    pub specs: Vec<RegressionSpec>,
    /// Residual covariance `E'E / n`.
    #[serde(skip)]
    pub sigma: Matrix,
    pub n_effective: usize,
    pub mask: TermMask,
}

impl VarFit {
    pub fn equation(&self, name: &str) -> Option<&OlsFit> {
        self.names.iter().position(|n| n == name).map(|i| &self.equations[i])
    }

    /// Coefficient on lag `lag` of `series` in the equation of `equation`.
    pub fn coefficient(&self, equation: &str, series: &str, lag: usize) -> Option<f64> {
        let fit = self.equation(equation)?;
        let term = SeriesRef::level(series).at(lag).to_string();
        fit.position(&term).map(|j| fit.coefficients[j])
    }
}

fn equation_spec(names: &[String], eq: usize, p: usize, mask: Option<&TermMask>, start: usize) -> RegressionSpec {
    let mut terms = Vec::new();
    for s in names {
        for lag in 1..=p {
            if !mask.is_some_and(|m| m.is_excluded(&names[eq], s, lag)) {
                terms.push(SeriesRef::level(s.clone()).at(lag));
            }
        }
    }
    RegressionSpec::new(SeriesRef::level(names[eq].clone()), terms)
        .with_intercept(true)
        .with_covariance(Covariance::Classical)
        .with_sample_start(start)
}

fn fit_system(d: &Dataset, p: usize, mask: Option<&TermMask>, start: usize) -> Result<(Vec<RegressionSpec>, Vec<OlsFit>)> {
    let names = d.names();
    let specs: Vec<RegressionSpec> = (0..names.len()).map(|eq| equation_spec(names, eq, p, mask, start)).collect();
    let fits = specs.iter().map(|s| ols_fit(s, d)).collect::<Result<Vec<_>>>()?;
    Ok((specs, fits))
}

fn residual_covariance(fits: &[OlsFit]) -> Matrix {
    let m = fits.len();
    let n = fits[0].n_effective as f64;
    let mut s = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = crate::linalg::dot(&fits[i].residuals, &fits[j].residuals) / n;
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

fn check_length(d: &Dataset, start: usize, r: usize) -> Result<()> {
    let needed = start + r + 1;
    if d.len() < needed {
        return Err(Error::TooShort { needed, got: d.len() });
    }
    Ok(())
}

pub fn var_fit(d: &Dataset, p: usize, exclusions: Option<&TermMask>) -> Result<VarFit> {
    if p == 0 {
        return Err(Error::InvalidSpec("VAR lag order must be positive".into()));
    }
    check_length(d, p, 1 + d.n_series() * p)?;
    let (specs, equations) = fit_system(d, p, exclusions, p)?;
    Ok(VarFit {
        lag_order: p,
        names: d.names().to_vec(),
        sigma: residual_covariance(&equations),
        n_effective: equations[0].n_effective,
        equations,
        specs,
        mask: exclusions.cloned().unwrap_or_default(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagRow {
    pub lag: usize,
    pub log_likelihood: f64,
    /// Sequential modified LR statistic; `None` at lag 0.
    pub lr: Option<f64>,
    pub lr_p: Option<f64>,
    pub fpe: f64,
    pub aic: f64,
    pub sc: f64,
    pub hq: f64,
}

/// The lag each criterion selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LagStars {
    pub lr: usize,
    pub fpe: usize,
    pub aic: usize,
    pub sc: usize,
    pub hq: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagSelectionTable {
    pub rows: Vec<LagRow>,
    pub stars: LagStars,
    pub n_effective: usize,
    pub n_series: usize,
}

/// Size of each LR test in the sequential procedure.
pub const LR_LEVEL: f64 = 0.05;

pub fn lag_selection(d: &Dataset, max_lag: usize) -> Result<LagSelectionTable> {
    lag_selection_with(d, max_lag, Exec::default())
}

pub fn lag_selection_with(d: &Dataset, max_lag: usize, exec: Exec) -> Result<LagSelectionTable> {
    let m = d.n_series();
    check_length(d, max_lag, 1 + m * max_lag)?;
    // (log|Σ̂_p|, n) per candidate lag, all on the max_lag-trimmed sample.
    let fits: Vec<(f64, usize)> = map_range(exec, max_lag + 1, |p| {
        let (_, fits) = fit_system(d, p, None, max_lag)?;
        let sigma = residual_covariance(&fits);
        let l = cholesky(&sigma).ok_or(Error::SingularCovariance)?;
        Ok((cholesky_log_det(&l), fits[0].n_effective))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let mf = m as f64;
    let ln2pi = (2.0 * std::f64::consts::PI).ln();
    let mut rows = Vec::with_capacity(max_lag + 1);
    for (p, &(log_det, n)) in fits.iter().enumerate() {
        let nf = n as f64;
        let r = 1 + m * p;
        let k = (m * r) as f64;
        let ll = -0.5 * nf * (mf * (1.0 + ln2pi) + log_det);
        let (lr, lr_p) = if p == 0 {
            (None, None)
        } else {
            let stat = (nf - r as f64) * (fits[p - 1].0 - log_det);
            (Some(stat), Some(chi2_sf(stat, m * m)))
        };
        rows.push(LagRow {
            lag: p,
            log_likelihood: ll,
            lr,
            lr_p,
            fpe: log_det.exp() * ((nf + r as f64) / (nf - r as f64)).powi(m as i32),
            aic: -2.0 * ll / nf + 2.0 * k / nf,
            sc: -2.0 * ll / nf + k * nf.ln() / nf,
            hq: -2.0 * ll / nf + 2.0 * k * nf.ln().ln() / nf,
        });
    }
    let argmin = |f: fn(&LagRow) -> f64| crate::unit_root::argmin_first(&rows.iter().map(f).collect::<Vec<_>>());
    // Test down from the largest lag; the first rejection selects.
    let lr = rows.iter().rev().find(|r| r.lr_p.is_some_and(|p| p < LR_LEVEL)).map_or(0, |r| r.lag);
    let stars = LagStars { lr, fpe: argmin(|r| r.fpe), aic: argmin(|r| r.aic), sc: argmin(|r| r.sc), hq: argmin(|r| r.hq) };
    Ok(LagSelectionTable { n_effective: fits[0].1, n_series: m, rows, stars })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrangerResult {
    pub cause: String,
    pub effect: String,
    pub f_statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
    pub n_effective: usize,
}

/// Tests whether lags of `cause` help predict `effect` in a VAR(p) on all
/// series of `d`.
pub fn granger_test(d: &Dataset, cause: &str, effect: &str, p: usize) -> Result<GrangerResult> {
    granger_test_masked(d, cause, effect, p, None)
}

/// As [`granger_test`], on a VAR with some lags excluded. Only lags of
/// `cause` still present in the effect equation are tested.
pub fn granger_test_masked(d: &Dataset, cause: &str, effect: &str, p: usize, mask: Option<&TermMask>) -> Result<GrangerResult> {
    d.position(cause)?;
    let eq = d.position(effect)?;
    if cause == effect {
        return Err(Error::InvalidSpec("cause and effect must differ".into()));
    }
    if p == 0 {
        return Err(Error::InvalidSpec("VAR lag order must be positive".into()));
    }
    check_length(d, p, 1 + d.n_series() * p)?;
    let names = d.names();
    let unrestricted = ols_fit(&equation_spec(names, eq, p, mask, p), d)?;
    let mut restricted_mask = mask.cloned().unwrap_or_default();
    let mut df1 = 0;
    for lag in 1..=p {
        if !restricted_mask.is_excluded(effect, cause, lag) {
            restricted_mask = restricted_mask.exclude(effect, cause, lag);
            df1 += 1;
        }
    }
    if df1 == 0 {
        return Err(Error::InvalidSpec(format!("no lags of `{cause}` left to test")));
    }
    let restricted = ols_fit(&equation_spec(names, eq, p, Some(&restricted_mask), p), d)?;
    let df2 = unrestricted.df_resid();
    let f = ((restricted.ssr - unrestricted.ssr) / df1 as f64) / (unrestricted.ssr / df2 as f64);
    let f = f.max(0.0);
    Ok(GrangerResult {
        cause: cause.to_string(),
        effect: effect.to_string(),
        f_statistic: f,
        df1,
        df2,
        p_value: f_sf(f, df1, df2),
        n_effective: unrestricted.n_effective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::Period;
    use crate::sim;
    use proptest::prelude::*;
    use rand_distr::StandardNormal;
    use rand::Rng;

    fn pair(x: Vec<f64>, y: Vec<f64>) -> Dataset {
        Dataset::from_columns(Period::month(1800, 1).range(x.len()), vec![("x".into(), x), ("y".into(), y)]).unwrap()
    }

    fn driven(seed: u64, n: usize, b: f64) -> Dataset {
        let mut g = sim::rng(seed, 0);
        let x = sim::normals(&mut g, n);
        let mut y = vec![0.0; n];
        for t in 1..n {
            y[t] = b * x[t - 1] + g.sample::<f64, _>(StandardNormal);
        }
        pair(x, y)
    }

    #[test]
    fn cross_coefficient_recovered() {
        let v = var_fit(&driven(5, 5000, 0.5), 1, None).unwrap();
        assert!((v.coefficient("y", "x", 1).unwrap() - 0.5).abs() < 0.05);
        assert!(v.coefficient("x", "y", 1).unwrap().abs() < 0.05);
        assert!(v.coefficient("x", "x", 1).unwrap().abs() < 0.05);
        assert!(v.sigma.is_symmetric(0.0));
        assert_eq!(v.n_effective, 4999);
    }

    #[test]
    fn mask_removes_terms() {
        let d = driven(1, 200, 0.5);
        let mask = TermMask::new().exclude_own_lag(d.names(), 3);
        let v = var_fit(&d, 3, Some(&mask)).unwrap();
        assert!(!v.equations[0].names.contains(&"x(-3)".to_string()));
        assert!(v.equations[0].names.contains(&"y(-3)".to_string()));
        assert!(v.equation("y").unwrap().position("y(-3)").is_none());
        assert_eq!(v.equations[0].k_terms, 6);
    }

    #[test]
    fn equations_match_standalone_ols() {
        let d = driven(2, 150, 0.3);
        let v = var_fit(&d, 2, None).unwrap();
        let spec: RegressionSpec = RegressionSpec::new(
            SeriesRef::level("y"),
            vec!["x@1".parse().unwrap(), "x@2".parse().unwrap(), "y@1".parse().unwrap(), "y@2".parse().unwrap()],
        )
        .with_sample_start(2);
        let f = ols_fit(&spec, &d).unwrap();
        assert_eq!(f.coefficients, v.equations[1].coefficients);
        // Residuals are orthogonal to the regressors of their equation.
        let xe: f64 = v.equations[1].residuals.iter().zip(&d.column("x").unwrap()[1..]).map(|(e, x)| e * x).sum();
        assert!(xe.abs() < 1e-9);
    }

    #[test]
    fn granger_detects_strong_causality() {
        let g = granger_test(&driven(9, 1600, 0.5), "x", "y", 1).unwrap();
        assert!(g.p_value < 0.001 && g.f_statistic > 100.0);
        assert_eq!((g.df1, g.df2, g.n_effective), (1, 1596, 1599));
        let back = granger_test(&driven(9, 1600, 0.5), "y", "x", 2).unwrap();
        assert_eq!(back.df1, 2);
    }

    #[test]
    fn granger_f_equals_squared_t_for_one_lag() {
        let d = driven(4, 300, 0.1);
        let g = granger_test(&d, "x", "y", 1).unwrap();
        let v = var_fit(&d, 1, None).unwrap();
        let eq = v.equation("y").unwrap();
        let t = eq.t_stats[eq.position("x(-1)").unwrap()];
        assert!((g.f_statistic - t * t).abs() < 1e-8 * g.f_statistic.max(1.0));
    }

    #[test]
    fn masked_granger_counts_remaining_lags() {
        let d = driven(4, 300, 0.1);
        let mask = TermMask::new().exclude("y", "x", 3);
        assert_eq!(granger_test_masked(&d, "x", "y", 3, Some(&mask)).unwrap().df1, 2);
        assert!(matches!(granger_test(&d, "x", "x", 1), Err(Error::InvalidSpec(_))));
        assert!(matches!(granger_test(&d, "z", "x", 1), Err(Error::UnknownSeries(_))));
    }

    #[test]
    fn lag_table_shape_and_stars() {
        let t = lag_selection(&driven(3, 400, 0.5), 4).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert!(t.rows[0].lr.is_none());
        assert!(t.rows[1..].iter().all(|r| r.lr.is_some()));
        assert_eq!(t.n_effective, 396);
        assert_eq!(t.stars.sc, 1);
        for r in &t.rows {
            assert!(r.aic.is_finite() && r.fpe > 0.0);
        }
    }

    #[test]
    fn lag_selection_criteria_by_hand() {
        // Lag 0 on a common sample: Σ̂ is the ML covariance of the series.
        let d = driven(8, 60, 0.5);
        let t = lag_selection(&d, 2).unwrap();
        let (x, y) = (&d.column("x").unwrap()[2..], &d.column("y").unwrap()[2..]);
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxx = x.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / n;
        let syy = y.iter().map(|v| (v - my).powi(2)).sum::<f64>() / n;
        let sxy = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
        let det = sxx * syy - sxy * sxy;
        let ll = -0.5 * n * (2.0 * (1.0 + (2.0 * std::f64::consts::PI).ln()) + det.ln());
        let r0 = &t.rows[0];
        assert!((r0.log_likelihood - ll).abs() < 1e-9 * ll.abs());
        assert!((r0.aic - (-2.0 * ll / n + 4.0 / n)).abs() < 1e-12);
        assert!((r0.fpe - det * ((n + 1.0) / (n - 1.0)).powi(2)).abs() < 1e-12 * det);
    }

    #[test]
    fn singular_covariance() {
        let mut g = sim::rng(1, 0);
        let x = sim::normals(&mut g, 50);
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        assert!(matches!(var_fit(&pair(x.clone(), y.clone()), 1, None), Err(Error::RankDeficient { .. })));
        assert!(matches!(lag_selection(&pair(x, y), 0), Err(Error::SingularCovariance)));
    }

    #[test]
    fn sequential_and_parallel_tables_agree() {
        let d = driven(6, 300, 0.2);
        assert_eq!(lag_selection_with(&d, 5, Exec::Sequential).unwrap(), lag_selection_with(&d, 5, Exec::Parallel).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn granger_affine_invariance(seed in any::<u64>(), a in prop_oneof![-50.0f64..-0.1, 0.1f64..50.0], b in -100.0f64..100.0,
                                     c in 0.1f64..50.0, e in -100.0f64..100.0) {
            let d = driven(seed, 120, 0.2);
            let g1 = granger_test(&d, "x", "y", 2).unwrap();
            let x: Vec<f64> = d.column("x").unwrap().iter().map(|v| a * v + b).collect();
            let y: Vec<f64> = d.column("y").unwrap().iter().map(|v| c * v + e).collect();
            let g2 = granger_test(&pair(x, y), "x", "y", 2).unwrap();
            prop_assert!((g1.f_statistic - g2.f_statistic).abs() <= 1e-9 * (1.0 + g1.f_statistic));
            prop_assert!(g1.f_statistic >= 0.0 && (0.0..=1.0).contains(&g1.p_value));
        }

        #[test]
        fn one_star_per_column(seed in any::<u64>()) {
            let t = lag_selection(&driven(seed, 80, 0.3), 3).unwrap();
            for s in [t.stars.lr, t.stars.fpe, t.stars.aic, t.stars.sc, t.stars.hq] {
                prop_assert!(s <= 3);
            }
            let best = t.rows[t.stars.sc].sc;
            prop_assert!(t.rows.iter().all(|r| r.sc >= best));
        }
    }
}
