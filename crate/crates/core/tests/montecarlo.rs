//! Simulation oracles for sizes, powers and estimator recovery.

mod common;

use cointkit::ardl::{ardl_search, bounds_test, ArdlOrders, ArdlSpec};
use cointkit::diagnostics::{breusch_godfrey, durbin_watson};
use cointkit::par::Exec;
use cointkit::regression::{ols_fit, Bandwidth, Covariance, InfoCriterion, RegressionSpec, SeriesRef};
use cointkit::sim::{self, monte_carlo};
use cointkit::var::{granger_test, lag_selection, var_fit};
use common::*;

fn slope_spec() -> RegressionSpec {
    RegressionSpec::new(SeriesRef::level("y"), vec![SeriesRef::level("x").at(0)])
}

#[test]
fn bg_power_against_ar1_errors() {
    let spec = slope_spec();
    let power = rate(monte_carlo(200, 101, Exec::Parallel, |_, g| {
        let e = ar_errors(g, 200, 0.7);
        let d = linear(g, &e);
        breusch_godfrey(&ols_fit(&spec, &d).unwrap(), &spec, &d, 1).unwrap().p < 0.05
    }));
    assert!(power >= 0.95, "{power}");
}

#[test]
fn dw_tracks_residual_autocorrelation() {
    let mut g = sim::rng(102, 0);
    let dw = durbin_watson(&ar_errors(&mut g, 5000, 0.5)).unwrap();
    assert!((dw - 1.0).abs() < 0.1, "{dw}");
}

#[test]
fn white_agrees_with_classical_when_homoskedastic() {
    let mut g = sim::rng(103, 0);
    let e = sim::normals(&mut g, 10_000);
    let d = linear(&mut g, &e);
    let classical = ols_fit(&slope_spec(), &d).unwrap();
    let white = ols_fit(&slope_spec().with_covariance(Covariance::White), &d).unwrap();
    for j in 0..2 {
        let r = white.std_errors[j] / classical.std_errors[j];
        assert!((r - 1.0).abs() < 0.05, "{j}: {r}");
    }
}

#[test]
fn hac_exceeds_hc0_under_serial_correlation() {
    let hits = monte_carlo(500, 104, Exec::Parallel, |_, g| {
        let x = ar_errors(g, 200, 0.7);
        let e = ar_errors(g, 200, 0.7);
        let y: Vec<f64> = x.iter().zip(&e).map(|(a, b)| 1.0 + 0.5 * a + b).collect();
        let d = frame(vec![("y", y), ("x", x.clone())]);
        let fit = ols_fit(&slope_spec().with_covariance(Covariance::Hac(Bandwidth::Auto)), &d).unwrap();
        // HC0 slope variance for a simple regression: Σ(x−x̄)²e²/Sxx².
        let xbar = x.iter().sum::<f64>() / x.len() as f64;
        let sxx: f64 = x.iter().map(|v| (v - xbar).powi(2)).sum();
        let meat: f64 = x.iter().zip(&fit.residuals).map(|(v, r)| (v - xbar).powi(2) * r * r).sum();
        fit.std_errors[1] >= (meat / (sxx * sxx)).sqrt()
    });
    let share = rate(hits);
    assert!(share > 0.5, "{share}");
}

#[test]
fn granger_size_with_independent_effect() {
    let size = rate(monte_carlo(500, 105, Exec::Parallel, |_, g| {
        let x = sim::ar1(g, 200, 0.5, 50);
        let y = sim::normals(g, 200);
        granger_test(&frame(vec![("x", x), ("y", y)]), "x", "y", 2).unwrap().p_value < 0.05
    }));
    assert!((0.02..=0.08).contains(&size), "{size}");
}

#[test]
fn granger_power_on_long_sample() {
    let mut g = sim::rng(106, 0);
    let x = sim::normals(&mut g, 1600);
    let y: Vec<f64> = (0..1600).map(|t| if t == 0 { 0.0 } else { 0.5 * x[t - 1] } + normal(&mut g)).collect();
    let r = granger_test(&frame(vec![("x", x), ("y", y)]), "x", "y", 1).unwrap();
    assert!(r.f_statistic > 100.0 && r.p_value < 0.001, "{r:?}");
}

#[test]
fn var_coefficients_recover_population_values() {
    let mut g = sim::rng(107, 0);
    let (a, b) = (sim::normals(&mut g, 5000), sim::normals(&mut g, 5000));
    let v = var_fit(&frame(vec![("a", a), ("b", b)]), 1, None).unwrap();
    for (eq, s) in [("a", "b"), ("b", "a"), ("a", "a"), ("b", "b")] {
        assert!(v.coefficient(eq, s, 1).unwrap().abs() < 0.05);
    }
    let d = one_way_var(&mut g, 5000);
    let v = var_fit(&d, 1, None).unwrap();
    assert!((v.coefficient("y", "x", 1).unwrap() - 0.4).abs() < 0.05);
    assert!(v.coefficient("x", "y", 1).unwrap().abs() < 0.05);
}

#[test]
fn lag_selection_without_dynamics() {
    let stars = monte_carlo(200, 108, Exec::Parallel, |_, g| {
        let d = frame(vec![("a", sim::normals(g, 200)), ("b", sim::normals(g, 200))]);
        let t = lag_selection(&d, 4).unwrap();
        [t.stars.aic == 0, t.stars.sc == 0, t.stars.hq == 0]
    });
    let aic = rate(stars.iter().map(|s| s[0]));
    let sc = rate(stars.iter().map(|s| s[1]));
    let hq = rate(stars.iter().map(|s| s[2]));
    assert!(sc >= 0.90 && hq >= 0.90, "SC {sc} HQ {hq}");
    // AIC adds a lag whenever its LR statistic exceeds 2 per parameter, which
    // a χ²(4) does about 9% of the time at each of the four lags.
    assert!(aic >= 0.80, "AIC {aic}");
}

#[test]
fn lag_selection_finds_var1() {
    let share = rate(monte_carlo(200, 109, Exec::Parallel, |_, g| lag_selection(&one_way_var(g, 300), 4).unwrap().stars.sc == 1));
    assert!(share >= 0.90, "{share}");
}

/// `Δy = 0.4Δy₋₁ − 0.3Δy₋₂ + 0.5Δx + 0.6Δx₋₁ − 0.3y₋₁ + 0.6x₋₁ + e`.
fn ardl21(g: &mut sim::SimRng, n: usize) -> cointkit::dataio::Dataset {
    let x = sim::random_walk(g, n);
    let mut y = vec![2.0 * x[0], 2.0 * x[1], 2.0 * x[2]];
    for t in 3..n {
        let dy = 0.4 * (y[t - 1] - y[t - 2]) - 0.3 * (y[t - 2] - y[t - 3]) + 0.5 * (x[t] - x[t - 1]) + 0.6 * (x[t - 1] - x[t - 2])
            - 0.3 * y[t - 1]
            + 0.6 * x[t - 1]
            + normal(g);
        y.push(y[t - 1] + dy);
    }
    frame(vec![("y", y), ("x", x)])
}

#[test]
fn ardl_search_recovers_orders() {
    let spec = ArdlSpec::new("y", 4).regressor("x", 4).with_criterion(InfoCriterion::Sic).with_covariance(Covariance::Classical);
    let truth = ArdlOrders { p: 2, q: vec![1] };
    let share = rate(monte_carlo(100, 110, Exec::Parallel, |_, g| ardl_search(&spec, &ardl21(g, 300)).unwrap().orders == truth));
    assert!(share >= 0.80, "{share}");
}

#[test]
fn bounds_f_on_cointegrated_data() {
    let spec = ArdlSpec::new("BIST", 2)
        .regressor("CDS", 1)
        .regressor("EX", 1)
        .regressor("CPI", 1)
        .regressor("INT", 1)
        .fixed("DPOL")
        .with_covariance(Covariance::Classical);
    let share = rate(monte_carlo(200, 111, Exec::Parallel, |rep, _| {
        let d = sim::monthly_fixture(150, 1_000 + rep as u64);
        let fit = ardl_search(&spec, &d).unwrap();
        assert_eq!(fit.level_indices().len(), 6);
        bounds_test(&fit, None).unwrap().f_statistic > 4.21
    }));
    assert!(share >= 0.90, "{share}");
}
