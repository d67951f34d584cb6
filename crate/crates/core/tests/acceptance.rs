//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use cointkit::ardl::{bounds_verdict, ect_from_levels, ecm_fit, long_run_multipliers, ArdlSpec, BoundsCase, BoundsOutcome};
use cointkit::diagnostics::{breusch_godfrey, breusch_pagan_godfrey, cusum, white_test};
use cointkit::dist::{chi2_sf, f_sf};
use cointkit::linalg::Matrix;
use cointkit::par::Exec;
use cointkit::regression::{least_squares, ols_fit, wald_f, Covariance, RegressionSpec, SeriesRef};
use cointkit::report::{full_report_on, PipelineConfig};
use cointkit::sim::{self, monte_carlo};
use cointkit::stats::jarque_bera;
use cointkit::unit_root::{adf_test, AdfSpec};
use cointkit::var::granger_test;
use common::*;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Check {
    Check { pass, detail }
}

fn ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

/// Long-run multipliers from the published level coefficients.
fn long_run_arithmetic() -> Check {
    let bist: [(&str, f64, f64); 5] =
        [("CDS", -0.0140, -0.0855), ("EX", -1.2780, -7.7974), ("CPI", -0.2261, -1.3817), ("INT", -0.0584, -0.3586), ("DPOL", -0.0882, -0.5380)];
    let cds: [(&str, f64, f64); 4] = [("EX", 117.2774, 288.0093), ("CPI", 5.4331, 13.3426), ("INT", 3.2827, 8.0616), ("DPOL", 36.4096, 89.4153)];
    let start = Instant::now();
    let a = long_run_multipliers("BIST", -0.1639, &bist.map(|(n, p, _)| (n.to_string(), p)), None, None).unwrap();
    let b = long_run_multipliers("CDS", -0.4072, &cds.map(|(n, p, _)| (n.to_string(), p)), None, None).unwrap();
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    let mut ok = true;
    for (lr, expected) in [(&a, &bist[..]), (&b, &cds[..])] {
        for &(name, _, want) in expected {
            let got = lr.get(name).unwrap().value;
            let d = (got - want).abs();
            ok &= d <= 0.01 || d <= 1e-3 * want.abs();
            worst = worst.max(d);
        }
    }
    ok &= elapsed < Duration::from_millis(1);
    check(ok, format!("9 multipliers, worst |Δ| {worst:.4} (tol 0.01 abs or 0.1% rel), {}", ms(elapsed)))
}

fn bounds_verdicts() -> Check {
    let at = |f: f64, level: f64| bounds_verdict(f, 5, BoundsCase::I, None).unwrap().outcome_at(level).unwrap();
    let a = at(4.3927, 0.01) == BoundsOutcome::Cointegrated;
    let b = at(4.2055, 0.05) == BoundsOutcome::Cointegrated && at(4.2055, 0.01) == BoundsOutcome::Inconclusive;
    let c = [0.10, 0.05, 0.01].iter().all(|&l| at(1.0, l) == BoundsOutcome::NotCointegrated);
    check(a && b && c, format!("F=4.3927 coint@1%: {a}; F=4.2055 coint@5% & inconclusive@1%: {b}; F=1.0 not coint: {c}"))
}

fn distribution_anchors() -> Check {
    let mut ok = true;
    let mut worst_p = 0.0f64;
    for (jb, want) in [(3.69, 0.16), (4.05, 0.13), (1.00, 0.61)] {
        let p = chi2_sf(jb, 2);
        // χ²(2) has the closed-form survival function exp(−x/2).
        ok &= (p - (-jb / 2.0f64).exp()).abs() < 1e-12;
        ok &= (p - want).abs() <= 0.01;
        worst_p = worst_p.max((p - want).abs());
    }
    let jb_cds = jarque_bera(1.58, 4.93, 88);
    let jb_dpol = jarque_bera(3.83, 15.66, 88);
    ok &= (jb_cds - 50.42).abs() <= 1.0 && (jb_dpol - 802.72).abs() <= 1.0;
    let f1 = f_sf(7.33, 1, 1641);
    let f2 = f_sf(6.7360, 3, 1635);
    let f3 = f_sf(2.7865, 3, 1635);
    ok &= (f1 - 0.0069).abs() <= 0.0005 && (f2 - 0.0002).abs() <= 0.0002 && (f3 - 0.0395).abs() <= 0.003;
    check(
        ok,
        format!("JB p worst |Δ| {worst_p:.4}; JB {jb_cds:.2}, {jb_dpol:.2}; F p {f1:.4}, {f2:.4}, {f3:.4}"),
    )
}

fn ols_oracle() -> Check {
    let results = monte_carlo(1000, 4004, Exec::Parallel, |_, g| {
        use rand::Rng;
        let n = g.random_range(12..=50);
        let k = g.random_range(1..=5);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..k).map(|j| if j == 0 { 1.0 } else { normal(g) + 0.1 * i as f64 / n as f64 }).collect()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.iter().enumerate().map(|(j, v)| (j as f64 - 1.5) * v).sum::<f64>() + normal(g)).collect();
        let x = Matrix::from_row_major(n, k, rows.concat());
        let names: Vec<String> = (0..k).map(|j| format!("x{j}")).collect();
        let qr = least_squares(&x, &y, &names).unwrap();
        let oracle = normal_equations(&rows, &y);
        let coef_gap = qr.coefficients.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // Single-restriction Wald F against the squared t statistic.
        let cols: Vec<(String, Vec<f64>)> =
            std::iter::once(("y".to_string(), y.clone())).chain((1..k).map(|j| (format!("x{j}"), rows.iter().map(|r| r[j]).collect()))).collect();
        let d = cointkit::dataio::Dataset::from_columns(cointkit::dataio::Period::month(2000, 1).range(n), cols).unwrap();
        let terms = (1..k).map(|j| SeriesRef::level(format!("x{j}")).at(0)).collect();
        let fit = ols_fit(&RegressionSpec::new(SeriesRef::level("y"), terms), &d).unwrap();
        let j = g.random_range(0..k);
        let w = wald_f(&fit, &[j]).unwrap();
        let t2 = fit.t_stats[j] * fit.t_stats[j];
        (coef_gap, (w.f - t2).abs() / t2.max(1.0))
    });
    let coef = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let wald = results.iter().map(|r| r.1).fold(0.0, f64::max);
    check(coef < 1e-8 && wald < 1e-10, format!("1000 instances, max |Δβ| {coef:.2e} (tol 1e-8), max |F − t²| {wald:.2e} (tol 1e-10)"))
}

fn adf_monte_carlo() -> Check {
    let start = Instant::now();
    let spec = AdfSpec::default();
    let test = |s: Vec<f64>| {
        let d = frame(vec![("s", s)]);
        adf_test(&d.series("s").unwrap(), &spec).unwrap().rejects_at_5()
    };
    let size = rate(monte_carlo(500, 5005, Exec::Parallel, |_, g| test(sim::random_walk(g, 200))));
    let power = rate(monte_carlo(500, 5006, Exec::Parallel, |_, g| test(sim::ar1(g, 200, 0.5, 100))));
    let elapsed = start.elapsed();
    check(
        (0.02..=0.08).contains(&size) && power >= 0.90 && elapsed < Duration::from_secs(10),
        format!("size {:.1}% (2-8%), power vs AR(1) 0.5 {:.1}% (>= 90%), {:.2} s", size * 100.0, power * 100.0, elapsed.as_secs_f64()),
    )
}

fn granger_monte_carlo() -> Check {
    let r = monte_carlo(200, 6006, Exec::Parallel, |_, g| {
        let d = one_way_var(g, 250);
        (granger_test(&d, "x", "y", 1).unwrap().p_value < 0.05, granger_test(&d, "y", "x", 1).unwrap().p_value < 0.05)
    });
    let detect = rate(r.iter().map(|x| x.0));
    let false_pos = rate(r.iter().map(|x| x.1));
    check(detect >= 0.95 && false_pos <= 0.10, format!("true direction {:.1}% (>= 95%), reverse {:.1}% (<= 10%)", detect * 100.0, false_pos * 100.0))
}

fn ecm_recovery() -> Check {
    let spec = ArdlSpec::new("y", 1).regressor("x", 0).with_covariance(Covariance::Classical);
    let r = monte_carlo(100, 7007, Exec::Parallel, |_, g| {
        let d = ecm_pair(g, 300, -0.3);
        let levels = ols_fit(&spec.levels_regression(), &d).unwrap();
        let e = ecm_fit(&spec, &d, &ect_from_levels(&levels)).unwrap();
        (e.lambda, e.valid)
    });
    let mean = r.iter().map(|x| x.0).sum::<f64>() / r.len() as f64;
    let valid = rate(r.iter().map(|x| x.1));
    check(
        (-0.37..=-0.23).contains(&mean) && valid >= 0.90,
        format!("mean lambda {mean:.4} ([-0.37, -0.23]), valid {:.0}% (>= 90%)", valid * 100.0),
    )
}

fn cusum_monte_carlo() -> Check {
    let spec = RegressionSpec::new(SeriesRef::level("y"), vec![SeriesRef::level("x").at(0)]);
    let size = rate(monte_carlo(500, 8008, Exec::Parallel, |_, g| {
        let e = sim::normals(g, 200);
        !cusum(&spec, &linear(g, &e)).unwrap().stable
    }));
    let power = rate(monte_carlo(200, 8009, Exec::Parallel, |_, g| !cusum(&spec, &slope_break(g, 200, 100)).unwrap().stable));
    check(
        (0.02..=0.08).contains(&size) && power >= 0.80,
        format!("stable crossing {:.1}% (5 +/- 3pp), slope break detected {:.1}% (>= 80%)", size * 100.0, power * 100.0),
    )
}

fn diagnostics_monte_carlo() -> Check {
    let spec = RegressionSpec::new(SeriesRef::level("y"), vec![SeriesRef::level("x").at(0)]);
    let reject = |d: &cointkit::dataio::Dataset| {
        let fit = ols_fit(&spec, d).unwrap();
        [
            breusch_godfrey(&fit, &spec, d, 1).unwrap().p < 0.05,
            breusch_pagan_godfrey(&fit, &spec, d).unwrap().p < 0.05,
            white_test(&fit, &spec, d).unwrap().p < 0.05,
        ]
    };
    let null = monte_carlo(500, 9009, Exec::Parallel, |_, g| {
        let e = sim::normals(g, 200);
        reject(&linear(g, &e))
    });
    let bg_power = rate(monte_carlo(200, 9010, Exec::Parallel, |_, g| {
        let e = ar_errors(g, 200, 0.7);
        reject(&linear(g, &e))[0]
    }));
    let het = monte_carlo(200, 9011, Exec::Parallel, |_, g| reject(&heteroskedastic(g, 500)));
    let size: Vec<f64> = (0..3).map(|i| rate(null.iter().map(|r| r[i]))).collect();
    let power = [bg_power, rate(het.iter().map(|r| r[1])), rate(het.iter().map(|r| r[2]))];
    let ok = size.iter().all(|s| (0.02..=0.08).contains(s)) && power.iter().all(|p| *p >= 0.90);
    let pct = |v: &[f64]| v.iter().map(|x| format!("{:.1}%", x * 100.0)).collect::<Vec<_>>().join("/");
    check(ok, format!("BG/BPG/White size {} (2-8%), power {} (>= 90%)", pct(&size), pct(&power)))
}

fn pipeline_performance() -> Check {
    let d = sim::monthly_fixture(2000, 10);
    let mut c = PipelineConfig::new("BIST", ["CDS", "EX", "CPI", "INT"].map(String::from).to_vec());
    c.fixed = vec!["DPOL".into()];
    c.adf.max_lag = 8;
    c.ardl.max_p = 8;
    c.ardl.max_q = 8;
    let start = Instant::now();
    let a = full_report_on(&d, &c, Exec::Sequential).unwrap();
    let elapsed = start.elapsed();
    let b = full_report_on(&d, &c, Exec::Sequential).unwrap();
    let same = a.to_jsonl() == b.to_jsonl();
    let clean = a.first_failure().is_none();
    check(
        elapsed < Duration::from_secs(1) && same && clean,
        format!("n=2000, 6 series, grid 8x9^4: {}, byte-identical {same}, all stages ok {clean}", ms(elapsed)),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("long-run multiplier arithmetic", long_run_arithmetic),
        ("bounds verdicts", bounds_verdicts),
        ("distribution anchors", distribution_anchors),
        ("OLS oracle equivalence", ols_oracle),
        ("ADF Monte Carlo", adf_monte_carlo),
        ("Granger Monte Carlo", granger_monte_carlo),
        ("ECM recovery", ecm_recovery),
        ("CUSUM size and power", cusum_monte_carlo),
        ("diagnostics size and power", diagnostics_monte_carlo),
        ("pipeline performance and determinism", pipeline_performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let c = run();
        failed += usize::from(!c.pass);
        println!("{} [{:>2}] {name}: {}", if c.pass { "PASS" } else { "FAIL" }, i + 1, c.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
