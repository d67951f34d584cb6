//! Regenerates `src/unit_root/tables.rs` by simulating Dickey-Fuller τ
//! statistics under a driftless Gaussian random walk started at zero.
//!
//! ```text
//! cargo run --release -p cointkit --example df_tables -- [reps] > crates/core/src/unit_root/tables.rs
//! ```

use cointkit::par::{map_range, Exec};
use cointkit::sim;

const SIZES: [usize; 8] = [25, 50, 100, 250, 500, 1000, 2500, 5000];
const PROBS: [f64; 27] = [
    0.001, 0.005, 0.01, 0.025, 0.05, 0.075, 0.10, 0.15, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.85, 0.90, 0.925, 0.95,
    0.975, 0.99, 0.995, 0.999, 0.9995, 0.0005, 0.0001, 0.9999,
];
const SEED: u64 = 0x00df_7ab1e5;

/// Residualizes `v` on a constant and, when `trend`, a linear trend.
fn detrend(v: &mut [f64], trend: bool) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    v.iter_mut().for_each(|x| *x -= mean);
    if trend {
        let tbar = (n - 1.0) / 2.0;
        let (mut stt, mut sty) = (0.0, 0.0);
        for (t, x) in v.iter().enumerate() {
            let d = t as f64 - tbar;
            stt += d * d;
            sty += d * x;
        }
        let b = sty / stt;
        v.iter_mut().enumerate().for_each(|(t, x)| *x -= b * (t as f64 - tbar));
    }
}

/// τ statistics for the none, constant and constant+trend regressions.
fn taus(walk: &[f64]) -> [f64; 3] {
    let t_obs = walk.len() - 1;
    let lagged: Vec<f64> = walk[..t_obs].to_vec();
    let dy: Vec<f64> = walk.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = [0.0; 3];
    for (case, k) in [(0usize, 1usize), (1, 2), (2, 3)] {
        let (mut x, mut y) = (lagged.clone(), dy.clone());
        if case > 0 {
            detrend(&mut x, case == 2);
            detrend(&mut y, case == 2);
        }
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let rho = sxy / sxx;
        let ssr: f64 = x.iter().zip(&y).map(|(a, b)| (b - rho * a).powi(2)).sum();
        let s2 = ssr / (t_obs - k) as f64;
        out[case] = rho / (s2 / sxx).sqrt();
    }
    out
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let i = h.floor() as usize;
    let w = h - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + w * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

fn main() {
    let reps: usize = std::env::args().nth(1).map_or(200_000, |s| s.parse().expect("reps"));
    let mut probs = PROBS.to_vec();
    probs.sort_by(f64::total_cmp);
    let mut table = vec![vec![Vec::new(); SIZES.len()]; 3];
    for (si, &n) in SIZES.iter().enumerate() {
        let stats = map_range(Exec::Parallel, reps, |r| {
            let mut g = sim::rng(SEED + n as u64, r as u64);
            let mut walk = vec![0.0];
            walk.extend(sim::random_walk(&mut g, n));
            taus(&walk)
        });
        for (case, row) in table.iter_mut().enumerate() {
            let mut v: Vec<f64> = stats.iter().map(|s| s[case]).collect();
            v.sort_by(f64::total_cmp);
            row[si] = probs.iter().map(|&p| quantile(&v, p)).collect::<Vec<_>>();
        }
        eprintln!("n = {n} done");
    }

    println!("//! Simulated Dickey-Fuller τ quantiles.");
    println!("//!");
    println!("//! Generated by `examples/df_tables.rs` with {reps} replications per sample");
    println!("//! size: a driftless Gaussian random walk started at zero, the lag-free test");
    println!("//! regression on `n` observations. Rows are indexed by deterministic case");
    println!("//! (none, constant, constant + trend), then sample size, then probability.");
    println!();
    println!("pub const SAMPLE_SIZES: [usize; {}] = {:?};", SIZES.len(), SIZES);
    println!();
    println!("pub const PROBS: [f64; {}] = [", probs.len());
    for p in &probs {
        println!("    {p},");
    }
    println!("];");
    println!();
    println!("pub const QUANTILES: [[[f64; {}]; {}]; 3] = [", probs.len(), SIZES.len());
    for row in &table {
        println!("    [");
        for q in row {
            let cells: Vec<String> = q.iter().map(|v| format!("{v:.4}")).collect();
            println!("        [{}],", cells.join(", "));
        }
        println!("    ],");
    }
    println!("];");
}
