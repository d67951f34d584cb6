//! Data-generating processes and oracles shared by the integration suites.
#![allow(dead_code)]

use cointkit::dataio::{Dataset, Period};
use cointkit::sim::{self, SimRng};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn frame(cols: Vec<(&str, Vec<f64>)>) -> Dataset {
    let n = cols[0].1.len();
    Dataset::from_columns(Period::month(1950, 1).range(n), cols.into_iter().map(|(k, v)| (k.to_string(), v)).collect()).unwrap()
}

pub fn normal(g: &mut SimRng) -> f64 {
    g.sample(StandardNormal)
}

/// `y = 1 + 0.5 x + e` with the given error vector and standard normal `x`.
pub fn linear(g: &mut SimRng, e: &[f64]) -> Dataset {
    let x = sim::normals(g, e.len());
    let y = x.iter().zip(e).map(|(a, b)| 1.0 + 0.5 * a + b).collect();
    frame(vec![("y", y), ("x", x)])
}

/// AR(1) errors with coefficient `rho`, started from the stationary law.
pub fn ar_errors(g: &mut SimRng, n: usize, rho: f64) -> Vec<f64> {
    let mut e = vec![normal(g) / (1.0 - rho * rho).sqrt()];
    for t in 1..n {
        e.push(rho * e[t - 1] + normal(g));
    }
    e
}

/// `x` a random walk, `Δy = λ (y₋₁ − 2 x₋₁) + e`.
pub fn ecm_pair(g: &mut SimRng, n: usize, lambda: f64) -> Dataset {
    let x = sim::random_walk(g, n);
    let mut y = vec![2.0 * x[0]];
    for t in 1..n {
        let gap = y[t - 1] - 2.0 * x[t - 1];
        y.push(y[t - 1] + lambda * gap + normal(g));
    }
    frame(vec![("y", y), ("x", x)])
}

/// Stationary VAR(1) where `x` drives `y` and `y` never feeds back.
pub fn one_way_var(g: &mut SimRng, n: usize) -> Dataset {
    let burn = 50;
    let (mut x, mut y) = (vec![0.0; n + burn], vec![0.0; n + burn]);
    for t in 1..n + burn {
        x[t] = 0.5 * x[t - 1] + normal(g);
        y[t] = 0.2 * y[t - 1] + 0.4 * x[t - 1] + normal(g);
    }
    frame(vec![("x", x[burn..].to_vec()), ("y", y[burn..].to_vec())])
}

/// `y = 1 + β_t x + e`, with `x ~ N(1, 1)` and β doubling from 1 to 2 at
/// `break_at`.
pub fn slope_break(g: &mut SimRng, n: usize, break_at: usize) -> Dataset {
    let x: Vec<f64> = (0..n).map(|_| 1.0 + normal(g)).collect();
    let y = (0..n).map(|t| 1.0 + if t < break_at { 1.0 } else { 2.0 } * x[t] + normal(g)).collect();
    frame(vec![("y", y), ("x", x)])
}

/// `y = 1 + 0.5 x + x·z` with `x ~ U(1, 4)`, so the error variance is
/// proportional to `x²`.
pub fn heteroskedastic(g: &mut SimRng, n: usize) -> Dataset {
    let x: Vec<f64> = (0..n).map(|_| g.random_range(1.0..4.0)).collect();
    let y = x.iter().map(|v| 1.0 + 0.5 * v + v * normal(g)).collect();
    frame(vec![("y", y), ("x", x)])
}

pub fn rate(hits: impl IntoIterator<Item = bool>) -> f64 {
    let (mut k, mut n) = (0usize, 0usize);
    for h in hits {
        k += usize::from(h);
        n += 1;
    }
    k as f64 / n as f64
}

/// Solves `(X'X) b = X'y` by Gauss-Jordan elimination with partial
/// pivoting. `x` is row-major with `k` columns.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = x[0].len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, yi) in x.iter().zip(y) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += row[i] * row[j];
            }
            a[i][k] += row[i] * yi;
        }
    }
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let pivot = a[c][c];
        for v in a[c].iter_mut() {
            *v /= pivot;
        }
        let src = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c {
                let f = row[c];
                for (d, s) in row.iter_mut().zip(&src) {
                    *d -= f * s;
                }
            }
        }
    }
    a.iter().map(|r| r[k]).collect()
}
