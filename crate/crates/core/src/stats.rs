//! Descriptive statistics, Jarque-Bera, and Pearson correlation matrices.

use serde::Serialize;

use crate::dataio::{Dataset, TimeSeries};
use crate::dist::chi2_sf;
use crate::{Error, Result};

/// Summary of one series.
///
/// Skewness and kurtosis use biased (divisor `n`) central moments and the
/// kurtosis is not excess, so a normal sample gives values near 0 and 3.
/// The standard deviation uses divisor `n - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptiveSummary {
    pub name: String,
    pub mean: f64,
    pub median: f64,
    pub maximum: f64,
    pub minimum: f64,
    pub std_dev: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub jarque_bera: f64,
    pub jb_pvalue: f64,
    pub n: usize,
}

pub fn describe(s: &TimeSeries) -> Result<DescriptiveSummary> {
    describe_values(s.name(), s.values())
}

pub fn describe_values(name: &str, v: &[f64]) -> Result<DescriptiveSummary> {
    let n = v.len();
    if n < 4 {
        return Err(Error::TooShort { needed: 4, got: n });
    }
    let nf = n as f64;
    let mean = v.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in v {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if m2 <= 0.0 {
        return Err(Error::DegenerateSeries(name.to_string()));
    }
    let std_dev = (m2 / (nf - 1.0)).sqrt();
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    let skewness = m3 / m2.powf(1.5);
    let kurtosis = m4 / (m2 * m2);
    let jarque_bera = jarque_bera(skewness, kurtosis, n);

    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };

    Ok(DescriptiveSummary {
        name: name.to_string(),
        mean,
        median,
        maximum: sorted[n - 1],
        minimum: sorted[0],
        std_dev,
        skewness,
        kurtosis,
        jarque_bera,
        jb_pvalue: chi2_sf(jarque_bera, 2),
        n,
    })
}

/// `JB = n/6 · (S² + (K − 3)²/4)`.
pub fn jarque_bera(skewness: f64, kurtosis: f64, n: usize) -> f64 {
    n as f64 / 6.0 * (skewness * skewness + (kurtosis - 3.0).powi(2) / 4.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    /// Row-major, `names.len()` squared entries.
    pub entries: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.names.len() + j]
    }
}

pub fn correlation_matrix(d: &Dataset) -> Result<CorrelationMatrix> {
    let n = d.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let m = d.n_series();
    let centered: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let c = d.column_at(j);
            let mean = c.iter().sum::<f64>() / n as f64;
            c.iter().map(|x| x - mean).collect()
        })
        .collect();
    let ss: Vec<f64> = centered.iter().map(|c| c.iter().map(|x| x * x).sum()).collect();
    if let Some(j) = ss.iter().position(|s| *s <= 0.0) {
        return Err(Error::DegenerateSeries(d.names()[j].clone()));
    }
    let mut entries = vec![0.0; m * m];
    for i in 0..m {
        entries[i * m + i] = 1.0;
        for j in (i + 1)..m {
            let sxy: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
            let r = (sxy / (ss[i] * ss[j]).sqrt()).clamp(-1.0, 1.0);
            entries[i * m + j] = r;
            entries[j * m + i] = r;
        }
    }
    Ok(CorrelationMatrix { names: d.names().to_vec(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::Period;
    use proptest::prelude::*;

    fn ds(cols: Vec<(&str, Vec<f64>)>) -> Dataset {
        let n = cols[0].1.len();
        Dataset::from_columns(
            Period::month(2000, 1).range(n),
            cols.into_iter().map(|(a, b)| (a.to_string(), b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn four_point_summary() {
        // Oracle: mean 2.5, deviations ±0.5, ±1.5, sum of squares 5,
        // sample variance 5/3, symmetric so third moment is zero.
        let s = describe_values("x", &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.median, 2.5);
        assert!((s.std_dev - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.std_dev - 1.29099).abs() < 1e-5);
        assert!(s.skewness.abs() < 1e-15);
        // m2 = 1.25, m4 = (2·0.0625 + 2·5.0625)/4 = 2.5625 → K = 1.64
        assert!((s.kurtosis - 1.64).abs() < 1e-12);
    }

    #[test]
    fn jarque_bera_anchors() {
        assert!((jarque_bera(3.83, 15.66, 88) - 802.72).abs() < 1.0);
        assert!((jarque_bera(1.58, 4.93, 88) - 50.42).abs() < 1.0);
        assert_eq!(jarque_bera(0.0, 3.0, 88), 0.0);
        assert_eq!(chi2_sf(0.0, 2), 1.0);
    }

    #[test]
    fn constant_series_is_degenerate() {
        assert!(matches!(describe_values("c", &[2.0; 6]), Err(Error::DegenerateSeries(_))));
        assert!(matches!(describe_values("c", &[1.0, 2.0]), Err(Error::TooShort { .. })));
    }

    #[test]
    fn correlation_examples() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let c = correlation_matrix(&ds(vec![
            ("x", x.clone()),
            ("x2", x.clone()),
            ("neg", x.iter().map(|v| -v).collect()),
            ("y", vec![1.0, 3.0, 2.0, 4.0]),
        ]))
        .unwrap();
        assert_eq!(c.get(0, 1), 1.0);
        assert_eq!(c.get(0, 2), -1.0);
        // Sxy = 4, Sxx = Syy = 5
        assert!((c.get(0, 3) - 0.8).abs() < 4.0 * f64::EPSILON);
        assert_eq!(c.get(3, 0), c.get(0, 3));
        assert_eq!(c.get(2, 2), 1.0);
    }

    proptest! {
        #[test]
        fn negation_flips_skewness(v in prop::collection::vec(-100f64..100.0, 5..40)) {
            prop_assume!(v.iter().any(|x| (x - v[0]).abs() > 1e-3));
            let a = describe_values("a", &v).unwrap();
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            let b = describe_values("b", &neg).unwrap();
            prop_assert!((a.skewness + b.skewness).abs() < 1e-9);
            prop_assert!((a.kurtosis - b.kurtosis).abs() < 1e-9);
            prop_assert!(a.minimum <= a.median && a.median <= a.maximum);
            prop_assert!((0.0..=1.0).contains(&a.jb_pvalue));
        }

        #[test]
        fn jb_affine_invariant(v in prop::collection::vec(-100f64..100.0, 5..40), a in 0.1f64..10.0, b in -50f64..50.0, flip in any::<bool>()) {
            prop_assume!(v.iter().any(|x| (x - v[0]).abs() > 1e-3));
            let a = if flip { -a } else { a };
            let s1 = describe_values("a", &v).unwrap();
            let w: Vec<f64> = v.iter().map(|x| a * x + b).collect();
            let s2 = describe_values("b", &w).unwrap();
            prop_assert!((s1.jarque_bera - s2.jarque_bera).abs() <= 1e-7 * (1.0 + s1.jarque_bera));
        }
    }
}
