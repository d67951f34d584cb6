use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::{ArdlFit, BoundsCase};
use crate::regression::wald_f;
use crate::{Error, Result};

/// Critical bounds for one case, regressor count and significance level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsRow {
    pub case: BoundsCase,
    pub k: usize,
    pub level: f64,
    /// I(0) bound.
    pub lower: f64,
    /// I(1) bound.
    pub upper: f64,
}

/// A set of bounds-test critical values.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsTable {
    rows: Vec<BoundsRow>,
}

/// Asymptotic F bounds for case I (no intercept, no trend) with five level
/// regressors, from Pesaran, Shin and Smith (2001), Table CI(i).
const CASE_I_K5: [(f64, f64, f64); 3] = [(0.10, 1.81, 2.93), (0.05, 2.14, 3.34), (0.01, 2.82, 4.21)];

impl BoundsTable {
    pub fn embedded() -> Self {
        BoundsTable {
            rows: CASE_I_K5
                .iter()
                .map(|&(level, lower, upper)| BoundsRow { case: BoundsCase::I, k: 5, level, lower, upper })
                .collect(),
        }
    }

    pub fn new(rows: Vec<BoundsRow>) -> Result<Self> {
        let t = BoundsTable { rows };
        t.validate()?;
        Ok(t)
    }

    pub fn rows(&self) -> &[BoundsRow] {
        &self.rows
    }

    /// Rows for `(case, k)`, most lenient level first.
    pub fn lookup(&self, case: BoundsCase, k: usize) -> Vec<BoundsRow> {
        let mut v: Vec<BoundsRow> = self.rows.iter().filter(|r| r.case == case && r.k == k).copied().collect();
        v.sort_by(|a, b| b.level.total_cmp(&a.level));
        v
    }

    /// CSV with header `case,k,level,lower,upper`; `level` is a fraction
    /// (`0.05`) or a percentage (`5%`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
        let expected = ["case", "k", "level", "lower", "upper"];
        if header != expected {
            return Err(Error::Parse { row: 1, col: 1, msg: format!("bounds table header must be `{}`", expected.join(",")) });
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let row = i + 2;
            let field = |col: usize| rec.get(col).unwrap_or("");
            let bad = |col: usize, what: &str| Error::Parse { row, col: col + 1, msg: format!("invalid {what} `{}`", field(col)) };
            let num = |col: usize, what: &str| field(col).parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad(col, what));
            let case: BoundsCase = field(0).parse().map_err(|_| bad(0, "case"))?;
            let k: usize = field(1).parse().map_err(|_| bad(1, "k"))?;
            let level = parse_level(field(2)).ok_or_else(|| bad(2, "level"))?;
            rows.push(BoundsRow { case, k, level, lower: num(3, "lower bound")?, upper: num(4, "upper bound")? });
        }
        Self::new(rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Bounds must be ordered within a row, and tighten monotonically as
    /// the level falls, so that verdicts are monotone in the level.
    fn validate(&self) -> Result<()> {
        for r in &self.rows {
            if !(r.lower < r.upper) {
                return Err(Error::InvalidSpec(format!("bounds for case {} k={} level {} are not ordered", r.case, r.k, r.level)));
            }
        }
        for (i, a) in self.rows.iter().enumerate() {
            for b in &self.rows[i + 1..] {
                if a.case == b.case && a.k == b.k {
                    if a.level == b.level {
                        return Err(Error::InvalidSpec(format!("duplicate bounds for case {} k={} level {}", a.case, a.k, a.level)));
                    }
                    let (lo, hi) = if a.level > b.level { (a, b) } else { (b, a) };
                    if hi.lower < lo.lower || hi.upper < lo.upper {
                        return Err(Error::InvalidSpec(format!("bounds for case {} k={} do not widen as the level falls", a.case, a.k)));
                    }
                }
            }
        }
        Ok(())
    }
}

fn parse_level(s: &str) -> Option<f64> {
    let (num, pct) = match s.strip_suffix('%') {
        Some(n) => (n.trim(), true),
        None => (s, false),
    };
    let v: f64 = num.parse().ok()?;
    let v = if pct || v >= 1.0 { v / 100.0 } else { v };
    (v > 0.0 && v < 1.0).then_some(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsOutcome {
    Cointegrated,
    Inconclusive,
    NotCointegrated,
}

impl fmt::Display for BoundsOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundsOutcome::Cointegrated => "cointegrated",
            BoundsOutcome::Inconclusive => "inconclusive",
            BoundsOutcome::NotCointegrated => "not_cointegrated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelVerdict {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    pub outcome: BoundsOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsVerdict {
    pub f_statistic: f64,
    pub k: usize,
    pub case: BoundsCase,
    /// Most lenient level first.
    pub levels: Vec<LevelVerdict>,
}

pub(crate) fn percent(level: f64) -> String {
    let p = level * 100.0;
    if (p - p.round()).abs() < 1e-9 {
        format!("{}%", p.round())
    } else {
        format!("{p}%")
    }
}

impl BoundsVerdict {
    pub fn outcome_at(&self, level: f64) -> Option<BoundsOutcome> {
        self.levels.iter().find(|l| (l.level - level).abs() < 1e-12).map(|l| l.outcome)
    }

    /// The strictest level at which the relationship is detected, if any.
    pub fn strongest(&self) -> Option<f64> {
        self.levels.iter().filter(|l| l.outcome == BoundsOutcome::Cointegrated).map(|l| l.level).reduce(f64::min)
    }

    /// One-line verdict, e.g. `cointegrated at 1%`.
    pub fn summary(&self) -> String {
        if let Some(level) = self.strongest() {
            return format!("cointegrated at {}", percent(level));
        }
        match self.levels.iter().find(|l| l.outcome == BoundsOutcome::Inconclusive) {
            Some(l) => format!("inconclusive at {}", percent(l.level)),
            None => "not cointegrated".to_string(),
        }
    }
}

/// Compares an F statistic with the bounds for `(case, k)`, looking in
/// `table` first and then in the embedded values.
pub fn bounds_verdict(f: f64, k: usize, case: BoundsCase, table: Option<&BoundsTable>) -> Result<BoundsVerdict> {
    let mut rows = table.map(|t| t.lookup(case, k)).unwrap_or_default();
    if rows.is_empty() {
        rows = BoundsTable::embedded().lookup(case, k);
    }
    if rows.is_empty() {
        return Err(Error::MissingBoundsTable { case: case.to_string(), k });
    }
    let levels = rows
        .into_iter()
        .map(|r| LevelVerdict {
            level: r.level,
            lower: r.lower,
            upper: r.upper,
            outcome: if f > r.upper {
                BoundsOutcome::Cointegrated
            } else if f < r.lower {
                BoundsOutcome::NotCointegrated
            } else {
                BoundsOutcome::Inconclusive
            },
        })
        .collect();
    Ok(BoundsVerdict { f_statistic: f, k, case, levels })
}

/// Wald F on the level block (plus the restricted intercept or trend in
/// cases II and IV) under the fit's covariance estimator. Tabulated bounds
/// assume classical errors; set the specification's covariance to
/// `Classical` to match them exactly.
pub fn bounds_test(fit: &ArdlFit, table: Option<&BoundsTable>) -> Result<BoundsVerdict> {
    let mut idx = fit.level_indices();
    match fit.spec.case {
        BoundsCase::II => idx.push(fit.fit.position("const").expect("case II has an intercept")),
        BoundsCase::IV => idx.push(fit.fit.position("trend").expect("case IV has a trend")),
        _ => {}
    }
    let w = wald_f(&fit.fit, &idx)?;
    bounds_verdict(w.f, fit.spec.k(), fit.spec.case, table)
}
