//! End-to-end pipeline runs and their text and line-delimited JSON output.
//!
//! A run executes the configured stages in a fixed order. Every stage
//! yields a text block and a list of [`Record`]s, one per statistic, so
//! that everything printed can be recovered from the machine-readable
//! output at full precision.

mod config;
mod pipeline;
mod plot;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use config::{AdfOptions, ArdlOptions, CusumOptions, DiagnosticsOptions, OlsOptions, PipelineConfig, VarOptions};
pub use pipeline::{
    adf_output, ardl_output, bounds_output, corr_output, cusum_output, describe_output, fit_output, full_report, full_report_on, granger_output, load_for, sha256_hex, varselect_output, StageOutput,
};
pub use plot::{cusum_csv, cusum_svg, emit_cusum_plot};

use crate::diagnostics::CusumResult;
use crate::regression::OlsFit;
use crate::ErrorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Describe,
    Corr,
    Adf,
    Varselect,
    Granger,
    Var,
    Ols,
    Ardl,
    Bounds,
    Longrun,
    Ecm,
    Diagnostics,
    Cusum,
}

impl Stage {
    pub const DAILY: [Stage; 6] = [Stage::Describe, Stage::Corr, Stage::Adf, Stage::Varselect, Stage::Granger, Stage::Var];
    pub const MONTHLY: [Stage; 10] = [
        Stage::Describe,
        Stage::Corr,
        Stage::Adf,
        Stage::Ols,
        Stage::Ardl,
        Stage::Bounds,
        Stage::Longrun,
        Stage::Ecm,
        Stage::Diagnostics,
        Stage::Cusum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Describe => "describe",
            Stage::Corr => "corr",
            Stage::Adf => "adf",
            Stage::Varselect => "varselect",
            Stage::Granger => "granger",
            Stage::Var => "var",
            Stage::Ols => "ols",
            Stage::Ardl => "ardl",
            Stage::Bounds => "bounds",
            Stage::Longrun => "longrun",
            Stage::Ecm => "ecm",
            Stage::Diagnostics => "diagnostics",
            Stage::Cusum => "cusum",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One statistic in the machine-readable output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub stage: String,
    pub name: String,
    pub value: Option<f64>,
    pub se: Option<f64>,
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    pub fn new(stage: impl fmt::Display, name: impl Into<String>, value: f64) -> Self {
        Record { stage: stage.to_string(), name: name.into(), value: finite(value), se: None, p: None, note: None }
    }

    pub fn note(stage: impl fmt::Display, name: impl Into<String>, note: impl Into<String>) -> Self {
        Record { stage: stage.to_string(), name: name.into(), value: None, se: None, p: None, note: Some(note.into()) }
    }

    pub fn with_se(mut self, se: f64) -> Self {
        self.se = finite(se);
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = finite(p);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Records for every coefficient of a fit, named by term.
pub fn coefficient_records(stage: impl fmt::Display + Copy, prefix: &str, fit: &OlsFit) -> Vec<Record> {
    let mut out: Vec<Record> = fit
        .names
        .iter()
        .enumerate()
        .map(|(j, n)| Record::new(stage, format!("{prefix}{n}"), fit.coefficients[j]).with_se(fit.std_errors[j]).with_p(fit.p_values[j]))
        .collect();
    out.push(Record::new(stage, format!("{prefix}r_squared"), fit.r_squared));
    out.push(Record::new(stage, format!("{prefix}adj_r_squared"), fit.adj_r_squared));
    if let Some(dw) = fit.durbin_watson {
        out.push(Record::new(stage, format!("{prefix}durbin_watson"), dw));
    }
    out.push(Record::new(stage, format!("{prefix}n"), fit.n_effective as f64));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum StageStatus {
    Done,
    Failed { error: String, kind: ErrorKind },
    Skipped { reason: String },
}

#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: Stage,
    pub status: StageStatus,
    pub text: String,
    pub records: Vec<Record>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub version: String,
    pub config: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub stages: Vec<StageReport>,
    pub provenance: Provenance,
    /// The CUSUM path, kept for plotting.
    pub cusum: Option<CusumResult>,
}

impl RunReport {
    pub fn stage(&self, stage: Stage) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.stage == stage)
    }

    /// Kind of the first failed stage, if any.
    pub fn first_failure(&self) -> Option<(Stage, &str, ErrorKind)> {
        self.stages.iter().find_map(|s| match &s.status {
            StageStatus::Failed { error, kind } => Some((s.stage, error.as_str(), *kind)),
            _ => None,
        })
    }

    pub fn records(&self) -> Vec<Record> {
        let mut out = vec![
            Record::note("provenance", "input_sha256", &self.provenance.input_sha256),
            Record::note("provenance", "version", &self.provenance.version),
            Record::note("provenance", "config", &self.provenance.config),
        ];
        for s in &self.stages {
            match &s.status {
                StageStatus::Done => out.extend(s.records.iter().cloned()),
                StageStatus::Failed { error, .. } => out.push(Record::note(s.stage, "failed", error)),
                StageStatus::Skipped { reason } => out.push(Record::note(s.stage, "skipped", reason)),
            }
        }
        out
    }

    pub fn to_jsonl(&self) -> String {
        self.records().iter().map(|r| r.to_json() + "\n").collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            out.push_str(&format!("== {} ==\n", s.stage));
            match &s.status {
                StageStatus::Done => out.push_str(&s.text),
                StageStatus::Failed { error, .. } => out.push_str(&format!("failed: {error}\n")),
                StageStatus::Skipped { reason } => out.push_str(&format!("skipped: {reason}\n")),
            }
            out.push('\n');
        }
        out
    }
}

/// Significance stars: `*` below 10%, `**` below 5%, `***` below 1%.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.10 {
        "*"
    } else {
        ""
    }
}

/// Four decimals, `NA` for non-finite values, no negative zero.
pub fn fmt4(v: f64) -> String {
    if !v.is_finite() {
        return "NA".to_string();
    }
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

/// `coef*** (se)`.
pub fn coef_cell(b: f64, se: f64, p: f64) -> String {
    format!("{}{} ({})", fmt4(b), stars(p), fmt4(se))
}

/// A plain text table: first column left-aligned, the rest right-aligned.
#[derive(Debug, Clone, Default)]
pub struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        TextTable { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) -> &mut Self {
        self.rows.push(cells.into_iter().map(Into::into).collect());
        self
    }

    pub fn render(&self) -> String {
        let ncol = self.rows.iter().map(Vec::len).chain([self.header.len()]).max().unwrap_or(0);
        let mut widths = vec![0; ncol];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (j, c) in r.iter().enumerate() {
                widths[j] = widths[j].max(c.chars().count());
            }
        }
        let line = |r: &Vec<String>| {
            let cells: Vec<String> = (0..ncol)
                .map(|j| {
                    let c = r.get(j).map_or("", String::as_str);
                    if j == 0 {
                        format!("{c:<w$}", w = widths[j])
                    } else {
                        format!("{c:>w$}", w = widths[j])
                    }
                })
                .collect();
            cells.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * ncol.saturating_sub(1)));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_thresholds() {
        assert_eq!(stars(0.0069), "***");
        assert_eq!(stars(0.01), "**");
        assert_eq!(stars(0.0395), "**");
        assert_eq!(stars(0.05), "*");
        assert_eq!(stars(0.0999), "*");
        assert_eq!(stars(0.10), "");
        assert_eq!(stars(f64::NAN), "");
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt4(-0.00001), "0.0000");
        assert_eq!(fmt4(f64::NAN), "NA");
        assert_eq!(fmt4(288.00925), "288.0093");
        assert_eq!(coef_cell(-0.2018, 0.053, 0.0001), "-0.2018*** (0.0530)");
    }

    #[test]
    fn records_round_trip() {
        let r = Record::new(Stage::Ecm, "ECT(-1)", -0.20181234567891234).with_se(0.053).with_p(f64::NAN);
        let back: Record = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, Record { p: None, ..r.clone() });
        assert_eq!(back.value, Some(-0.20181234567891234));
        assert!(!r.to_json().contains("note"));
    }

    #[test]
    fn table_layout() {
        let mut t = TextTable::new(["", "a", "bb"]);
        t.row(["x", "1.0000", "2"]).row(["long", "", "-3.5"]);
        assert_eq!(t.render(), "           a    bb\n------------------\nx     1.0000     2\nlong          -3.5\n");
    }
}
