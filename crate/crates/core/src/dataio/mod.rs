//! Loading, aligning and transforming time-series data.
//!
//! Series are aligned by period label, never by position. A [`Dataset`]
//! holds one shared index and a set of uniquely named columns.

mod csvio;
mod events;
mod period;

use std::collections::HashSet;

pub use csvio::{load_csv, parse_csv, write_csv, write_csv_to};
pub use events::{dummy_from_events, EventCalendar};
pub use period::{Frequency, Period};

use crate::{Error, Result};

/// A named, evenly indexed series of finite observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    index: Vec<Period>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, index: Vec<Period>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if index.len() != values.len() {
            return Err(Error::Misaligned(name));
        }
        period::validate_index(&index)?;
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse {
                row: pos + 1,
                col: 0,
                msg: format!("non-finite value in `{name}`"),
            });
        }
        Ok(TimeSeries { name, index, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> &[Period] {
        &self.index
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Value at a period label, if present.
    pub fn get(&self, period: &Period) -> Option<f64> {
        self.index.binary_search(period).ok().map(|i| self.values[i])
    }
}

/// Differences a series `order` times; the index is trimmed from the front.
pub fn diff(s: &TimeSeries, order: usize) -> Result<TimeSeries> {
    if order == 0 {
        return Err(Error::InvalidSpec("difference order must be positive".into()));
    }
    if s.len() <= order {
        return Err(Error::TooShort { needed: order + 1, got: s.len() });
    }
    let values = diff_values(&s.values, order);
    Ok(TimeSeries { name: s.name.clone(), index: s.index[order..].to_vec(), values })
}

pub(crate) fn diff_values(values: &[f64], order: usize) -> Vec<f64> {
    let mut v = values.to_vec();
    for _ in 0..order {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v
}

/// A set of series sharing one index.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    frequency: Frequency,
    index: Vec<Period>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Dataset {
    /// Builds a dataset from series that must carry identical indexes.
    pub fn from_series(series: Vec<TimeSeries>) -> Result<Self> {
        let first = series.first().ok_or(Error::Empty)?;
        let index = first.index.clone();
        let frequency = index[0].frequency();
        let mut ds = Dataset { frequency, index, names: Vec::new(), columns: Vec::new() };
        for s in series {
            ds.push(s)?;
        }
        Ok(ds)
    }

    /// Builds a dataset from raw columns on a validated index.
    pub fn from_columns(index: Vec<Period>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        period::validate_index(&index)?;
        let frequency = index[0].frequency();
        let mut ds = Dataset { frequency, index, names: Vec::new(), columns: Vec::new() };
        for (name, values) in columns {
            let s = TimeSeries::new(name, ds.index.clone(), values)?;
            ds.push(s)?;
        }
        Ok(ds)
    }

    /// Adds a series; its index must equal the dataset index label for label.
    pub fn push(&mut self, s: TimeSeries) -> Result<()> {
        if s.index != self.index {
            return Err(Error::Misaligned(s.name));
        }
        if self.names.contains(&s.name) {
            return Err(Error::DuplicateSeries(s.name));
        }
        self.names.push(s.name);
        self.columns.push(s.values);
        Ok(())
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn index(&self) -> &[Period] {
        &self.index
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn n_series(&self) -> usize {
        self.names.len()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownSeries(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        Ok(&self.columns[self.position(name)?])
    }

    pub fn column_at(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    pub fn series(&self, name: &str) -> Result<TimeSeries> {
        let values = self.column(name)?.to_vec();
        Ok(TimeSeries { name: name.to_string(), index: self.index.clone(), values })
    }

    pub fn iter(&self) -> impl Iterator<Item = TimeSeries> + '_ {
        self.names.iter().zip(&self.columns).map(|(n, c)| TimeSeries {
            name: n.clone(),
            index: self.index.clone(),
            values: c.clone(),
        })
    }

    /// A dataset restricted to the named series, in the given order.
    pub fn select(&self, names: &[impl AsRef<str>]) -> Result<Dataset> {
        let mut seen = HashSet::new();
        let mut columns = Vec::with_capacity(names.len());
        let mut out_names = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !seen.insert(n) {
                return Err(Error::DuplicateSeries(n.to_string()));
            }
            columns.push(self.column(n)?.to_vec());
            out_names.push(n.to_string());
        }
        Ok(Dataset { frequency: self.frequency, index: self.index.clone(), names: out_names, columns })
    }

    /// Differences every column `order` times.
    pub fn diff(&self, order: usize) -> Result<Dataset> {
        if order == 0 {
            return Err(Error::InvalidSpec("difference order must be positive".into()));
        }
        if self.len() <= order {
            return Err(Error::TooShort { needed: order + 1, got: self.len() });
        }
        Ok(Dataset {
            frequency: self.frequency,
            index: self.index[order..].to_vec(),
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| diff_values(c, order)).collect(),
        })
    }
}
