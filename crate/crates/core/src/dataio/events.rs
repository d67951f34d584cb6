use std::collections::BTreeMap;
use std::path::Path;

use super::period::{Frequency, Period};
use super::TimeSeries;
use crate::{Error, Result};

/// Dated events; at most one entry per period.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventCalendar {
    events: BTreeMap<Period, String>,
}

impl EventCalendar {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an event; a second event in the same period keeps the first description.
    pub fn insert(&mut self, period: Period, description: impl Into<String>) {
        self.events.entry(period).or_insert_with(|| description.into());
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Period, &str)> {
        self.events.iter().map(|(p, d)| (p, d.as_str()))
    }

    pub fn load(path: impl AsRef<Path>, frequency: Frequency) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, frequency)
    }

    /// Parses `period,description` rows. A leading header row is skipped
    /// when its first cell is not a valid period.
    pub fn parse(text: &str, frequency: Frequency) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut cal = EventCalendar::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let Some(label) = rec.get(0).filter(|s| !s.is_empty()) else {
                continue;
            };
            match Period::parse(label, frequency) {
                Ok(p) => cal.insert(p, rec.get(1).unwrap_or("")),
                Err(_) if i == 0 => continue,
                Err(_) => {
                    return Err(Error::Parse { row: i + 1, col: 1, msg: format!("invalid period `{label}`") })
                }
            }
        }
        Ok(cal)
    }
}

/// Builds a 0/1 dummy on `index`, equal to 1 exactly at calendar periods.
///
/// Returns the series and the number of calendar events that fell outside
/// the index and were ignored.
pub fn dummy_from_events(cal: &EventCalendar, index: &[Period], name: &str) -> Result<(TimeSeries, usize)> {
    let values: Vec<f64> =
        index.iter().map(|p| if cal.events.contains_key(p) { 1.0 } else { 0.0 }).collect();
    let hit = values.iter().filter(|v| **v == 1.0).count();
    let ts = TimeSeries::new(name, index.to_vec(), values)?;
    Ok((ts, cal.len() - hit))
}
