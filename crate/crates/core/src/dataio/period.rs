use std::fmt;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    #[default]
    Monthly,
    Daily,
}

impl std::str::FromStr for Frequency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "monthly" | "m" => Ok(Frequency::Monthly),
            "daily" | "d" => Ok(Frequency::Daily),
            other => Err(Error::InvalidSpec(format!("unknown frequency `{other}`"))),
        }
    }
}

/// A period label: a calendar month (`YYYY-MM`) or a day (`YYYY-MM-DD`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Period {
    Month { year: i32, month: u32 },
    Day(NaiveDate),
}

impl Period {
    pub fn month(year: i32, month: u32) -> Self {
        assert!((1..=12).contains(&month), "month out of range");
        Period::Month { year, month }
    }

    pub fn parse(label: &str, freq: Frequency) -> Result<Self> {
        let label = label.trim();
        let bad = || Error::Parse { row: 0, col: 1, msg: format!("invalid {freq:?} period `{label}`") };
        match freq {
            Frequency::Monthly => {
                let (y, m) = label.split_once('-').ok_or_else(bad)?;
                if y.len() != 4 || m.len() != 2 {
                    return Err(bad());
                }
                let year: i32 = y.parse().map_err(|_| bad())?;
                let month: u32 = m.parse().map_err(|_| bad())?;
                if !(1..=12).contains(&month) {
                    return Err(bad());
                }
                Ok(Period::Month { year, month })
            }
            Frequency::Daily => NaiveDate::parse_from_str(label, "%Y-%m-%d")
                .map(Period::Day)
                .map_err(|_| bad()),
        }
    }

    pub fn frequency(&self) -> Frequency {
        match self {
            Period::Month { .. } => Frequency::Monthly,
            Period::Day(_) => Frequency::Daily,
        }
    }

    /// The following period at the same frequency.
    pub fn succ(&self) -> Period {
        match *self {
            Period::Month { year, month: 12 } => Period::Month { year: year + 1, month: 1 },
            Period::Month { year, month } => Period::Month { year, month: month + 1 },
            Period::Day(d) => Period::Day(d.succ_opt().expect("date overflow")),
        }
    }

    /// `count` consecutive periods starting at `self`.
    pub fn range(self, count: usize) -> Vec<Period> {
        let mut out = Vec::with_capacity(count);
        let mut p = self;
        for _ in 0..count {
            out.push(p);
            p = p.succ();
        }
        out
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Month { year, month } => write!(f, "{year:04}-{month:02}"),
            Period::Day(d) => write!(f, "{:04}-{:02}-{:02}", d.year(), d.month(), d.day()),
        }
    }
}

impl Serialize for Period {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Checks that an index is strictly increasing, single-frequency, and, for
/// monthly data, free of gaps.
pub(crate) fn validate_index(index: &[Period]) -> Result<()> {
    let Some(first) = index.first() else {
        return Err(Error::Empty);
    };
    let freq = first.frequency();
    for w in index.windows(2) {
        if w[1].frequency() != freq {
            return Err(Error::Parse { row: 0, col: 1, msg: format!("mixed frequencies at {}", w[1]) });
        }
        if w[1] <= w[0] {
            return Err(Error::Parse {
                row: 0,
                col: 1,
                msg: format!("index not strictly increasing at {}", w[1]),
            });
        }
        // Trading calendars differ across markets, so daily indexes are only
        // required to increase.
        if freq == Frequency::Monthly && w[0].succ() != w[1] {
            return Err(Error::Gap { missing: w[0].succ().to_string() });
        }
    }
    Ok(())
}
