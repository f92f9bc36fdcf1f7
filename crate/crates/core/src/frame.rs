//! Monthly time-series containers, CSV ingestion and the variable
//! constructions used by the models (logs, dummies, ratios).

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("file not found: {0}")]
    MissingFile(String),
    #[error("parse error at row {row}, column '{column}': {message}")]
    ParseError {
        row: usize,
        column: String,
        message: String,
    },
    #[error("gap in monthly index: {0} is missing")]
    GapInIndex(TimePoint),
    #[error("duplicate time point {0}")]
    DuplicateTimePoint(TimePoint),
    #[error("non-positive value at index {0}")]
    NonPositiveValue(usize),
    #[error("division by zero at index {0}")]
    DivisionByZero(usize),
    #[error("series are not aligned on a common index")]
    MisalignedSeries,
    #[error("empty time range")]
    EmptyRange,
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("invalid series '{name}': {reason}")]
    InvalidSeries { name: String, reason: String },
    #[error("unknown series '{0}'")]
    UnknownSeries(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimePoint {
    pub year: i32,
    pub month: u8,
}

impl TimePoint {
    pub fn new(year: i32, month: u8) -> Option<TimePoint> {
        (1..=12).contains(&month).then_some(TimePoint { year, month })
    }

    pub fn succ(self) -> TimePoint {
        self.add_months(1)
    }

    pub fn add_months(self, n: i64) -> TimePoint {
        let idx = self.ordinal() + n;
        TimePoint {
            year: idx.div_euclid(12) as i32,
            month: (idx.rem_euclid(12) + 1) as u8,
        }
    }

    /// Signed number of months from `self` to `other`.
    pub fn months_until(self, other: TimePoint) -> i64 {
        other.ordinal() - self.ordinal()
    }

    fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for TimePoint {
    type Err = String;

    /// Accepts `YYYY-MM` (and `YYYYMmm` as used in econometrics tables).
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let (y, m) = s
            .split_once('-')
            .or_else(|| s.split_once('M'))
            .ok_or_else(|| format!("expected YYYY-MM, got '{s}'"))?;
        if y.len() != 4 || m.is_empty() || m.len() > 2 {
            return Err(format!("expected YYYY-MM, got '{s}'"));
        }
        let year: i32 = y.parse().map_err(|_| format!("bad year in '{s}'"))?;
        let month: u8 = m.parse().map_err(|_| format!("bad month in '{s}'"))?;
        TimePoint::new(year, month).ok_or_else(|| format!("month out of range in '{s}'"))
    }
}

impl Serialize for TimePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A named monthly series starting at `start`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub start: TimePoint,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(name: impl Into<String>, start: TimePoint, values: Vec<f64>) -> Result<Series> {
        let name = name.into();
        if values.is_empty() {
            return Err(FrameError::InvalidSeries {
                name,
                reason: "empty".into(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FrameError::InvalidSeries {
                name,
                reason: format!("non-finite value at index {i}"),
            });
        }
        Ok(Series {
            name,
            start,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end(&self) -> TimePoint {
        self.start.add_months(self.values.len() as i64 - 1)
    }

    pub fn time_at(&self, i: usize) -> TimePoint {
        self.start.add_months(i as i64)
    }

    pub fn aligned_with(&self, other: &Series) -> bool {
        self.start == other.start && self.len() == other.len()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Series {
        self.name = name.into();
        self
    }
}

/// Series sharing one monthly index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    start: TimePoint,
    len: usize,
    series: Vec<Series>,
}

impl Dataset {
    pub fn new(series: Vec<Series>) -> Result<Dataset> {
        let first = series.first().ok_or(FrameError::EmptyRange)?;
        let (start, len) = (first.start, first.len());
        let mut seen = std::collections::HashSet::new();
        for s in &series {
            if s.start != start || s.len() != len {
                return Err(FrameError::MisalignedSeries);
            }
            if !seen.insert(s.name.as_str()) {
                return Err(FrameError::InvalidSeries {
                    name: s.name.clone(),
                    reason: "duplicate name".into(),
                });
            }
        }
        Ok(Dataset { start, len, series })
    }

    pub fn start(&self) -> TimePoint {
        self.start
    }

    pub fn end(&self) -> TimePoint {
        self.start.add_months(self.len as i64 - 1)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn time_at(&self, i: usize) -> TimePoint {
        self.start.add_months(i as i64)
    }

    pub fn series(&self) -> &[Series] {
        &self.series
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.series.iter().map(|s| s.name.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Series> {
        self.get(name)
            .ok_or_else(|| FrameError::UnknownSeries(name.to_string()))
    }

    /// Adds a series, replacing any existing series of the same name.
    pub fn insert(&mut self, s: Series) -> Result<()> {
        if s.start != self.start || s.len() != self.len {
            return Err(FrameError::MisalignedSeries);
        }
        if let Some(slot) = self.series.iter_mut().find(|e| e.name == s.name) {
            *slot = s;
        } else {
            self.series.push(s);
        }
        Ok(())
    }

    /// Keeps only the named series, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<Dataset> {
        let picked = names
            .iter()
            .map(|n| self.require(n).cloned())
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(picked)
    }

    /// The inclusive sub-range `from..=to`; open ends keep the full extent.
    pub fn window(&self, from: Option<TimePoint>, to: Option<TimePoint>) -> Result<Dataset> {
        let from = from.unwrap_or(self.start);
        let to = to.unwrap_or_else(|| self.end());
        if to < from || from > self.end() || to < self.start {
            return Err(FrameError::EmptyRange);
        }
        let from = from.max(self.start);
        let to = to.min(self.end());
        let a = self.start.months_until(from) as usize;
        let b = self.start.months_until(to) as usize + 1;
        let series = self
            .series
            .iter()
            .map(|s| Series { name: s.name.clone(), start: from, values: s.values[a..b].to_vec() })
            .collect();
        Dataset::new(series)
    }
}

/// Reads a monthly CSV file. See [`read_csv`].
pub fn load_csv(path: impl AsRef<Path>, date_column: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => FrameError::MissingFile(path.display().to_string()),
        _ => FrameError::Io(e.to_string()),
    })?;
    read_csv(file, date_column)
}

/// Parses a header-first CSV whose `date_column` holds `YYYY-MM` months and
/// whose other columns are numeric. Rows are sorted chronologically; the
/// resulting index must be contiguous.
pub fn read_csv<R: Read>(reader: R, date_column: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| FrameError::Io(e.to_string()))?
        .clone();
    let date_idx = headers
        .iter()
        .position(|h| h == date_column)
        .ok_or_else(|| FrameError::ParseError {
            row: 1,
            column: date_column.to_string(),
            message: "date column not found in header".into(),
        })?;
    let value_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != date_idx)
        .map(|(i, h)| (i, h.to_string()))
        .collect();

    let mut rows: Vec<(TimePoint, Vec<f64>)> = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        // header is row 1
        let row = r + 2;
        let rec = rec.map_err(|e| FrameError::ParseError {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let date_str = rec.get(date_idx).unwrap_or("");
        let tp: TimePoint = date_str.parse().map_err(|m| FrameError::ParseError {
            row,
            column: date_column.to_string(),
            message: m,
        })?;
        let mut vals = Vec::with_capacity(value_cols.len());
        for (ci, name) in &value_cols {
            let cell = rec.get(*ci).unwrap_or("");
            let v: f64 = cell.parse().map_err(|_| FrameError::ParseError {
                row,
                column: name.clone(),
                message: format!("'{cell}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(FrameError::ParseError {
                    row,
                    column: name.clone(),
                    message: "non-finite value".into(),
                });
            }
            vals.push(v);
        }
        rows.push((tp, vals));
    }
    if rows.is_empty() {
        return Err(FrameError::EmptyRange);
    }
    rows.sort_by_key(|(tp, _)| *tp);
    for w in rows.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(FrameError::DuplicateTimePoint(w[1].0));
        }
        if w[0].0.succ() != w[1].0 {
            return Err(FrameError::GapInIndex(w[0].0.succ()));
        }
    }
    let start = rows[0].0;
    let series = value_cols
        .iter()
        .enumerate()
        .map(|(j, (_, name))| {
            Series::new(name.clone(), start, rows.iter().map(|(_, v)| v[j]).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    if series.is_empty() {
        return Err(FrameError::ParseError {
            row: 1,
            column: String::new(),
            message: "no numeric columns".into(),
        });
    }
    Dataset::new(series)
}

/// Writes a dataset as CSV with a leading `date` column. Values are written in
/// shortest round-trip form, so reading the file back reproduces them exactly.
pub fn write_csv<W: Write>(d: &Dataset, writer: W) -> Result<()> {
    let io = |e: csv::Error| FrameError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["date".to_string()];
    header.extend(d.names().map(str::to_string));
    w.write_record(&header).map_err(io)?;
    for i in 0..d.len() {
        let mut rec = vec![d.time_at(i).to_string()];
        rec.extend(d.series().iter().map(|s| format!("{}", s.values[i])));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| FrameError::Io(e.to_string()))
}

/// Natural logarithm, name prefixed with `L`.
pub fn log_transform(s: &Series) -> Result<Series> {
    if let Some(i) = s.values.iter().position(|&v| v <= 0.0) {
        return Err(FrameError::NonPositiveValue(i));
    }
    Ok(Series {
        name: format!("L{}", s.name),
        start: s.start,
        values: s.values.iter().map(|v| v.ln()).collect(),
    })
}

/// Inverse of [`log_transform`]; strips a leading `L` from the name if present.
pub fn exp_transform(s: &Series) -> Series {
    Series {
        name: s.name.strip_prefix('L').unwrap_or(&s.name).to_string(),
        start: s.start,
        values: s.values.iter().map(|v| v.exp()).collect(),
    }
}

/// How a 0/1 indicator is constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DummyRule {
    /// 1 in the listed months (e.g. the month of a moving holiday each year).
    Events(Vec<TimePoint>),
    /// 1 in the listed calendar months of every year.
    CalendarMonths(Vec<u8>),
    /// 1 at and after the threshold month.
    Regime(TimePoint),
}

impl DummyRule {
    pub fn value_at(&self, t: TimePoint) -> f64 {
        let on = match self {
            DummyRule::Events(list) => list.contains(&t),
            DummyRule::CalendarMonths(months) => months.contains(&t.month),
            DummyRule::Regime(threshold) => t >= *threshold,
        };
        if on {
            1.0
        } else {
            0.0
        }
    }
}

/// Builds a dummy over the inclusive range `start..=end`.
pub fn make_dummy(
    name: impl Into<String>,
    start: TimePoint,
    end: TimePoint,
    rule: &DummyRule,
) -> Result<Series> {
    if end < start {
        return Err(FrameError::EmptyRange);
    }
    let n = start.months_until(end) as usize + 1;
    let values = (0..n)
        .map(|i| rule.value_at(start.add_months(i as i64)))
        .collect();
    Ok(Series {
        name: name.into(),
        start,
        values,
    })
}

/// Element-wise `a / b`, e.g. top coin denomination over the gold price.
pub fn ratio(name: impl Into<String>, a: &Series, b: &Series) -> Result<Series> {
    if !a.aligned_with(b) {
        return Err(FrameError::MisalignedSeries);
    }
    if let Some(i) = b.values.iter().position(|&v| v == 0.0) {
        return Err(FrameError::DivisionByZero(i));
    }
    Ok(Series {
        name: name.into(),
        start: a.start,
        values: a.values.iter().zip(&b.values).map(|(x, y)| x / y).collect(),
    })
}

/// Sample mean, range and standard deviation (divisor n-1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub std_dev: f64,
}

pub fn descriptive_stats(s: &Series) -> Result<StatsSummary> {
    summarize(&s.values)
}

pub fn summarize(x: &[f64]) -> Result<StatsSummary> {
    let n = x.len();
    if n < 2 {
        return Err(FrameError::TooShort { needed: 2, got: n });
    }
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(StatsSummary {
            mean: min,
            min,
            max,
            std_dev: 0.0,
        });
    }
    let mean = (x.iter().sum::<f64>() / n as f64).clamp(min, max);
    let ss: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(StatsSummary {
        mean,
        min,
        max,
        std_dev: (ss / (n - 1) as f64).sqrt(),
    })
}

/// One row per variable, in the column order Mean, Min, Max, Stand. Dev.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub name: String,
    #[serde(flatten)]
    pub summary: StatsSummary,
}

pub fn stats_table(d: &Dataset, names: &[&str]) -> Result<Vec<StatsRow>> {
    names
        .iter()
        .map(|n| {
            Ok(StatsRow {
                name: n.to_string(),
                summary: descriptive_stats(d.require(n)?)?,
            })
        })
        .collect()
}

pub fn write_stats_csv<W: Write>(rows: &[StatsRow], writer: W) -> Result<()> {
    let io = |e: csv::Error| FrameError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["Name", "Mean", "Min", "Max", "Stand. Dev."])
        .map_err(io)?;
    for r in rows {
        let s = r.summary;
        w.write_record([
            r.name.clone(),
            format!("{:.3}", s.mean),
            format!("{:.3}", s.min),
            format!("{:.3}", s.max),
            format!("{:.3}", s.std_dev),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| FrameError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tp(s: &str) -> TimePoint {
        s.parse().unwrap()
    }

    #[test]
    fn timepoint_successor_carries_year() {
        assert_eq!(tp("2011-12").succ(), tp("2012-01"));
        assert_eq!(tp("2011-01").add_months(-1), tp("2010-12"));
        assert_eq!(tp("2020M01"), tp("2020-01"));
        assert!(tp("2019-12") < tp("2020-01"));
        assert_eq!(tp("2011-01").months_until(tp("2012-03")), 14);
        assert!("2011-13".parse::<TimePoint>().is_err());
    }

    #[test]
    fn window_clamps_to_the_data() {
        let csv = "date,a\n2011-01,1\n2011-02,2\n2011-03,3\n2011-04,4\n";
        let d = read_csv(csv.as_bytes(), "date").unwrap();
        let w = d.window(Some(tp("2011-02")), Some(tp("2011-03"))).unwrap();
        assert_eq!(w.start(), tp("2011-02"));
        assert_eq!(w.get("a").unwrap().values, vec![2.0, 3.0]);
        let w = d.window(Some(tp("2010-06")), None).unwrap();
        assert_eq!(w.get("a").unwrap().values.len(), 4);
        assert!(matches!(d.window(Some(tp("2012-01")), None), Err(FrameError::EmptyRange)));
        assert!(matches!(d.window(Some(tp("2011-03")), Some(tp("2011-02"))), Err(FrameError::EmptyRange)));
    }

    #[test]
    fn three_row_file() {
        let csv = "date,cmd\n2011-01,1.5\n2011-02,2.5\n2011-03,3.5\n";
        let d = read_csv(csv.as_bytes(), "date").unwrap();
        assert_eq!(d.series().len(), 1);
        assert_eq!(d.len(), 3);
        assert_eq!(d.get("cmd").unwrap().values, vec![1.5, 2.5, 3.5]);
    }

    #[test]
    fn rows_are_sorted() {
        let csv = "date,a\n2011-03,3\n2011-01,1\n2011-02,2\n";
        let d = read_csv(csv.as_bytes(), "date").unwrap();
        assert_eq!(d.start(), tp("2011-01"));
        assert_eq!(d.get("a").unwrap().values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn gap_is_reported() {
        let csv = "date,cmd\n2011-01,1\n2011-03,2\n";
        assert_eq!(
            read_csv(csv.as_bytes(), "date").unwrap_err(),
            FrameError::GapInIndex(tp("2011-02"))
        );
    }

    #[test]
    fn non_numeric_cell() {
        let csv = "date,cmd\n2011-01,1\n2011-02,abc\n";
        match read_csv(csv.as_bytes(), "date").unwrap_err() {
            FrameError::ParseError { row, column, .. } => {
                assert_eq!(row, 3);
                assert_eq!(column, "cmd");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_csv("/nonexistent/x.csv", "date"),
            Err(FrameError::MissingFile(_))
        ));
    }

    #[test]
    fn log_identities() {
        let e = std::f64::consts::E;
        let s = Series::new("CMD", tp("2011-01"), vec![1.0, e, e * e]).unwrap();
        let l = log_transform(&s).unwrap();
        assert_eq!(l.name, "LCMD");
        assert_abs_diff_eq!(l.values[0], 0.0);
        assert_abs_diff_eq!(l.values[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.values[2], 2.0, epsilon = 1e-15);

        let m = Series::new("X", tp("2011-01"), vec![1_000_000.0]).unwrap();
        // ln(1e6) = 13.815510557964274
        assert_abs_diff_eq!(log_transform(&m).unwrap().values[0], 13.815510557964274, epsilon = 1e-12);

        let z = Series::new("X", tp("2011-01"), vec![0.0, 1.0]).unwrap();
        assert_eq!(log_transform(&z).unwrap_err(), FrameError::NonPositiveValue(0));
    }

    #[test]
    fn dummies() {
        let r = make_dummy("DUM_C19", tp("2019-11"), tp("2020-02"), &DummyRule::Regime(tp("2020-01"))).unwrap();
        assert_eq!(r.values, vec![0.0, 0.0, 1.0, 1.0]);
        let e = make_dummy("DUM_EID", tp("2011-07"), tp("2011-09"), &DummyRule::Events(vec![tp("2011-08")])).unwrap();
        assert_eq!(e.values, vec![0.0, 1.0, 0.0]);
        let late = make_dummy("D", tp("2011-01"), tp("2011-06"), &DummyRule::Regime(tp("2012-01"))).unwrap();
        assert!(late.values.iter().all(|&v| v == 0.0));
        assert_eq!(
            make_dummy("D", tp("2011-06"), tp("2011-01"), &DummyRule::Regime(tp("2012-01"))).unwrap_err(),
            FrameError::EmptyRange
        );
        let cal = make_dummy("D", tp("2011-11"), tp("2013-01"), &DummyRule::CalendarMonths(vec![12])).unwrap();
        assert_eq!(cal.values.iter().sum::<f64>(), 2.0);
    }

    #[test]
    fn ratios() {
        let a = Series::new("top", tp("2011-01"), vec![1000.0, 1000.0]).unwrap();
        let b = Series::new("gold", tp("2011-01"), vec![5000.0, 10000.0]).unwrap();
        assert_eq!(ratio("VALCO", &a, &b).unwrap().values, vec![0.2, 0.1]);
        assert!(ratio("one", &a, &a).unwrap().values.iter().all(|&v| v == 1.0));
        let z = Series::new("z", tp("2011-01"), vec![1.0, 0.0]).unwrap();
        assert_eq!(ratio("r", &a, &z).unwrap_err(), FrameError::DivisionByZero(1));
        let c = Series::new("c", tp("2011-02"), vec![1.0, 2.0]).unwrap();
        assert_eq!(ratio("r", &a, &c).unwrap_err(), FrameError::MisalignedSeries);
    }

    #[test]
    fn stats_examples() {
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.min, s.max), (2.0, 1.0, 3.0));
        assert_abs_diff_eq!(s.std_dev, 1.0, epsilon = 1e-15);
        assert_eq!(summarize(&[5.0, 5.0, 5.0]).unwrap().std_dev, 0.0);
        assert_eq!(summarize(&[0.1, 0.1, 0.1]).unwrap().std_dev, 0.0);
        assert!(matches!(summarize(&[1.0]), Err(FrameError::TooShort { .. })));
    }

    #[test]
    fn stats_csv_layout() {
        let rows = vec![StatsRow {
            name: "LCMD".into(),
            summary: StatsSummary { mean: 29.591, min: 28.878, max: 30.066, std_dev: 0.368 },
        }];
        let mut out = Vec::new();
        write_stats_csv(&rows, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "Name,Mean,Min,Max,Stand. Dev.\nLCMD,29.591,28.878,30.066,0.368\n"
        );
    }

    proptest! {
        #[test]
        fn stats_bracket_and_brute_force_variance(v in prop::collection::vec(-1e3f64..1e3, 2..60)) {
            let s = summarize(&v).unwrap();
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
            let n = v.len() as f64;
            let m = v.iter().sum::<f64>() / n;
            let brute = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
            prop_assert!((s.std_dev * s.std_dev - brute).abs() <= 1e-9 * (1.0 + brute));
        }

        #[test]
        fn log_exp_identity(v in prop::collection::vec(-20f64..20.0, 1..40)) {
            let s = Series::new("X", TimePoint { year: 2011, month: 1 }, v.clone()).unwrap();
            let back = log_transform(&exp_transform(&s)).unwrap();
            for (a, b) in back.values.iter().zip(&v) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn regime_dummy_non_decreasing(offset in 0i64..40, len in 1i64..60) {
            let start = TimePoint { year: 2011, month: 1 };
            let d = make_dummy("D", start, start.add_months(len - 1), &DummyRule::Regime(start.add_months(offset))).unwrap();
            prop_assert!(d.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn csv_round_trip(v in prop::collection::vec(-1e6f64..1e6, 1..30), w in prop::collection::vec(1e-6f64..1e6, 30)) {
            let start = TimePoint { year: 2011, month: 1 };
            let a = Series::new("a", start, v.clone()).unwrap();
            let b = Series::new("b", start, w[..v.len()].to_vec()).unwrap();
            let d = Dataset::new(vec![a, b]).unwrap();
            let mut buf = Vec::new();
            write_csv(&d, &mut buf).unwrap();
            let back = read_csv(buf.as_slice(), "date").unwrap();
            for (s, t) in d.series().iter().zip(back.series()) {
                for (x, y) in s.values.iter().zip(&t.values) {
                    prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
                }
            }
        }
    }
}
