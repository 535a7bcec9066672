//! Monthly time series: ingestion, chronological splitting, descriptive
//! statistics and standardization.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{all_finite, Scalar};

const MONTHS: [&str; 12] = [
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct YearMonth {
    pub year: i32,
    /// 1 = January.
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidArgument(format!("month {month} out of range 1..=12")));
        }
        Ok(Self { year, month })
    }

    /// Moves forward by `months` calendar months.
    pub fn advance(self, months: usize) -> Self {
        let idx = self.index() + months as i64;
        Self::from_index(idx)
    }

    fn index(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    fn from_index(idx: i64) -> Self {
        Self {
            year: idx.div_euclid(12) as i32,
            month: idx.rem_euclid(12) as u32 + 1,
        }
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    /// Accepts `YYYY-MM`, optionally followed by a day (`YYYY-MM-DD`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("'{s}' is not a YYYY-MM date"));
        let mut parts = s.trim().split('-');
        let year = parts.next().ok_or_else(bad)?.parse::<i32>().map_err(|_| bad())?;
        let month = parts.next().ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())?;
        if let Some(day) = parts.next() {
            day.parse::<u32>().map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        YearMonth::new(year, month).map_err(|_| bad())
    }
}

/// Ordered observations on a contiguous monthly index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries<T> {
    values: Vec<T>,
    start: YearMonth,
    period: usize,
}

impl<T: Scalar> TimeSeries<T> {
    /// Builds a series, rejecting empty or non-finite data and `period == 0`.
    pub fn new(values: Vec<T>, start: YearMonth, period: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        if !all_finite(&values) {
            return Err(Error::NonFinite("series values".into()));
        }
        if period == 0 {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        Ok(Self { values, start, period })
    }

    /// Monthly series (period 12) starting January of year 1.
    pub fn monthly(values: Vec<T>) -> Result<Self> {
        Self::new(values, YearMonth { year: 1, month: 1 }, 12)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Month label of observation `i`.
    pub fn time_of(&self, i: usize) -> YearMonth {
        self.start.advance(i)
    }

    /// Month immediately after the last observation.
    pub fn end(&self) -> YearMonth {
        self.start.advance(self.values.len())
    }

    /// Same index and period, new values.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        Self::new(values, self.start, self.period)
    }
}

/// Column layout for [`load_monthly_csv`].
#[derive(Debug, Clone)]
pub struct ColumnSpec {
    /// Date column of the long layout (`YYYY-MM`).
    pub date: String,
    /// Value column of the long layout.
    pub value: String,
    /// Year column of the wide layout; month columns are `Jan`..`Dec`.
    pub year: String,
    /// Keep only rows where `column == value` (e.g. one subdivision of a
    /// multi-region file).
    pub filter: Option<(String, String)>,
}

impl Default for ColumnSpec {
    fn default() -> Self {
        Self {
            date: "date".into(),
            value: "value".into(),
            year: "Year".into(),
            filter: None,
        }
    }
}

fn find_col(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name))
}

fn parse_cell(record: &csv::StringRecord, idx: usize, row: usize, column: &str) -> Result<f64> {
    let raw = record.get(idx).unwrap_or("").trim();
    let parse_err = |message: String| Error::Parse {
        row,
        column: column.to_string(),
        message,
    };
    if raw.is_empty() {
        return Err(parse_err("missing value".into()));
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| parse_err(format!("cannot parse '{raw}' as a number")))?;
    if !v.is_finite() {
        return Err(parse_err(format!("non-finite value '{raw}'")));
    }
    if v < 0.0 {
        return Err(Error::NegativeValue {
            row,
            column: column.to_string(),
            value: v,
        });
    }
    Ok(v)
}

/// Checks that `next` directly follows `prev`, reporting the first missing
/// month on a forward jump.
fn check_contiguous(prev: Option<YearMonth>, next: YearMonth, row: usize, column: &str) -> Result<()> {
    if let Some(prev) = prev {
        let expected = prev.advance(1);
        if next > expected {
            return Err(Error::MonthGap {
                year: expected.year,
                month: expected.month,
            });
        }
        if next < expected {
            return Err(Error::Parse {
                row,
                column: column.to_string(),
                message: format!("{next} is out of order (expected {expected})"),
            });
        }
    }
    Ok(())
}

/// Loads a monthly series from a CSV file.
///
/// Two layouts are recognized from the header: long (`date,value` with
/// `YYYY-MM` dates) and wide (`Year,Jan,...,Dec`, one row per year, flattened
/// January to December). Header matching is case-insensitive; extra columns
/// are ignored.
pub fn load_monthly_csv(path: impl AsRef<Path>, columns: &ColumnSpec) -> Result<TimeSeries<f64>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_monthly_csv(file, columns)
}

/// [`load_monthly_csv`] over any reader.
pub fn read_monthly_csv<R: std::io::Read>(reader: R, columns: &ColumnSpec) -> Result<TimeSeries<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            row: 1,
            column: "header".into(),
            message: e.to_string(),
        })?
        .clone();

    let filter = match &columns.filter {
        Some((col, val)) => {
            let idx = find_col(&headers, col).ok_or_else(|| Error::Parse {
                row: 1,
                column: col.clone(),
                message: "filter column not found in header".into(),
            })?;
            Some((idx, val.clone()))
        }
        None => None,
    };

    let month_cols: Option<Vec<usize>> = MONTHS.iter().map(|m| find_col(&headers, m)).collect();
    let wide = find_col(&headers, &columns.year).zip(month_cols);
    let long = find_col(&headers, &columns.date).zip(find_col(&headers, &columns.value));

    let mut values = Vec::new();
    let mut start = None;
    let mut prev: Option<YearMonth> = None;

    for (i, record) in rdr.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::Parse {
            row,
            column: "record".into(),
            message: e.to_string(),
        })?;
        if record.iter().all(|c| c.trim().is_empty()) {
            continue;
        }
        if let Some((idx, want)) = &filter {
            if record.get(*idx).map(str::trim) != Some(want.as_str()) {
                continue;
            }
        }
        if let Some((year_idx, month_idx)) = &wide {
            let raw = record.get(*year_idx).unwrap_or("").trim();
            let year: i32 = raw.parse().map_err(|_| Error::Parse {
                row,
                column: columns.year.clone(),
                message: format!("cannot parse '{raw}' as a year"),
            })?;
            for (m, &col) in month_idx.iter().enumerate() {
                let ym = YearMonth { year, month: m as u32 + 1 };
                let name = headers.get(col).unwrap_or(MONTHS[m]);
                check_contiguous(prev, ym, row, name)?;
                values.push(parse_cell(&record, col, row, name)?);
                start.get_or_insert(ym);
                prev = Some(ym);
            }
        } else if let Some((date_idx, value_idx)) = long {
            let raw = record.get(date_idx).unwrap_or("");
            let ym: YearMonth = raw.parse().map_err(|_| Error::Parse {
                row,
                column: columns.date.clone(),
                message: format!("cannot parse '{}' as YYYY-MM", raw.trim()),
            })?;
            check_contiguous(prev, ym, row, &columns.date)?;
            values.push(parse_cell(&record, value_idx, row, &columns.value)?);
            start.get_or_insert(ym);
            prev = Some(ym);
        } else {
            return Err(Error::Parse {
                row: 1,
                column: "header".into(),
                message: format!(
                    "expected '{},{}' (long) or '{},Jan..Dec' (wide) columns",
                    columns.date, columns.value, columns.year
                ),
            });
        }
    }

    let start = start.ok_or(Error::SeriesTooShort { needed: 1, got: 0 })?;
    TimeSeries::new(values, start, 12)
}

/// Reads every column of a headed numeric CSV. Used for residual and
/// observation/prediction files.
pub fn read_numeric_columns(path: impl AsRef<Path>) -> Result<Vec<(String, Vec<f64>)>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            row: 1,
            column: "header".into(),
            message: e.to_string(),
        })?
        .clone();
    let mut cols: Vec<(String, Vec<f64>)> =
        headers.iter().map(|h| (h.trim().to_string(), Vec::new())).collect();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::Parse {
            row,
            column: "record".into(),
            message: e.to_string(),
        })?;
        for (c, (name, data)) in cols.iter_mut().enumerate() {
            let raw = record.get(c).unwrap_or("").trim();
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                row,
                column: name.clone(),
                message: format!("cannot parse '{raw}' as a number"),
            })?;
            data.push(v);
        }
    }
    Ok(cols)
}

/// Chronological train/test partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitPair<T> {
    pub train: TimeSeries<T>,
    pub test: TimeSeries<T>,
    pub ratio: f64,
}

/// Splits chronologically with `train = round(ratio * N)`.
///
/// The split is rejected when either side would be empty under floor or
/// under nearest-integer rounding of `ratio * N`, so that the partition does
/// not hinge on the rounding convention.
pub fn split_train_test<T: Scalar>(series: &TimeSeries<T>, ratio: f64) -> Result<SplitPair<T>> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    let n = series.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: n });
    }
    let exact = ratio * n as f64;
    let floor = exact.floor() as usize;
    let rounded = exact.round() as usize;
    if floor == 0 || rounded == 0 || floor >= n || rounded >= n {
        return Err(Error::InvalidArgument(format!(
            "ratio {ratio} leaves an empty train or test set for {n} observations"
        )));
    }
    let (a, b) = series.values.split_at(rounded);
    Ok(SplitPair {
        train: TimeSeries::new(a.to_vec(), series.start, series.period)?,
        test: TimeSeries::new(b.to_vec(), series.time_of(rounded), series.period)?,
        ratio,
    })
}

/// Summary statistics. `std_dev` uses the `n - 1` denominator; skewness is
/// the adjusted Fisher-Pearson coefficient and kurtosis the adjusted excess
/// kurtosis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptiveStats<T> {
    pub count: usize,
    pub mean: T,
    pub std_dev: T,
    pub min: T,
    pub median: T,
    pub max: T,
    pub skewness: T,
    pub kurtosis: T,
    /// Set when skewness/kurtosis are undefined (constant series or too few
    /// observations) and reported as zero.
    pub degenerate: bool,
}

/// Descriptive statistics of a series.
///
/// Moments are accumulated over the sorted values, so the result does not
/// depend on observation order.
pub fn describe<T: Scalar>(series: &TimeSeries<T>) -> DescriptiveStats<T> {
    describe_values(series.values())
}

pub fn describe_values<T: Scalar>(values: &[T]) -> DescriptiveStats<T> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    let nf = T::count(n);
    let mean = sorted.iter().copied().sum::<T>() / nf;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / T::lit(2.0)
    };
    let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
    for &x in &sorted {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let std_dev = if n > 1 {
        (m2 * nf / T::count(n - 1)).sqrt()
    } else {
        T::zero()
    };

    let constant = sorted[0] == sorted[n - 1];
    let mut degenerate = constant || n < 4;
    let skewness = if constant || n < 3 {
        T::zero()
    } else {
        let g1 = m3 / m2.powf(T::lit(1.5));
        (nf * (nf - T::one())).sqrt() / (nf - T::lit(2.0)) * g1
    };
    let kurtosis = if constant || n < 4 {
        T::zero()
    } else {
        let g2 = m4 / (m2 * m2) - T::lit(3.0);
        ((nf + T::one()) * g2 + T::lit(6.0)) * (nf - T::one())
            / ((nf - T::lit(2.0)) * (nf - T::lit(3.0)))
    };
    if !skewness.is_finite() || !kurtosis.is_finite() {
        degenerate = true;
    }

    DescriptiveStats {
        count: n,
        mean,
        std_dev,
        min: sorted[0],
        median,
        max: sorted[n - 1],
        skewness,
        kurtosis,
        degenerate,
    }
}

/// `(x - mean) / std_dev` elementwise.
pub fn standardize<T: Scalar>(series: &TimeSeries<T>, stats: &DescriptiveStats<T>) -> Result<TimeSeries<T>> {
    let values = standardize_values(series.values(), stats.mean, stats.std_dev)?;
    series.with_values(values)
}

/// Inverse of [`standardize`].
pub fn destandardize<T: Scalar>(series: &TimeSeries<T>, stats: &DescriptiveStats<T>) -> Result<TimeSeries<T>> {
    series.with_values(destandardize_values(series.values(), stats.mean, stats.std_dev))
}

pub(crate) fn standardize_values<T: Scalar>(xs: &[T], mean: T, std: T) -> Result<Vec<T>> {
    if !(std > T::zero()) {
        return Err(Error::ZeroVariance);
    }
    Ok(xs.iter().map(|&x| (x - mean) / std).collect())
}

pub(crate) fn destandardize_values<T: Scalar>(xs: &[T], mean: T, std: T) -> Vec<T> {
    xs.iter().map(|&z| z * std + mean).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ym(y: i32, m: u32) -> YearMonth {
        YearMonth::new(y, m).unwrap()
    }

    fn wide_csv(years: std::ops::RangeInclusive<i32>) -> String {
        let mut s = String::from("Year,Jan,Feb,Mar,Apr,May,Jun,Jul,Aug,Sep,Oct,Nov,Dec\n");
        for y in years {
            s.push_str(&y.to_string());
            for m in 1..=12 {
                s.push_str(&format!(",{}", (y - 1900) as f64 + m as f64 / 100.0));
            }
            s.push('\n');
        }
        s
    }

    #[test]
    fn year_month_arithmetic() {
        assert_eq!(ym(1971, 12).advance(1), ym(1972, 1));
        assert_eq!(ym(1971, 1).advance(635), ym(2023, 12));
        assert_eq!("1971-01".parse::<YearMonth>().unwrap(), ym(1971, 1));
        assert_eq!("2001-07-15".parse::<YearMonth>().unwrap(), ym(2001, 7));
        assert!("1971-13".parse::<YearMonth>().is_err());
        assert_eq!(ym(1999, 3).to_string(), "1999-03");
    }

    #[test]
    fn wide_layout_flattens_january_to_december() {
        let ts = read_monthly_csv(wide_csv(1971..=2023).as_bytes(), &ColumnSpec::default()).unwrap();
        assert_eq!(ts.len(), 636);
        assert_eq!(ts.start(), ym(1971, 1));
        assert_eq!(ts.values()[0], 71.01);
        assert_eq!(ts.values()[11], 71.12);
        assert_eq!(ts.values()[12], 72.01);
        assert_eq!(ts.time_of(635), ym(2023, 12));
    }

    #[test]
    fn long_layout_single_record() {
        let ts = read_monthly_csv("date,value\n1971-01, 5.0\n".as_bytes(), &ColumnSpec::default()).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts.start(), ym(1971, 1));
        assert_eq!(ts.values(), &[5.0]);
    }

    #[test]
    fn long_layout_gap_names_missing_month() {
        let csv = "date,value\n1971-01,1\n1971-02,2\n1971-04,4\n";
        match read_monthly_csv(csv.as_bytes(), &ColumnSpec::default()) {
            Err(Error::MonthGap { year, month }) => assert_eq!((year, month), (1971, 3)),
            other => panic!("expected gap, got {other:?}"),
        }
    }

    #[test]
    fn wide_layout_gap_between_years() {
        let mut s = wide_csv(1971..=1972);
        s.push_str(wide_csv(1974..=1974).lines().nth(1).unwrap());
        match read_monthly_csv(s.as_bytes(), &ColumnSpec::default()) {
            Err(Error::MonthGap { year, month }) => assert_eq!((year, month), (1973, 1)),
            other => panic!("expected gap, got {other:?}"),
        }
    }

    #[test]
    fn negative_and_unparseable_cells_report_location() {
        let csv = "date,value\n1971-01,1\n1971-02,-3\n";
        match read_monthly_csv(csv.as_bytes(), &ColumnSpec::default()) {
            Err(Error::NegativeValue { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "value");
            }
            other => panic!("{other:?}"),
        }
        let csv = "Year,Jan,Feb,Mar,Apr,May,Jun,Jul,Aug,Sep,Oct,Nov,Dec\n1971,1,2,x,4,5,6,7,8,9,10,11,12\n";
        match read_monthly_csv(csv.as_bytes(), &ColumnSpec::default()) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "Mar");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wide_layout_with_subdivision_filter() {
        let csv = "SUBDIVISION,YEAR,JAN,FEB,MAR,APR,MAY,JUN,JUL,AUG,SEP,OCT,NOV,DEC,ANNUAL\n\
                   A,2000,1,2,3,4,5,6,7,8,9,10,11,12,78\n\
                   B,2000,0,0,0,0,0,0,0,0,0,0,0,0,0\n\
                   A,2001,1,2,3,4,5,6,7,8,9,10,11,12,78\n";
        let spec = ColumnSpec {
            filter: Some(("SUBDIVISION".into(), "A".into())),
            ..ColumnSpec::default()
        };
        let ts = read_monthly_csv(csv.as_bytes(), &spec).unwrap();
        assert_eq!(ts.len(), 24);
        assert_eq!(ts.values()[12], 1.0);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_monthly_csv("/nonexistent/rain.csv", &ColumnSpec::default()),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn split_matches_table_counts() {
        let ts = TimeSeries::monthly((0..636).map(f64::from).collect()).unwrap();
        let split = split_train_test(&ts, 0.8).unwrap();
        assert_eq!(split.train.len(), 509);
        assert_eq!(split.test.len(), 127);
        assert_eq!(split.test.start(), ts.time_of(509));
        let mut joined = split.train.values().to_vec();
        joined.extend_from_slice(split.test.values());
        assert_eq!(joined, ts.values());
    }

    #[test]
    fn split_halves_and_contract_cases() {
        let ts = TimeSeries::monthly((0..10).map(f64::from).collect()).unwrap();
        let s = split_train_test(&ts, 0.5).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (5, 5));
        let two = TimeSeries::monthly(vec![1.0, 2.0]).unwrap();
        assert!(split_train_test(&two, 0.99).is_err());
        assert!(matches!(split_train_test(&ts, 1.0), Err(Error::InvalidRatio(_))));
        assert!(matches!(split_train_test(&ts, 0.0), Err(Error::InvalidRatio(_))));
    }

    #[test]
    fn describe_constant_is_degenerate() {
        let ts = TimeSeries::monthly(vec![5.0; 4]).unwrap();
        let d = describe(&ts);
        assert_eq!(d.mean, 5.0);
        assert_eq!(d.std_dev, 0.0);
        assert_eq!(d.skewness, 0.0);
        assert_eq!(d.kurtosis, 0.0);
        assert!(d.degenerate);
    }

    #[test]
    fn describe_matches_direct_summation() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let d = describe(&TimeSeries::monthly(xs.to_vec()).unwrap());
        // direct oracle
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        assert_eq!(d.mean, 3.0);
        assert_eq!(d.median, 3.0);
        assert!((d.std_dev - (ss / (n - 1.0)).sqrt()).abs() < 1e-15);
        assert!((d.std_dev - 1.5811388300841898).abs() < 1e-12);
        assert_eq!(d.skewness, 0.0);
        assert!((d.kurtosis - (-1.2)).abs() < 1e-12);
        assert!(!d.degenerate);
        assert_eq!((d.min, d.max, d.count), (1.0, 5.0, 5));
    }

    #[test]
    fn describe_skewed_sample() {
        // adjusted estimators cross-checked against a statistics package
        let xs = vec![0.0, 1.0, 1.0, 2.0, 9.0, 3.0, 0.5];
        let d = describe(&TimeSeries::<f64>::monthly(xs).unwrap());
        assert!((d.skewness - 2.1224415252346214).abs() < 1e-9, "{}", d.skewness);
        assert!((d.kurtosis - 4.797827263577278).abs() < 1e-9, "{}", d.kurtosis);
        assert_eq!(d.median, 1.0);
    }

    #[test]
    fn standardize_examples() {
        let ts = TimeSeries::monthly(vec![0.0, 10.0]).unwrap();
        let stats = DescriptiveStats {
            count: 2,
            mean: 5.0,
            std_dev: 5.0,
            min: 0.0,
            median: 5.0,
            max: 10.0,
            skewness: 0.0,
            kurtosis: 0.0,
            degenerate: true,
        };
        assert_eq!(standardize(&ts, &stats).unwrap().values(), &[-1.0, 1.0]);
        let at_mean = TimeSeries::monthly(vec![5.0, 5.0]).unwrap();
        assert_eq!(standardize(&at_mean, &stats).unwrap().values(), &[0.0, 0.0]);
        let zero = DescriptiveStats { std_dev: 0.0, ..stats };
        assert!(matches!(standardize(&ts, &zero), Err(Error::ZeroVariance)));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(TimeSeries::monthly(vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::<f64>::monthly(vec![]).is_err());
        assert!(TimeSeries::new(vec![1.0], ym(2000, 1), 0).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let d = describe(&TimeSeries::<f32>::monthly(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap());
        assert_eq!(d.mean, 3.0f32);
    }
}
