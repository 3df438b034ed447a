//! Time-stamped observable records.

use std::io::Write;

use crate::error::{Error, Result};

/// Named columns sampled at common record times.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    columns: Vec<String>,
    times: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl ObservableSeries {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            times: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, time: f64, values: Vec<f64>) {
        assert_eq!(values.len(), self.columns.len(), "row width mismatch");
        self.times.push(time);
        self.rows.push(values);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one column.
    ///
    /// # Panics
    /// If the column does not exist.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self
            .column_index(name)
            .unwrap_or_else(|| panic!("no column `{name}` in {:?}", self.columns));
        self.rows.iter().map(|r| r[i]).collect()
    }

    pub fn last(&self, name: &str) -> Option<f64> {
        let i = self.column_index(name)?;
        self.rows.last().map(|r| r[i])
    }

    /// Truncates to the records with `time <= t_max`.
    pub fn truncate_after(&mut self, t_max: f64) {
        let keep = self.times.iter().take_while(|&&t| t <= t_max).count();
        self.times.truncate(keep);
        self.rows.truncate(keep);
    }

    pub fn same_layout(&self, other: &Self) -> bool {
        self.columns == other.columns && self.times == other.times
    }

    /// CSV with a `time_au` column first and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "time_au")?;
        for c in &self.columns {
            write!(out, ",{c}")?;
        }
        writeln!(out)?;
        for (t, row) in self.times.iter().zip(&self.rows) {
            write!(out, "{t:.16e}")?;
            for v in row {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("ascii")
    }

    /// Parses the format of [`ObservableSeries::write_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Usage("empty CSV".into()))?;
        let mut names = header.split(',');
        if names.next() != Some("time_au") {
            return Err(Error::Usage("CSV must start with a time_au column".into()));
        }
        let mut series = Self::new(names);
        for (i, line) in lines.enumerate() {
            let values: std::result::Result<Vec<f64>, _> =
                line.split(',').map(str::parse::<f64>).collect();
            let mut values =
                values.map_err(|e| Error::Usage(format!("CSV line {}: {e}", i + 2)))?;
            if values.len() != series.columns.len() + 1 {
                return Err(Error::Usage(format!("CSV line {}: wrong width", i + 2)));
            }
            let t = values.remove(0);
            series.push(t, values);
        }
        Ok(series)
    }
}
