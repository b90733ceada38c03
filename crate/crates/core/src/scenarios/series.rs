use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default number of samples in a time grid.
pub const DEFAULT_POINTS: usize = 600;

/// Uniform sampling of `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    #[serde(default)]
    pub start: f64,
    pub end: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        let g = Self { start, end, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.end.is_finite()) || self.start < 0.0 {
            return invalid("time grid bounds must be finite and start at t ≥ 0");
        }
        if self.points < 2 || self.end <= self.start {
            return invalid("time grid needs at least 2 points and end > start");
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.end } else { self.start + step * k as f64 })
            .collect()
    }
}

/// Named columns sampled on a common time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    columns: Vec<(String, Vec<f64>)>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return invalid("times must be strictly ascending");
        }
        Ok(Self { times, columns: Vec::new() })
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.times.len() {
            return invalid(format!("column `{name}` has {} values for {} times", values.len(), self.times.len()));
        }
        if self.column(&name).is_some() {
            return invalid(format!("duplicate column `{name}`"));
        }
        self.columns.push((name, values));
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn columns(&self) -> &[(String, Vec<f64>)] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    /// CSV with a `time,<columns…>` header, 17 significant digits, LF endings.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        let mut header = String::from("time");
        for (name, _) in &self.columns {
            header.push(',');
            header.push_str(&csv_field(name));
        }
        writeln!(out, "{header}")?;
        for (i, t) in self.times.iter().enumerate() {
            let mut line = fmt_f64(*t);
            for (_, v) in &self.columns {
                line.push(',');
                line.push_str(&fmt_f64(v[i]));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Quotes a field when RFC 4180 requires it.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
