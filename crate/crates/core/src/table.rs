//! CSV encoding shared by the spectrum tables and simulation output.
//!
//! Values are written in scientific notation with nine significant digits
//! and a `.` decimal separator. Readers skip blank lines and lines starting
//! with `#`, and accept any float syntax Rust's parser does.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::SpectrumSample;

/// Nine significant digits, e.g. `6.62607015e-34`.
pub fn format_sci(v: f64) -> String {
    format!("{v:.8e}")
}

/// Parses a headed CSV body, handing each record's fields to `row`.
///
/// `row` receives a constructor for line-tagged parse errors.
pub(crate) fn parse_csv_records<T, F>(text: &str, source_name: &str, header: &str, mut row: F) -> Result<Vec<T>>
where
    F: FnMut(&[&str], &dyn Fn(String) -> Error) -> Result<T>,
{
    let columns = header.split(',').count();
    let mut seen_header = false;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            source_name: source_name.to_string(),
            line: idx + 1,
            message,
        };
        if !seen_header {
            let normalized: Vec<&str> = line.split(',').map(str::trim).collect();
            if normalized.join(",") != header {
                return Err(err(format!("expected header `{header}`, got `{line}`")));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns {
            return Err(err(format!("expected {columns} fields, got {}", fields.len())));
        }
        out.push(row(&fields, &err)?);
    }
    if !seen_header {
        return Err(Error::Parse {
            source_name: source_name.to_string(),
            line: 0,
            message: format!("missing header `{header}`"),
        });
    }
    Ok(out)
}

pub const SPECTRUM_HEADER: &str = "nu_hz,T_K,u_J_per_m3Hz";

/// A set of `(ν, T, u)` samples grouped in temperature blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    rows: Vec<SpectrumSample>,
    /// Free-text provenance.
    pub source: String,
}

impl SpectrumTable {
    /// Builds a table; within each run of equal `T`, `ν` must strictly
    /// increase.
    pub fn new(rows: Vec<SpectrumSample>, source: impl Into<String>) -> Result<Self> {
        for pair in rows.windows(2) {
            if pair[0].t == pair[1].t && pair[1].nu <= pair[0].nu {
                return Err(Error::Domain {
                    name: "nu",
                    requirement: "strictly increasing within a temperature block",
                    value: pair[1].nu,
                });
            }
        }
        Ok(Self {
            rows,
            source: source.into(),
        })
    }

    pub fn rows(&self) -> &[SpectrumSample] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let rows = parse_csv_records(text, source_name, SPECTRUM_HEADER, |fields, err| {
            let num = |s: &str| s.parse::<f64>().map_err(|_| err(format!("`{s}` is not a number")));
            SpectrumSample::new(num(fields[0])?, num(fields[1])?, num(fields[2])?)
                .map_err(|e| err(e.to_string()))
        })?;
        Self::new(rows, source_name)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.source.is_empty() {
            let _ = writeln!(out, "# source: {}", self.source.replace('\n', " "));
        }
        out.push_str(SPECTRUM_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", format_sci(r.nu), format_sci(r.t), format_sci(r.u));
        }
        out
    }
}

/// A headed table of real columns, as written by the `spectrum` command.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sci(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses a table whose header is the first non-comment line.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let header = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| Error::Parse {
                source_name: source_name.to_string(),
                line: 0,
                message: "missing header".to_string(),
            })?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        let header = columns.join(",");
        let rows = parse_csv_records(text, source_name, &header, |fields, err| {
            fields
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| err(format!("`{s}` is not a number"))))
                .collect()
        })?;
        Ok(Self { columns, rows })
    }
}
