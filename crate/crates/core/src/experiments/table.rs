//! Numeric CSV tables: comment lines starting with `#`, one header row, then
//! comma-separated values with 15 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const UNITS_COMMENT: &str = "hbar=1, kB=1, energies in units of h";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn format_value(x: f64) -> String {
    // Normalise −0 so identical physics gives identical bytes.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.14e}")
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            comments: vec![UNITS_COMMENT.to_string()],
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.trim_start().to_string());
            } else if line.trim().is_empty() {
                continue;
            } else if columns.is_none() {
                columns = Some(line.split(',').map(str::to_string).collect());
            } else {
                let row = line
                    .split(',')
                    .map(|cell| cell.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
                rows.push(row);
            }
        }
        let columns = columns.ok_or_else(|| Error::Config("table has no header row".into()))?;
        if let Some(bad) = rows.iter().position(|r| r.len() != columns.len()) {
            return Err(Error::Config(format!("row {bad} has the wrong number of cells")));
        }
        Ok(Self { comments, columns, rows })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}
