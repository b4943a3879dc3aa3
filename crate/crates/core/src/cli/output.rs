//! Tabular command output in three formats: aligned text, CSV with a
//! header row, and JSON with a schema version.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// How the text format lays out the rows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Layout {
    #[default]
    Rows,
    /// Pivot: one line per value of column `row`, one column per value of
    /// column `col`, cells from column `value` ("--" when absent).
    Grid { row: usize, col: usize, value: usize },
    /// Only rows whose `column` differs from `keep_out`, after the notes.
    Filtered { column: usize, keep_out: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema_version: u32,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Summary lines shown above the rows in the text format.
    #[serde(skip)]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub layout: Layout,
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

impl Dataset {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Dataset {
        Dataset {
            schema_version: OUTPUT_SCHEMA_VERSION,
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            layout: Layout::Rows,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_error)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| csv_error(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Parses CSV written by `to_csv`; the title is not part of CSV.
    pub fn from_csv(text: &str, title: &str) -> Result<Dataset> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns: Vec<String> = r.headers().map_err(csv_error)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()).map_err(csv_error))
            .collect::<Result<Vec<Vec<String>>>>()?;
        Ok(Dataset { schema_version: OUTPUT_SCHEMA_VERSION, title: title.into(), columns, rows, notes: Vec::new(), layout: Layout::Rows })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Dataset> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            out.push_str(n);
            out.push('\n');
        }
        match &self.layout {
            Layout::Rows => out.push_str(&aligned(&self.columns, &self.rows)),
            Layout::Filtered { column, keep_out } => {
                let rows: Vec<Vec<String>> = self.rows.iter().filter(|r| &r[*column] != keep_out).cloned().collect();
                if !rows.is_empty() {
                    out.push_str(&aligned(&self.columns, &rows));
                }
            }
            Layout::Grid { row, col, value } => out.push_str(&self.grid(*row, *col, *value)),
        }
        out
    }

    fn grid(&self, row: usize, col: usize, value: usize) -> String {
        let mut row_keys: Vec<&str> = Vec::new();
        let mut col_keys: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !row_keys.contains(&r[row].as_str()) {
                row_keys.push(&r[row]);
            }
            if !col_keys.contains(&r[col].as_str()) {
                col_keys.push(&r[col]);
            }
        }
        let mut header = vec![format!("{}\\{}", self.columns[row], self.columns[col])];
        header.extend(col_keys.iter().map(|c| c.to_string()));
        let body: Vec<Vec<String>> = row_keys
            .iter()
            .map(|rk| {
                let mut line = vec![rk.to_string()];
                for ck in &col_keys {
                    let cell = self.rows.iter().find(|r| r[row] == *rk && r[col] == *ck);
                    line.push(cell.map_or_else(String::new, |r| r[value].clone()));
                }
                line
            })
            .collect();
        aligned(&header, &body)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Table => Ok(self.to_text()),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        out.write_all(self.render(format)?.as_bytes())?;
        Ok(())
    }
}

fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> =
            cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}", w = *w)).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        let mut d = Dataset::new("demo", &["a", "b", "value"]);
        d.push(vec!["1".into(), "1".into(), "5.0".into()]);
        d.push(vec!["1".into(), "2".into(), "--".into()]);
        d.push(vec!["2".into(), "1".into(), "a, \"quoted\"".into()]);
        d
    }

    #[test]
    fn csv_and_json_round_trip() {
        let d = sample();
        let from_csv = Dataset::from_csv(&d.to_csv().unwrap(), "demo").unwrap();
        let from_json = Dataset::from_json(&d.to_json().unwrap()).unwrap();
        assert_eq!(from_csv, d);
        assert_eq!(from_json, d);
    }

    #[test]
    fn grid_layout() {
        let mut d = sample();
        d.layout = Layout::Grid { row: 0, col: 1, value: 2 };
        let text = d.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("a\\b"));
        assert!(lines[1].ends_with("--"));
    }

    #[test]
    fn filtered_layout_keeps_notes() {
        let mut d = sample();
        d.note("summary");
        d.layout = Layout::Filtered { column: 2, keep_out: "5.0".into() };
        let text = d.to_text();
        assert!(text.starts_with("summary\n"));
        assert!(!text.contains("5.0"));
    }
}
