//! Tidy tables and the rules for where a command's results go.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};
use crate::format;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => format::number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => format::json_number(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Column names carry their unit as a suffix (`T_K`, `E_MHz`).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    /// Array of records keyed by column name.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    for (c, v) in self.columns.iter().zip(row) {
                        m.insert(c.clone(), v.json());
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => pretty(&self.to_json_value()),
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

/// Everything a subcommand produced.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub tables: Vec<Table>,
    /// Named JSON documents written verbatim (e.g. the fit report).
    pub documents: Vec<(String, Value)>,
    /// Table printed to stdout when no output directory is given.
    pub primary_table: Option<usize>,
    /// Document printed instead of the summary for `--format json`.
    pub primary_document: Option<usize>,
    /// Human-readable text.
    pub summary: String,
    pub report: Report,
}

/// What goes to stdout and stderr when nothing is written to disk.
pub struct Streams {
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    pub fn streams(&self, format: Format) -> Streams {
        if let (Format::Json, Some(i)) = (format, self.primary_document) {
            return Streams {
                stdout: pretty(&self.documents[i].1),
                stderr: self.summary.clone(),
            };
        }
        match self.primary_table {
            Some(i) => Streams {
                stdout: self.tables[i].render(format),
                stderr: self.summary.clone(),
            },
            None => Streams {
                stdout: self.summary.clone(),
                stderr: String::new(),
            },
        }
    }

    /// File name and contents of everything written by `--out`.
    pub fn files(&self, format: Format) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .tables
            .iter()
            .map(|t| {
                (
                    format!("{}.{}", t.name, format.extension()),
                    t.render(format),
                )
            })
            .collect();
        out.extend(
            self.documents
                .iter()
                .map(|(name, v)| (format!("{name}.json"), pretty(v))),
        );
        out.push(("report.json".to_string(), pretty(&self.report.to_json())));
        out
    }

    pub fn write_to(&self, dir: &Path, format: Format) -> Result<Vec<String>> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut names = Vec::new();
        for (name, contents) in self.files(format) {
            let path = dir.join(&name);
            let mut f = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
            f.write_all(contents.as_bytes())
                .map_err(|e| CliError::io(&path, e))?;
            names.push(name);
        }
        Ok(names)
    }
}
