use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn human(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            other => other.human(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => Value::from(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|k| cells.iter().map(|r| r[k].len()).chain([self.headers[k].len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[&str]| {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &self.headers);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(&mut out, &rule.iter().map(String::as_str).collect::<Vec<_>>());
        for r in &cells {
            line(&mut out, &r.iter().map(String::as_str).collect::<Vec<_>>());
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.headers.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// What a subcommand produced, before formatting.
pub struct Report {
    pub table: Table,
    /// Lines printed after the table in table format.
    pub notes: Vec<String>,
    /// JSON document; defaults to the table rows.
    pub json: Option<Value>,
    /// Preformatted CSV replacing the table's CSV rendering.
    pub csv: Option<String>,
}

impl Report {
    pub fn new(table: Table) -> Self {
        Report { table, notes: Vec::new(), json: None, csv: None }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Table => {
                let mut out = self.table.render();
                for n in &self.notes {
                    out.push_str(n);
                    out.push('\n');
                }
                out
            }
            Format::Csv => match &self.csv {
                Some(text) => text.clone(),
                None => self.table.to_csv()?,
            },
            Format::Json => {
                let v = self.json.clone().unwrap_or_else(|| self.table.to_json());
                let mut s = serde_json::to_string_pretty(&v)?;
                s.push('\n');
                s
            }
        })
    }
}
