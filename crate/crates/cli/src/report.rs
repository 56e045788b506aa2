//! Tabular results rendered as aligned text, CSV or JSON.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Fixed-point in text mode.
    Num(f64),
    /// Scientific notation in text mode.
    Sci(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Missing, Cell::Num)
    }

    pub fn opt_sci(v: Option<f64>) -> Cell {
        v.map_or(Cell::Missing, Cell::Sci)
    }

    fn text(&self, precision: usize) -> String {
        match self {
            Cell::Num(v) => format!("{v:.precision$}"),
            Cell::Sci(v) => format!("{v:.3e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => "-".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            // shortest round-trip form, exponent for very small or large values
            Cell::Num(v) | Cell::Sci(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Num(v) | Cell::Sci(v) => float(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

/// JSON number, or null for non-finite values.
pub fn float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Default)]
pub struct Section {
    pub title: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(columns: &[&str]) -> Self {
        Section { title: None, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// A command's output. CSV carries one section plus the footer as
/// `# key = value` lines; text prints every section.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub sections: Vec<Section>,
    pub footer: Vec<(String, Cell)>,
    /// Section for CSV output; defaults to the first text section.
    pub csv: Option<Section>,
    /// Replaces the generic `{"rows": …}` JSON layout.
    pub json: Option<Value>,
}

impl Report {
    pub fn single(section: Section) -> Self {
        Report { sections: vec![section], ..Default::default() }
    }

    pub fn render<W: Write>(&self, out: &mut W, format: Format, precision: usize) -> CliResult<()> {
        match format {
            Format::Text => self.render_text(out, precision),
            Format::Csv => self.render_csv(out),
            Format::Json => self.render_json(out),
        }
    }

    fn render_text<W: Write>(&self, out: &mut W, precision: usize) -> CliResult<()> {
        for (i, section) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            if let Some(title) = &section.title {
                writeln!(out, "{title}")?;
            }
            let cells: Vec<Vec<String>> =
                section.rows.iter().map(|r| r.iter().map(|c| c.text(precision)).collect()).collect();
            let widths: Vec<usize> = section
                .columns
                .iter()
                .enumerate()
                .map(|(j, h)| cells.iter().map(|r| r[j].chars().count()).fold(h.chars().count(), usize::max))
                .collect();
            let line = |fields: Vec<&str>| {
                fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, w)| format!("{f:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(section.columns.iter().map(String::as_str).collect()))?;
            for row in &cells {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
        if !self.footer.is_empty() {
            writeln!(out)?;
            for (key, value) in &self.footer {
                writeln!(out, "{key}: {}", value.text(precision))?;
            }
        }
        Ok(())
    }

    fn render_csv<W: Write>(&self, out: &mut W) -> CliResult<()> {
        if let Some(section) = self.csv.as_ref().or(self.sections.first()) {
            let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            writer.write_record(&section.columns)?;
            for row in &section.rows {
                writer.write_record(row.iter().map(Cell::csv))?;
            }
            writer.flush()?;
        }
        for (key, value) in &self.footer {
            writeln!(out, "# {key} = {}", value.csv())?;
        }
        Ok(())
    }

    fn render_json<W: Write>(&self, out: &mut W) -> CliResult<()> {
        let value = match &self.json {
            Some(v) => v.clone(),
            None => {
                let mut obj = Map::new();
                if let Some(section) = self.sections.first() {
                    obj.insert("rows".into(), section.json_rows());
                }
                for (key, value) in &self.footer {
                    obj.insert(key.clone(), value.json());
                }
                Value::Object(obj)
            }
        };
        write_json(out, &value)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn write_json<W: Write>(out: &mut W, value: &Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}
