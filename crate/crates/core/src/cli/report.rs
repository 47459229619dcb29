//! Result records and their pretty, CSV and JSON renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_owned())
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Null, Field::Num)
    }
}

/// 17 significant digits, lowercase exponent.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        let text = format!("{v:.16e}");
        match text.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => text,
        }
    } else {
        v.to_string().to_lowercase()
    }
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Num(v) => format_float(*v),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Null => String::new(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Field::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            other => other.text(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(v) if v.is_finite() => Value::Number(
                Number::from_str(&format_float(*v))
                    .expect("formatted floats are valid JSON numbers"),
            ),
            Field::Num(_) | Field::Null => Value::Null,
            Field::Int(v) => Value::from(*v),
            Field::Bool(v) => Value::Bool(*v),
            Field::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub fields: Vec<(&'static str, Field)>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, params: Value) -> Self {
        Report {
            command,
            params,
            fields: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn field(mut self, name: &'static str, value: impl Into<Field>) -> Self {
        self.fields.push((name, value.into()));
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.tables.push(table);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Pretty => self.pretty(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let _ = writeln!(out, "  {k:<width$}  {}", v.text());
        }
        for table in &self.tables {
            let _ = writeln!(out, "{}", table.name);
            let cells: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(Field::text).collect())
                .collect();
            let widths: Vec<usize> = table
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |items: Vec<&str>| {
                let padded: Vec<String> = items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect();
                format!("  {}", padded.join("  ").trim_end())
            };
            let _ = writeln!(out, "{}", line(table.columns.clone()));
            for row in &cells {
                let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    /// Tables as `header + rows`, separated by blank lines; a result with no
    /// table is a single-row table of its fields.
    fn csv(&self) -> String {
        let mut out = String::new();
        if self.tables.is_empty() {
            let header: Vec<&str> = self.fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = self.fields.iter().map(|(_, v)| v.csv()).collect();
            let _ = writeln!(out, "{}", header.join(","));
            let _ = writeln!(out, "{}", row.join(","));
            return out;
        }
        for (i, table) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "{}", table.columns.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Field::csv).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        out
    }

    fn json(&self) -> String {
        let mut result = Map::new();
        for (k, v) in &self.fields {
            result.insert((*k).to_owned(), v.json());
        }
        for table in &self.tables {
            let rows = table
                .rows
                .iter()
                .map(|row| {
                    Value::Object(
                        table
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| ((*c).to_owned(), v.json()))
                            .collect(),
                    )
                })
                .collect();
            result.insert(table.name.to_owned(), Value::Array(rows));
        }
        if !self.notes.is_empty() {
            result.insert(
                "notes".to_owned(),
                Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
            );
        }
        let mut top = Map::new();
        top.insert("command".to_owned(), Value::String(self.command.to_owned()));
        top.insert("params".to_owned(), self.params.clone());
        top.insert("result".to_owned(), Value::Object(result));
        let mut text = serde_json::to_string_pretty(&Value::Object(top))
            .expect("report values always serialize");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report::new("demo", serde_json::json!({"alpha": 0.5}))
            .field("xi", 0.75)
            .field("degenerate", false)
            .field("missing", f64::NAN)
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e+0");
        assert_eq!(format_float(-0.25), "-2.5000000000000000e-1");
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_single_row() {
        assert_eq!(
            sample().render(Format::Csv),
            "xi,degenerate,missing\n7.5000000000000000e-1,false,nan\n"
        );
    }

    #[test]
    fn json_numbers_are_literals() {
        let text = sample().render(Format::Json);
        assert!(text.contains("\"xi\": 7.5000000000000000e-1"), "{text}");
        assert!(text.contains("\"missing\": null"));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["command"], "demo");
    }

    #[test]
    fn tables_render_in_every_format() {
        let r = Report::new("t", Value::Null).table(Table {
            name: "samples",
            columns: vec!["x", "value"],
            rows: vec![
                vec![0.0.into(), 1.0.into()],
                vec![1.0.into(), Field::Text("a,b".into())],
            ],
        });
        assert_eq!(
            r.render(Format::Csv),
            "x,value\n0.0000000000000000e+0,1.0000000000000000e+0\n1.0000000000000000e+0,\"a,b\"\n"
        );
        assert!(r.render(Format::Pretty).contains("samples"));
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 2);
    }
}
