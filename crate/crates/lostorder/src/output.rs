//! Line-delimited JSON and CSV rendering of command results.
//!
//! A [`Report`] has one main table, optional extra sections and a summary.
//! In JSON every row becomes an object tagged with `"record"`. In CSV the
//! main table is the body (header row first); sections and the summary
//! follow as `# `-prefixed comment lines so that plain CSV readers see only
//! the main table.

use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rounds to 12 significant digits; maps `-0.0` to `0.0`.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// A JSON number rounded to 12 significant digits, or `null` if not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(sig12(x)).map_or(Value::Null, Value::Number)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub main: Table,
    pub sections: Vec<Table>,
    pub summary: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new(main: Table) -> Self {
        Self { main, sections: Vec::new(), summary: Vec::new() }
    }

    pub fn summary(mut self, key: &'static str, value: Value) -> Self {
        self.summary.push((key, value));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> String {
        let mut out = String::new();
        for table in std::iter::once(&self.main).chain(&self.sections) {
            for row in &table.rows {
                let mut obj = Map::new();
                obj.insert("record".into(), Value::from(table.name));
                for (col, v) in table.columns.iter().zip(row) {
                    obj.insert((*col).into(), v.clone());
                }
                out.push_str(&Value::Object(obj).to_string());
                out.push('\n');
            }
        }
        if !self.summary.is_empty() {
            let mut obj = Map::new();
            obj.insert("record".into(), Value::from("summary"));
            for (k, v) in &self.summary {
                obj.insert((*k).into(), v.clone());
            }
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        csv_table(&mut out, "", &self.main);
        for section in &self.sections {
            let _ = writeln!(out, "# [{}]", section.name);
            csv_table(&mut out, "# ", section);
        }
        if !self.summary.is_empty() {
            out.push_str("# [summary]\n");
            for (k, v) in &self.summary {
                let _ = writeln!(out, "# {k},{}", csv_cell(v));
            }
        }
        out
    }
}

fn csv_table(out: &mut String, prefix: &str, table: &Table) {
    let _ = writeln!(out, "{prefix}{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        let _ = writeln!(out, "{prefix}{}", cells.join(","));
    }
}

/// `null` renders as `undefined`; strings are quoted only when needed.
pub fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => "undefined".into(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
