use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::Format;

/// Rounds to 9 significant digits, the precision of every written float.
pub fn round9(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.8e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

/// Recursively rounds every float in a JSON value.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            serde_json::Number::from_f64(round9(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.8e}"),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => round_json(json!(x)),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i64::from(i))
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

/// A data table with ordered metadata, written as commented CSV or JSON.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("metadata serializes");
        self.meta.push((key.to_string(), round_json(value)));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let text = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            writeln!(s, "# {k}: {text}").expect("write to string");
        }
        writeln!(s, "{}", self.columns.join(",")).expect("write to string");
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(s, "{}", cells.join(",")).expect("write to string");
        }
        s
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self.meta.iter().cloned().collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({ "meta": meta, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())
}

/// Gnuplot script plotting `y` columns against the first column of a CSV.
pub fn plot_stub(data: &Path, columns: &[&str], x: usize, ys: &[usize]) -> String {
    let name = data.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let mut s = String::from("set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n");
    let plots: Vec<String> = ys
        .iter()
        .map(|&y| format!("'{name}' using {}:{} with lines title '{}'", x + 1, y + 1, columns[y]))
        .collect();
    writeln!(s, "set xlabel '{}'", columns[x]).expect("write to string");
    writeln!(s, "plot {}", plots.join(", \\\n     ")).expect("write to string");
    s
}
