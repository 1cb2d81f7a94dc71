//! JSON report builder. Every numeric field `k` is written together with a
//! `k_units` string; keys are emitted in sorted order.

use serde_json::{Map, Value};

use crate::args::OutputFormat;

#[derive(Debug, Default, Clone)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, value: f64, units: &str) -> Self {
        self.0.insert(key.to_owned(), Value::from(value));
        self.units(key, units)
    }

    pub fn int(mut self, key: &str, value: u64, units: &str) -> Self {
        self.0.insert(key.to_owned(), Value::from(value));
        self.units(key, units)
    }

    pub fn opt_int(mut self, key: &str, value: Option<u64>, units: &str) -> Self {
        self.0
            .insert(key.to_owned(), value.map_or(Value::Null, Value::from));
        self.units(key, units)
    }

    pub fn ints(mut self, key: &str, values: &[usize], units: &str) -> Self {
        self.0
            .insert(key.to_owned(), values.iter().map(|&v| v as u64).collect());
        self.units(key, units)
    }

    pub fn text(mut self, key: &str, value: impl Into<String>) -> Self {
        self.0.insert(key.to_owned(), Value::String(value.into()));
        self
    }

    pub fn flag(mut self, key: &str, value: bool) -> Self {
        self.0.insert(key.to_owned(), Value::Bool(value));
        self
    }

    pub fn obj(mut self, key: &str, value: Obj) -> Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn list(mut self, key: &str, values: Vec<Obj>) -> Self {
        self.0.insert(
            key.to_owned(),
            values.into_iter().map(Value::from).collect(),
        );
        self
    }

    fn units(mut self, key: &str, units: &str) -> Self {
        self.0
            .insert(format!("{key}_units"), Value::String(units.to_owned()));
        self
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Self {
        Value::Object(o.0)
    }
}

/// Flat table for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub struct Output {
    pub report: Obj,
    pub table: Option<Table>,
}

impl Output {
    pub fn new(report: Obj) -> Self {
        Self {
            report,
            table: None,
        }
    }

    pub fn with_table(report: Obj, table: Table) -> Self {
        Self {
            report,
            table: Some(table),
        }
    }

    pub fn render(self, format: OutputFormat) -> String {
        let value = Value::from(self.report);
        match format {
            OutputFormat::Json => serde_json::to_string(&value).expect("JSON values serialize"),
            OutputFormat::Pretty => {
                serde_json::to_string_pretty(&value).expect("JSON values serialize")
            }
            OutputFormat::Csv => {
                let table = self.table.unwrap_or_else(|| flatten(&value));
                to_csv(&table)
            }
        }
    }
}

/// `path,value,units` rows for every numeric or boolean leaf.
pub fn flatten(value: &Value) -> Table {
    let mut rows = Vec::new();
    walk(value, String::new(), None, &mut rows);
    Table {
        header: vec!["field".into(), "value".into(), "units".into()],
        rows,
    }
}

fn walk(value: &Value, path: String, units: Option<&str>, rows: &mut Vec<Vec<String>>) {
    let units = units.unwrap_or("").to_owned();
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if k.ends_with("_units") {
                    continue;
                }
                let u = map.get(&format!("{k}_units")).and_then(Value::as_str);
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(v, p, u, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(v, format!("{path}[{i}]"), Some(&units), rows);
            }
        }
        Value::Number(n) => rows.push(vec![path, n.to_string(), units]),
        Value::Bool(b) => rows.push(vec![path, b.to_string(), units]),
        Value::Null => rows.push(vec![path, String::new(), units]),
        Value::String(_) => {}
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn to_csv(table: &Table) -> String {
    let line = |cells: &[String]| {
        cells
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = line(&table.header);
    for row in &table.rows {
        out.push('\n');
        out.push_str(&line(row));
    }
    out
}
