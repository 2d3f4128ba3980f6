//! Tabular output: a metadata object plus rows of named cells, rendered as
//! CSV (header and rows only) or JSON.

use serde::Serialize;
use serde_json::{Map, Value};

use super::args::Format;
use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub metadata: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { metadata: Map::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// A single-row table from the fields of a serializable struct.
    pub fn from_record<S: Serialize>(record: &S) -> Result<Self> {
        Self::from_records(std::slice::from_ref(record))
    }

    /// One row per record; columns are the first record's field names.
    pub fn from_records<S: Serialize>(records: &[S]) -> Result<Self> {
        let objects: Vec<Map<String, Value>> = records
            .iter()
            .map(|r| match to_value(r)? {
                Value::Object(m) => Ok(m),
                other => Err(Error::Io(format!("record is not an object: {other}"))),
            })
            .collect::<Result<_>>()?;
        let columns: Vec<String> = objects.first().map(|m| m.keys().cloned().collect()).unwrap_or_default();
        let rows = objects
            .into_iter()
            .map(|m| columns.iter().map(|c| m.get(c).cloned().unwrap_or(Value::Null)).collect())
            .collect();
        Ok(Self { metadata: Map::new(), columns, rows })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        push_line(&mut out, self.columns.iter().map(|c| quote(c)));
        for row in &self.rows {
            push_line(&mut out, row.iter().map(|v| quote(&csv_cell(v))));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().cloned()).collect()))
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(self.metadata.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("values are finite");
        s.push('\n');
        s
    }
}

/// Serializes `x`; non-finite floats become `null`.
pub fn to_value<S: Serialize>(x: &S) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Io(e.to_string()))
}

/// A float cell that survives JSON: non-finite values become strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(fmt_float(x))
    }
}

pub fn opt_float(x: Option<f64>) -> Value {
    x.map(float).unwrap_or(Value::Null)
}

fn push_line(out: &mut String, cells: impl Iterator<Item = String>) {
    let cells: Vec<String> = cells.collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// RFC 4180 quoting: fields with commas, quotes or line breaks are quoted,
/// and inner quotes doubled.
pub fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (None, Some(i)) => i.to_string(),
            _ => fmt_float(n.as_f64().expect("serde_json numbers are u64, i64 or f64")),
        },
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}

/// `%g`-style formatting with 12 significant digits: fixed notation for
/// decimal exponents in `[-5, 12)`, scientific otherwise, trailing zeros
/// removed.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}
