use std::io::{Read, Write};

use serde_json::{Map, Number, Value as Json};

use super::config::Format;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    /// CSV cell: floats with 17 significant digits.
    fn to_cell(&self) -> String {
        match self {
            Value::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Value::Float(x) => x.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Float(x) => Number::from_f64(*x).map(Json::Number).unwrap_or(Json::Null),
            Value::Int(i) => Json::from(*i),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::Empty => Json::Null,
        }
    }

    fn parse_cell(s: &str) -> Value {
        if s.is_empty() {
            Value::Empty
        } else if let Ok(i) = s.parse::<i64>() {
            Value::Int(i)
        } else if let Ok(x) = s.parse::<f64>() {
            Value::Float(x)
        } else if let Ok(b) = s.parse::<bool>() {
            Value::Bool(b)
        } else {
            Value::Text(s.to_string())
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Value::Empty)
    }
}

/// Rows with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Panics if the row length differs from the column count.
    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| invalid(format!("no column `{name}` (have: {})", self.columns.join(", "))))
    }

    pub fn get(&self, row: usize, name: &str) -> Result<&Value> {
        Ok(&self.rows[row][self.column_index(name)?])
    }

    pub fn set(&mut self, row: usize, name: &str, value: Value) -> Result<()> {
        let j = self.column_index(name)?;
        self.rows[row][j] = value;
        Ok(())
    }

    pub fn write<W: Write>(&self, out: W, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Jsonl => self.write_jsonl(out),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::to_cell))?;
        }
        w.flush()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in &self.rows {
            let obj: Map<String, Json> = self
                .columns
                .iter()
                .cloned()
                .zip(row.iter().map(Value::to_json))
                .collect();
            serde_json::to_writer(&mut out, &obj)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Table> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r
            .headers()
            .map_err(|e| invalid(format!("csv header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut t = Table::new(headers);
        for rec in r.records() {
            let rec = rec.map_err(|e| invalid(format!("csv record: {e}")))?;
            t.push(rec.iter().map(Value::parse_cell).collect());
        }
        Ok(t)
    }

    pub fn read_jsonl<R: Read>(input: R) -> Result<Table> {
        let mut text = String::new();
        std::io::BufReader::new(input)
            .read_to_string(&mut text)
            .map_err(|e| invalid(format!("jsonl read: {e}")))?;
        let mut table: Option<Table> = None;
        for (lineno, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let obj: Map<String, Json> =
                serde_json::from_str(line).map_err(|e| invalid(format!("jsonl line {}: {e}", lineno + 1)))?;
            let t = table.get_or_insert_with(|| Table::new(obj.keys().cloned()));
            let row = t
                .columns
                .iter()
                .map(|c| match obj.get(c) {
                    Some(Json::Number(n)) => n.as_i64().map(Value::Int).unwrap_or_else(|| Value::Float(n.as_f64().unwrap_or(f64::NAN))),
                    Some(Json::Bool(b)) => Value::Bool(*b),
                    Some(Json::String(s)) => Value::Text(s.clone()),
                    _ => Value::Empty,
                })
                .collect();
            t.push(row);
        }
        table.ok_or_else(|| invalid("empty jsonl input"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["n", "kappa_sq", "note", "ok"]);
        t.push(vec![1usize.into(), 0.1.into(), "a,b".into(), true.into()]);
        t.push(vec![2usize.into(), Value::Float(1.0 / 3.0), Value::Empty, false.into()]);
        t
    }

    #[test]
    fn csv_round_trip_keeps_full_precision() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"a,b\""));
        assert!(text.contains("3.3333333333333331e-1"));
        let back = Table::read_csv(&buf[..]).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn jsonl_preserves_column_order() {
        let mut buf = Vec::new();
        sample().write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("{\"n\":1,\"kappa_sq\":0.1,"));
        let back = Table::read_jsonl(&buf[..]).unwrap();
        assert_eq!(back.columns(), sample().columns());
        assert_eq!(back.get(1, "note").unwrap(), &Value::Empty);
    }
}
