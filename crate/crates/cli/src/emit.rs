//! Report emission as CSV or JSON, with every float at 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// What a command produced: scalar fields and an optional table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

impl Report {
    pub fn field(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }
}

/// A float as a JSON value; non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex(z: Option<num_complex::Complex<f64>>) -> Value {
    match z {
        Some(z) => {
            let mut m = Map::new();
            m.insert("re".into(), num(z.re));
            m.insert("im".into(), num(z.im));
            Value::Object(m)
        }
        None => Value::Null,
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct RoundTrip;

impl serde_json::ser::Formatter for RoundTrip {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        writer.write_all(fmt_f64(value as f64).as_bytes())
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(csv_cell).collect::<Vec<_>>().join("; "),
        Value::Object(_) => {
            let mut out = Vec::new();
            flatten("", v, &mut out);
            out.into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("; ")
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, sub) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}_{k}") };
                flatten(&key, sub, out);
            }
        }
        other => out.push((prefix.to_string(), csv_cell(other))),
    }
}

pub fn write_json<W: Write>(mut w: W, meta: &Map<String, Value>, report: &Report) -> io::Result<()> {
    let mut top = Map::new();
    top.insert("meta".into(), Value::Object(meta.clone()));
    for (k, v) in &report.fields {
        top.insert(k.clone(), v.clone());
    }
    if let Some(t) = &report.table {
        let rows = t
            .rows
            .iter()
            .map(|r| Value::Object(t.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        top.insert(t.name.into(), Value::Array(rows));
    }
    let mut ser = serde_json::Serializer::with_formatter(&mut w, RoundTrip);
    Value::Object(top).serialize(&mut ser).map_err(io::Error::other)?;
    w.write_all(b"\n")
}

/// `#`-prefixed metadata and fields, then the column row and the data rows.
pub fn write_csv<W: Write>(mut w: W, meta: &Map<String, Value>, report: &Report) -> io::Result<()> {
    let mut header = Vec::new();
    flatten("", &Value::Object(meta.clone()), &mut header);
    for (k, v) in header {
        writeln!(w, "# {k}: {v}")?;
    }
    match &report.table {
        Some(t) => {
            let mut fields = Vec::new();
            flatten("", &Value::Object(report.fields.clone()), &mut fields);
            for (k, v) in fields {
                writeln!(w, "# {k}: {v}")?;
            }
            writeln!(w, "{}", t.columns.join(","))?;
            for row in &t.rows {
                writeln!(w, "{}", row.iter().map(csv_cell).collect::<Vec<_>>().join(","))?;
            }
        }
        None => {
            writeln!(w, "quantity,value")?;
            let mut fields = Vec::new();
            flatten("", &Value::Object(report.fields.clone()), &mut fields);
            for (k, v) in fields {
                writeln!(w, "{k},{v}")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        let mut r = Report::default();
        let x = 0.1 + 0.2;
        r.field("x", num(x));
        r.field("n", 3);
        let mut buf = Vec::new();
        write_json(&mut buf, &Map::new(), &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("3.0000000000000004e-1"), "{text}");
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), x);
        assert_eq!(back["n"], 3);
    }

    #[test]
    fn csv_layout() {
        let mut meta = Map::new();
        meta.insert("command".into(), "demo".into());
        let r = Report {
            fields: Map::new(),
            table: Some(Table { name: "rows", columns: vec!["a", "b"], rows: vec![vec![num(1.5), Value::Null]] }),
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &meta, &r).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# command: demo\na,b\n1.5000000000000000e0,\n");
    }
}
