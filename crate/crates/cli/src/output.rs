//! Report serialization. Floats are written with 17 significant digits.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// A flat table for plotting.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = Value>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }
}

/// Outcome of one command.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub body: Value,
    pub table: Table,
}

impl Report {
    pub fn new<T: Serialize>(command: &str, pass: bool, body: &T, table: Table) -> Self {
        Self {
            command: command.into(),
            pass,
            body: serde_json::to_value(body).expect("report serializes"),
            table,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = String::new();
                let doc = serde_json::json!({
                    "command": self.command,
                    "pass": self.pass,
                    "report": self.body,
                });
                write_json(&mut s, &doc);
                s.push('\n');
                s
            }
            Format::Csv => render_csv(&self.table),
        }
    }
}

pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if n.is_f64() {
        out.push_str(&float(n.as_f64().unwrap_or(f64::NAN)));
    } else {
        let _ = write!(out, "{n}");
    }
}

/// Compact JSON with floats in `{:.16e}` form. Keys keep serde_json's
/// sorted order, so equal values give equal bytes.
pub fn write_json(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(out, x);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push(':');
                write_json(out, x);
            }
            out.push('}');
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => {
            let mut s = String::new();
            write_number(&mut s, n);
            s
        }
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => {
            let mut s = String::new();
            write_json(&mut s, other);
            format!("\"{}\"", s.replace('"', "\"\""))
        }
    }
}

pub fn render_csv(t: &Table) -> String {
    let mut s = t.columns.join(",");
    s.push('\n');
    for row in &t.rows {
        s.push_str(&row.iter().map(csv_cell).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

/// Writes `contents` to `dir/name` through a temporary file in `dir`.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| CliError::Io(e.error))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_seventeen_digits() {
        let mut s = String::new();
        write_json(&mut s, &json!({"b": 0.1, "a": [1, 2.5, null], "s": "x\"y"}));
        assert_eq!(s, r#"{"a":[1,2.5000000000000000e0,null],"b":1.0000000000000001e-1,"s":"x\"y"}"#);
        let x: f64 = float(std::f64::consts::PI).parse().unwrap();
        assert_eq!(x, std::f64::consts::PI);
    }

    #[test]
    fn csv_quotes_when_needed() {
        let mut t = Table::new(&["a", "b"]);
        t.push([json!(1.0), json!("p,q")]);
        assert_eq!(render_csv(&t), "a,b\n1.0000000000000000e0,\"p,q\"\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "r.json", "one").unwrap();
        let p = write_atomic(dir.path(), "r.json", "two").unwrap();
        assert_eq!(std::fs::read_to_string(p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
