use std::io::Write;

use anyhow::Result;
use serde_json::{Map, Value};

use crate::args::Format;

/// Streams records in the chosen format. Every record is a JSON object with
/// a `record` key naming its kind.
pub struct Emitter {
    out: Box<dyn Write>,
    format: Format,
    index: usize,
}

/// Leaves of a JSON value as `(dotted.path, scalar)` pairs, in key order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, path: &str, out: &mut Vec<(String, String)>) {
        let child = |k: &str| {
            if path.is_empty() {
                k.to_string()
            } else {
                format!("{path}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(v, &child(k), out)),
            Value::Array(a) => a
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(v, &child(&i.to_string()), out)),
            Value::String(s) => out.push((path.to_string(), s.clone())),
            Value::Null => out.push((path.to_string(), String::new())),
            other => out.push((path.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk(value, "", &mut out);
    out
}

/// CSV-encodes rows of four fields.
fn csv_rows<'a>(rows: impl IntoIterator<Item = [&'a str; 4]>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row)?;
    }
    Ok(w.into_inner()?)
}

impl Emitter {
    pub fn new(mut out: Box<dyn Write>, format: Format) -> Result<Self> {
        if format == Format::Csv {
            out.write_all(&csv_rows([["index", "record", "path", "value"]])?)?;
        }
        Ok(Emitter { out, format, index: 0 })
    }

    pub fn emit(&mut self, kind: &str, body: Value) -> Result<()> {
        let mut m = Map::new();
        m.insert("record".into(), Value::String(kind.into()));
        match body {
            Value::Object(fields) => m.extend(fields),
            other => {
                m.insert("value".into(), other);
            }
        }
        let record = Value::Object(m);
        match self.format {
            Format::Json => writeln!(self.out, "{}", serde_json::to_string(&record)?)?,
            Format::Csv => {
                let idx = self.index.to_string();
                let leaves: Vec<_> = flatten(&record).into_iter().filter(|(p, _)| p != "record").collect();
                let bytes = csv_rows(leaves.iter().map(|(p, v)| [idx.as_str(), kind, p.as_str(), v.as_str()]))?;
                self.out.write_all(&bytes)?;
            }
            Format::Table => {
                let rows: Vec<_> = flatten(&record).into_iter().filter(|(p, _)| p != "record").collect();
                let width = rows.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
                writeln!(self.out, "[{}] {kind}", self.index)?;
                for (path, value) in rows {
                    writeln!(self.out, "  {path:<width$}  {value}")?;
                }
            }
        }
        self.index += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flatten_paths() {
        let v = json!({"a": {"hex": "0x1", "w": "1"}, "pts": [[1, 2]], "n": null});
        assert_eq!(
            flatten(&v),
            vec![
                ("a.hex".to_string(), "0x1".to_string()),
                ("a.w".to_string(), "1".to_string()),
                ("n".to_string(), String::new()),
                ("pts.0.0".to_string(), "1".to_string()),
                ("pts.0.1".to_string(), "2".to_string()),
            ]
        );
    }
}
