//! The report every command produces, and its json, csv and text renderings.

use std::collections::BTreeMap;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    /// Every invariant that was checked, with its outcome.
    pub certificates: Value,
    pub trusted_to: Option<usize>,
    /// Present only with `--timings`, so default output is reproducible.
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

/// A finished command: the report and whether every check passed.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        match format {
            Format::Json => serde_json::to_string_pretty(&value).expect("reports serialize") + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["key", "value"]).expect("in-memory write");
                for (k, v) in flatten(&value) {
                    w.write_record([k, v]).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
            }
            Format::Text => flatten(&value).into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        }
    }
}

/// Leaves of a JSON value keyed by dotted paths; arrays of scalars stay whole.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(x, join(k), out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                walk(x, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push((path, s.clone())),
        other => out.push((path, other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flatten_keeps_scalar_arrays() {
        let v = json!({"a": {"b": [1, 2]}, "c": [{"d": "x"}], "e": null});
        let f = flatten(&v);
        assert_eq!(
            f,
            vec![
                ("a.b".to_string(), "[1,2]".to_string()),
                ("c.0.d".to_string(), "x".to_string()),
                ("e".to_string(), "null".to_string())
            ]
        );
    }

    #[test]
    fn csv_quotes_commas() {
        let r = Report {
            command: "tor".into(),
            inputs: json!({}),
            results: json!({"dims": [1, 1]}),
            certificates: json!({}),
            trusted_to: Some(1),
            timings_ms: None,
        };
        let text = r.render(Format::Csv);
        assert!(text.contains("results.dims,\"[1,1]\""));
    }
}
