//! Rendering of command reports as text or JSON.
//!
//! Both forms come from the same serialized value, so every JSON field has a
//! text line with the same key and vice versa.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn render<T: Serialize>(report: &T, format: Format) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("json");
            s.push('\n');
            s
        }
        Format::Text => text(&value),
    }
}

fn text(value: &Value) -> String {
    let Value::Object(fields) = value else {
        return format!("{}\n", inline(value, 0));
    };
    let mut out = String::new();
    for (key, v) in fields {
        match v {
            Value::String(s) if s.contains('\n') => {
                out.push_str(&format!("{key}:\n{s}"));
                if !s.ends_with('\n') {
                    out.push('\n');
                }
            }
            Value::Array(items)
                if items
                    .iter()
                    .any(|x| x.as_str().is_some_and(|s| s.contains('\n'))) =>
            {
                out.push_str(&format!("{key}:\n"));
                let blocks: Vec<String> = items.iter().map(|x| inline(x, 0)).collect();
                out.push_str(&blocks.join("\n"));
            }
            Value::Array(items)
                if items.iter().any(|x| {
                    x.is_array() || x.is_object() || x.as_str().is_some_and(|s| s.contains(' '))
                }) =>
            {
                out.push_str(&format!("{key}:\n"));
                for item in items {
                    let line = match item {
                        Value::Array(row) => row
                            .iter()
                            .map(|x| inline(x, 1))
                            .collect::<Vec<_>>()
                            .join(" "),
                        other => inline(other, 0),
                    };
                    out.push_str(&format!("  {line}\n"));
                }
            }
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(|x| inline(x, 1)).collect();
                out.push_str(&format!("{key}: {}\n", joined.join(" ")).replace(": \n", ":\n"));
            }
            other => out.push_str(&format!("{key}: {}\n", inline(other, 0))),
        }
    }
    out
}

/// One-line form: objects become tuples of their values.
fn inline(v: &Value, depth: usize) -> String {
    let sep = if depth == 0 { ", " } else { "," };
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => {
            format!(
                "[{}]",
                xs.iter()
                    .map(|x| inline(x, depth + 1))
                    .collect::<Vec<_>>()
                    .join(sep)
            )
        }
        Value::Object(m) => {
            format!(
                "({})",
                m.values()
                    .map(|x| inline(x, depth + 1))
                    .collect::<Vec<_>>()
                    .join(sep)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_mirrors_fields() {
        let v = json!({
            "count": 3,
            "g": [4, 4, 1],
            "map": "n 1\n0 1 0 0\n",
            "trace": [{"op": "replacement", "site": {"r": 1, "s": 0}, "changed": 4}],
            "warning": null,
            "empty": [],
        });
        let t = render(&v, Format::Text);
        assert_eq!(
            t,
            "count: 3\ng: 4 4 1\nmap:\nn 1\n0 1 0 0\ntrace:\n  (replacement, (1,0), 4)\nwarning: -\nempty:\n"
        );
        let j = render(&v, Format::Json);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in keys {
            assert!(j.contains(&format!("\"{k}\"")));
            assert!(t.contains(&format!("{k}:")));
        }
    }

    #[test]
    fn matrix_rows() {
        let v = json!({"matrix": [[1, 0], [2, 1]]});
        assert_eq!(render(&v, Format::Text), "matrix:\n  1 0\n  2 1\n");
    }
}
