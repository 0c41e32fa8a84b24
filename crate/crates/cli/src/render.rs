//! Plain-text rendering of JSON results.

use serde_json::Value;

pub fn text(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                match v {
                    Value::Array(items) if items.iter().any(is_compound) => {
                        out.push_str(&format!("{k}:\n"));
                        for item in items {
                            out.push_str(&format!("  {}\n", inline(item)));
                        }
                    }
                    Value::Object(_) => {
                        out.push_str(&format!("{k}:\n"));
                        for line in text(v).lines() {
                            out.push_str(&format!("  {line}\n"));
                        }
                    }
                    _ => out.push_str(&format!("{k:<width$}  {}\n", inline(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                out.push_str(&inline(item));
                out.push('\n');
            }
        }
        other => {
            out.push_str(&inline(other));
            out.push('\n');
        }
    }
    out
}

fn is_compound(v: &Value) -> bool {
    matches!(v, Value::Array(_) | Value::Object(_))
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("({})", parts.join(", "))
        }
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", inline(v)))
            .collect::<Vec<_>>()
            .join("  "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn aligns_scalar_keys() {
        let s = text(&json!({"ok": true, "dimension": 8}));
        assert_eq!(s, "dimension  8\nok         true\n");
    }

    #[test]
    fn lists_rows() {
        let s = text(&json!({"rows": [{"weight": [1, 0], "mult": 1}]}));
        assert_eq!(s, "rows:\n  mult=1  weight=(1, 0)\n");
    }
}
