//! Deterministic rendering of result documents.

use serde_json::Value;

/// Pretty JSON with a trailing newline; object keys are already sorted by
/// the serde_json value representation.
pub fn render_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

/// Flat indented text tree for terminal reading.
pub fn render_table(doc: &Value) -> String {
    let mut out = String::new();
    fn walk(v: &Value, indent: usize, key: Option<&str>, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(map) => {
                if let Some(k) = key {
                    out.push_str(&format!("{pad}{k}:\n"));
                }
                for (k, val) in map {
                    walk(val, indent + usize::from(key.is_some()), Some(k), out);
                }
            }
            Value::Array(arr) => {
                if let Some(k) = key {
                    out.push_str(&format!("{pad}{k}: [{}]\n", summarize_array(arr)));
                }
            }
            other => {
                let text = match other {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                if let Some(k) = key {
                    out.push_str(&format!("{pad}{k} = {text}\n"));
                }
            }
        }
    }
    fn summarize_array(arr: &[Value]) -> String {
        if arr.len() > 8 {
            format!("{} items", arr.len())
        } else {
            arr.iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(", ")
        }
    }
    walk(doc, 0, None, &mut out);
    out
}

/// CSV rows; spectra render as label,eigenvalue lines, anything else as
/// flattened path,value pairs.
pub fn render_csv(doc: &Value) -> String {
    if let Some(rows) = doc
        .pointer("/result/spectrum")
        .and_then(|v| v.as_array())
    {
        let mut out = String::from("label,eigenvalue\n");
        for row in rows {
            let label = row.get("label").and_then(|v| v.as_str()).unwrap_or("?");
            let eig = row.get("eigenvalue").map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!("{label},{eig}\n"));
        }
        return out;
    }
    if let Some(rows) = doc.pointer("/result/witness").and_then(|v| v.as_array()) {
        let mut out = String::from("label,eigenvalue\n");
        for row in rows {
            let label = row.get("label").and_then(|v| v.as_str()).unwrap_or("?");
            let eig = row.get("eigenvalue").map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!("{label},{eig}\n"));
        }
        return out;
    }
    let mut out = String::from("path,value\n");
    fn walk(v: &Value, path: &str, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, val) in map {
                    let next = if path.is_empty() {
                        k.clone()
                    } else {
                        format!("{path}.{k}")
                    };
                    walk(val, &next, out);
                }
            }
            Value::Array(arr) => {
                for (i, val) in arr.iter().enumerate() {
                    walk(val, &format!("{path}[{i}]"), out);
                }
            }
            other => {
                let text = match other {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                out.push_str(&format!("{path},{text}\n"));
            }
        }
    }
    if let Some(result) = doc.get("result") {
        walk(result, "", &mut out);
    }
    out
}
