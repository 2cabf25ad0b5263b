use std::fmt::Write;

use serde_json::Value;

/// Plain-text rendering of a JSON report: nested keys are indented, arrays of
/// scalars print inline and arrays of numeric rows print as a grid.
pub fn render_table(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    while out.ends_with('\n') {
        out.pop();
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let items = v.as_array()?;
    let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
    parts.map(|p| format!("[{}]", p.join(", ")))
}

fn grid(rows: &[Value]) -> Option<Vec<Vec<String>>> {
    if rows.is_empty() {
        return None;
    }
    rows.iter()
        .map(|r| r.as_array()?.iter().map(|x| x.as_u64().map(|n| n.to_string())).collect())
        .collect()
}

fn write_grid(out: &mut String, rows: &[Vec<String>], indent: usize) {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    let label = rows.len().saturating_sub(1).to_string().len();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{:indent$}{i:>label$} | {}", "", cells.join(" "));
    }
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                if let Some(s) = inline(v) {
                    let _ = writeln!(out, "{:indent$}{key}: {s}", "");
                } else if let Some(rows) = v.as_array().and_then(|a| grid(a)) {
                    let _ = writeln!(out, "{:indent$}{key}:", "");
                    write_grid(out, &rows, indent + 2);
                } else {
                    let _ = writeln!(out, "{:indent$}{key}:", "");
                    write_value(out, v, indent + 2);
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                match inline(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{:indent$}- {s}", "");
                    }
                    None => {
                        let _ = writeln!(out, "{:indent$}- [{i}]", "");
                        write_value(out, v, indent + 2);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{:indent$}{}", "", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn grids_and_nesting() {
        let text = render_table(&json!({"E2": [[1, 0], [12]], "verdicts": {"overall": "PASS"}, "tot": [1, 2]}));
        assert_eq!(text, "E2:\n  0 |  1  0\n  1 | 12\ntot: [1, 2]\nverdicts:\n  overall: PASS");
    }
}
