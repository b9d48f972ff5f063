//! Plain-text rendering of JSON reports.

use serde_json::Value;

pub(super) fn text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, 0, &mut out);
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

/// `{"entries": [{"i", "m", "e"}]}` as `[i: m@e, ...]` with hex mantissas.
fn as_vector(v: &Value) -> Option<String> {
    let o = v.as_object()?;
    if o.len() != 1 {
        return None;
    }
    let parts = o
        .get("entries")?
        .as_array()?
        .iter()
        .map(|e| Some(format!("{}: {}@{}", e.get("i")?, e.get("m")?.as_str()?, e.get("e")?)))
        .collect::<Option<Vec<_>>>()?;
    Some(format!("[{}]", parts.join(", ")))
}

fn as_condition(v: &Value) -> Option<(String, String, String)> {
    let o = v.as_object()?;
    if o.len() != 3 {
        return None;
    }
    let get = |k: &str| o.get(k).and_then(Value::as_str).map(str::to_owned);
    Some((get("status")?, get("name")?, get("witness")?))
}

fn walk(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                if let Some(s) = scalar(item).or_else(|| as_vector(item)) {
                    if s.contains('\n') {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    } else {
                        out.push_str(&format!("{pad}{k}: {s}\n"));
                    }
                } else if item.as_array().is_some_and(|a| a.iter().all(|x| scalar(x).is_some())) {
                    let parts: Vec<String> =
                        item.as_array().unwrap().iter().filter_map(scalar).collect();
                    out.push_str(&format!("{pad}{k}: [{}]\n", parts.join(", ")));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    walk(item, depth + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if let Some((status, name, witness)) = as_condition(item) {
                    out.push_str(&format!("{pad}{status:<17} {name}  [{witness}]\n"));
                } else if let Some(s) = scalar(item) {
                    out.push_str(&format!("{pad}- {s}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    walk(item, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
