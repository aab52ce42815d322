//! Aligned plain-text rendering of the JSON documents.

use std::fmt::Write;

use serde_json::Value;

pub fn text(doc: &Value) -> String {
    let mut out = String::new();
    match doc.get("criteria").and_then(Value::as_array) {
        Some(criteria) => report(&mut out, doc, criteria),
        None => value(&mut out, doc, 0),
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(xs.iter().filter_map(scalar).collect::<Vec<_>>().join("  "))
        }
        Value::Object(_) | Value::Array(_) => None,
        other => Some(other.to_string()),
    }
}

fn value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k:width$}  {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}").unwrap();
                        value(out, x, indent + 2);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}[{i}]  {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}[{i}]").unwrap();
                        value(out, x, indent + 2);
                    }
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}

fn status(v: &Value) -> &'static str {
    if v.get("status").and_then(Value::as_str) == Some("pass") {
        "pass"
    } else {
        "FAIL"
    }
}

fn report(out: &mut String, doc: &Value, criteria: &[Value]) {
    let suite = doc.get("suite").and_then(Value::as_str).unwrap_or("?");
    writeln!(out, "suite {suite}: {}", status(doc)).unwrap();
    for c in criteria {
        let id = c.get("id").and_then(Value::as_u64).unwrap_or(0);
        let name = c.get("name").and_then(Value::as_str).unwrap_or("");
        writeln!(out, "{}  {id:>2}  {name}", status(c)).unwrap();
        let checks = c
            .get("checks")
            .and_then(Value::as_array)
            .map(Vec::as_slice)
            .unwrap_or_default();
        for check in checks {
            let property = check.get("property").and_then(Value::as_str).unwrap_or("");
            writeln!(out, "          {}  {property}", status(check)).unwrap();
            for w in check
                .get("witnesses")
                .and_then(Value::as_array)
                .into_iter()
                .flatten()
            {
                writeln!(out, "                  {}", w.as_str().unwrap_or_default()).unwrap();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn objects_align_their_keys() {
        let doc = json!({"order": 2, "transform": "T", "main": [["1"], ["1"], ["-1/2"]]});
        assert_eq!(
            text(&doc),
            "main\n  [0]  1\n  [1]  1\n  [2]  -1/2\norder      2\ntransform  T\n"
        );
    }

    #[test]
    fn reports_list_every_check() {
        let doc = json!({"suite": "x", "status": "fail", "criteria": [
            {"id": 9, "name": "fliess", "status": "fail", "checks": [
                {"property": "p", "status": "fail", "witnesses": ["w"]}
            ]}
        ]});
        assert_eq!(
            text(&doc),
            "suite x: FAIL\nFAIL   9  fliess\n          FAIL  p\n                  w\n"
        );
    }
}
