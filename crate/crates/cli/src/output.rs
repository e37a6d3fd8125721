//! Deterministic JSON and CSV rendering.
//!
//! Object keys are written in sorted order whatever map type backs them.
//! Floats are written with 17 significant digits, which round-trips every
//! `f64`.

use std::fmt::Write as _;

use serde_json::Value;

/// A float with 17 significant digits: positional notation for moderate
/// exponents, scientific otherwise. Non-finite values become `null`.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        let mut s = format!("{x:.decimals$}");
        if !s.contains('.') {
            s.push_str(".0");
        }
        s
    } else {
        sci
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings serialize"));
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat("  ").take(n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().expect("f64")));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => write_string(out, s),
        Value::Array(items) => {
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut entries: Vec<_> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            out.push_str("{\n");
            for (i, (k, item)) in entries.into_iter().enumerate() {
                pad(out, indent + 1);
                write_string(out, k);
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format_float(n.as_f64().expect("f64")),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => {
            let mut s = String::new();
            write_value(&mut s, other, 0);
            s.replace('\n', " ")
        }
    }
}

/// One header row (the sorted union of keys) followed by one row per object.
pub fn to_csv(rows: &[serde_json::Map<String, Value>]) -> Result<String, csv::Error> {
    let mut columns: Vec<&String> = rows.iter().flat_map(|r| r.keys()).collect();
    columns.sort();
    columns.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns)?;
    for row in rows {
        w.write_record(columns.iter().map(|c| row.get(*c).map(cell).unwrap_or_default()))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip() {
        for x in [1.0, 0.1, 47.89473684210526, 6988228.0531, 1e-9, 3.5e20, -2.0 / 3.0, f64::MIN_POSITIVE] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(0.5), "0.50000000000000000");
        assert_eq!(format_float(f64::NAN), "null");
    }

    #[test]
    fn sorted_keys_and_layout() {
        let v = json!({"b": 1, "a": [1, 2], "c": {"z": 0.25, "y": "s"}});
        assert_eq!(
            to_json(&v),
            "{\n  \"a\": [1, 2],\n  \"b\": 1,\n  \"c\": {\n    \"y\": \"s\",\n    \"z\": 0.25000000000000000\n  }\n}\n"
        );
    }

    #[test]
    fn csv_union_of_columns() {
        let rows = vec![
            json!({"a": 1, "b": [2, 3]}).as_object().unwrap().clone(),
            json!({"c": "x,y"}).as_object().unwrap().clone(),
        ];
        assert_eq!(to_csv(&rows).unwrap(), "a,b,c\n1,2 3,\n,,\"x,y\"\n");
    }
}
