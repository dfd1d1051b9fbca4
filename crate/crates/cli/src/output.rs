//! Deterministic rendering: JSON objects with sorted keys and floats rounded
//! to nine significant digits, CSV with a single `n,count` header.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 9;

pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| Number::from_f64(round_significant(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        // serde_json's default map is ordered by key.
        Value::Object(o) => Value::Object(
            o.into_iter()
                .map(|(k, v)| (k, normalize(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String, serde_json::Error> {
    let value = normalize(serde_json::to_value(report)?);
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

pub fn counts_csv(rows: &[(usize, BigInt)]) -> String {
    let mut out = String::from("n,count\n");
    for (n, c) in rows {
        out.push_str(&format!("{n},{c}\n"));
    }
    out
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    count: String,
}

#[derive(Serialize)]
struct CountReport<'a> {
    k: usize,
    method: &'a str,
    counts: Vec<CountRow>,
}

pub fn counts_json(k: usize, method: &str, rows: &[(usize, BigInt)]) -> Result<String, serde_json::Error> {
    to_json(&CountReport {
        k,
        method,
        counts: rows
            .iter()
            .map(|(n, c)| CountRow {
                n: *n,
                count: c.to_string(),
            })
            .collect(),
    })
}
