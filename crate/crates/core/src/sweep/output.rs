//! CSV and JSON serialization of sweep tables.

use serde_json::{json, Map, Value};

use crate::error::{QgemError, Result};

use super::SweepResult;

/// Formats `x` with 15 significant digits, trailing zeros stripped, switching
/// to scientific notation outside `[1e-5, 1e15)` (C's `%.15g`).
pub fn format_sig15(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent in {:e} output");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..15).contains(&exponent) {
        let decimals = (14 - exponent).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    } else {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exponent.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_err(e: impl std::fmt::Display) -> QgemError {
    QgemError::InvalidSpec(format!("cannot write CSV: {e}"))
}

/// `#`-prefixed metadata lines, a header row, then one row per cell.
/// Missing values are empty fields.
pub fn to_csv(result: &SweepResult) -> Result<String> {
    let mut out = String::new();
    for (key, value) in &result.meta {
        out.push_str(&format!("# {key}: {value}\n"));
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = result
        .axes
        .iter()
        .map(|a| a.name.as_str())
        .chain(result.columns.iter().map(String::as_str));
    writer.write_record(header).map_err(csv_err)?;
    for row in &result.rows {
        let fields = row.coords.iter().map(|&c| format_sig15(c)).chain(
            row.values
                .iter()
                .map(|v| v.map(format_sig15).unwrap_or_default()),
        );
        writer.write_record(fields).map_err(csv_err)?;
    }
    let bytes = writer.into_inner().map_err(csv_err)?;
    out.push_str(&String::from_utf8(bytes).map_err(csv_err)?);
    Ok(out)
}

/// `{meta, axes, rows}` with each row an object keyed by column name.
pub fn to_json(result: &SweepResult) -> Result<String> {
    let meta: Map<String, Value> = result
        .meta
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (axis, &c) in result.axes.iter().zip(&row.coords) {
                obj.insert(axis.name.clone(), json!(c));
            }
            for (name, v) in result.columns.iter().zip(&row.values) {
                obj.insert(name.clone(), v.map_or(Value::Null, |x| json!(x)));
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "meta": meta,
        "axes": result.axes,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| QgemError::InvalidSpec(format!("cannot write JSON: {e}")))?;
    text.push('\n');
    Ok(text)
}
