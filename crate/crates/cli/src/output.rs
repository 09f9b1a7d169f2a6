//! Rendering of report envelopes as JSON, CSV or plain text.

use std::error::Error;
use std::fmt::Write as _;

use bloch_core::report::ReportEnvelope;
use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `{:.16e}` keeps 17 significant digits, enough to round-trip any `f64`.
fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        leaf => out.push((prefix.to_string(), leaf.clone())),
    }
}

/// Rows of objects for the commands whose payload is naturally a table.
fn table(envelope: &ReportEnvelope) -> Option<&Vec<Value>> {
    let key = match envelope.command.name.as_str() {
        "bn" => "rows",
        "verify" => "checks",
        _ => return None,
    };
    envelope.payload.get(key)?.as_array()
}

fn write_csv(envelope: &ReportEnvelope) -> Result<String, Box<dyn Error>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match table(envelope) {
        Some(rows) => {
            let header: Vec<String> = rows
                .first()
                .and_then(Value::as_object)
                .map(|m| m.keys().cloned().collect())
                .unwrap_or_default();
            w.write_record(&header)?;
            for row in rows {
                w.write_record(header.iter().map(|k| scalar(&row[k])))?;
            }
        }
        None => {
            let mut fields = Vec::new();
            flatten("", &envelope.payload, &mut fields);
            w.write_record(["field", "value"])?;
            for (k, v) in fields {
                w.write_record([k, scalar(&v)])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn write_text(envelope: &ReportEnvelope) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# bloch {}  command={}  seed={}  wall_time={:.3}s",
        envelope.tool_version, envelope.command.name, envelope.seed, envelope.wall_time_seconds
    );
    let text = |v: &Value| match v {
        Value::Number(n) if n.is_f64() => match n.as_f64() {
            Some(x) if x != 0.0 && !(1e-4..1e15).contains(&x.abs()) => format!("{x:e}"),
            Some(x) => x.to_string(),
            None => String::new(),
        },
        other => scalar(other),
    };
    match (envelope.command.name.as_str(), table(envelope)) {
        ("verify", Some(rows)) => {
            for row in rows {
                let mark = if row["passed"].as_bool() == Some(true) {
                    "PASS"
                } else {
                    "FAIL"
                };
                let _ = writeln!(
                    s,
                    "{mark}  {:<40} margin {:<24} {}",
                    text(&row["name"]),
                    text(&row["margin"]),
                    text(&row["detail"])
                );
            }
        }
        (_, Some(rows)) => {
            let header: Vec<&String> = rows
                .first()
                .and_then(Value::as_object)
                .map(|m| m.keys().collect())
                .unwrap_or_default();
            let line: Vec<String> = header.iter().map(|h| format!("{h:>22}")).collect();
            let _ = writeln!(s, "{}", line.join(""));
            for row in rows {
                let line: Vec<String> = header
                    .iter()
                    .map(|h| format!("{:>22}", text(&row[h.as_str()])))
                    .collect();
                let _ = writeln!(s, "{}", line.join(""));
            }
        }
        _ => {
            let mut fields = Vec::new();
            flatten("", &envelope.payload, &mut fields);
            for (k, v) in fields {
                let _ = writeln!(s, "{k} = {}", text(&v));
            }
        }
    }
    s
}

pub fn render(envelope: &ReportEnvelope, format: Format) -> Result<String, Box<dyn Error>> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(envelope)? + "\n",
        Format::Csv => write_csv(envelope)?,
        Format::Text => write_text(envelope),
    })
}
