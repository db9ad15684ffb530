use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(out, &text)
}

pub fn emit_csv<I, R>(out: Option<&Path>, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.into_iter().map(|f| escape(&f)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    emit_text(out, &text)
}

/// JSON by default; CSV flattens the document into `field,value` rows with
/// dotted paths (`no_go.satisfier_counts.0`).
pub fn emit_structured<T: Serialize>(out: Option<&Path>, format: Option<Format>, value: &T) -> Result<()> {
    match format.unwrap_or(Format::Json) {
        Format::Json => emit_json(out, value),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten(String::new(), &serde_json::to_value(value)?, &mut rows);
            emit_csv(out, &["field", "value"], rows.into_iter().map(|(k, v)| [k, v]))
        }
    }
}

/// Shortest representation that round-trips, as JSON would print it.
pub fn number(x: f64) -> String {
    Value::from(x).to_string()
}

fn flatten(prefix: String, value: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(join(k), v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(join(&i.to_string()), v, rows);
            }
        }
        Value::String(s) => rows.push((prefix, s.clone())),
        other => rows.push((prefix, other.to_string())),
    }
}

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
