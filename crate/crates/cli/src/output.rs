//! Payload rendering: JSON, or CSV with one row per record.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value as Json;

use meanval_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Zeroes every `elapsed_ms` field so reruns produce identical bytes.
pub fn strip_timing(v: &mut Json) {
    match v {
        Json::Object(map) => {
            for (key, val) in map.iter_mut() {
                if key == "elapsed_ms" {
                    *val = Json::from(0);
                } else {
                    strip_timing(val);
                }
            }
        }
        Json::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn cell(v: &Json) -> String {
    match v {
        Json::String(s) => s.clone(),
        Json::Null => String::new(),
        other => other.to_string(),
    }
}

fn to_csv(v: &Json) -> Result<String> {
    let rows: Vec<&serde_json::Map<String, Json>> = match v {
        Json::Object(m) => vec![m],
        Json::Array(items) => items
            .iter()
            .map(|i| i.as_object().ok_or_else(|| Error::input("csv output needs records")))
            .collect::<Result<_>>()?,
        _ => return Err(Error::input("csv output needs records")),
    };
    let header: Vec<&String> = rows.first().map(|r| r.keys().collect()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::input(format!("csv: {e}"));
    w.write_record(header.iter().map(|h| h.as_str())).map_err(io)?;
    for r in rows {
        w.write_record(header.iter().map(|h| r.get(*h).map(cell).unwrap_or_default())).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(v: &Json, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(v).expect("serializable payload") + "\n"),
        Format::Csv => to_csv(v),
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::input(format!("stdout: {e}")))
        }
    }
}
