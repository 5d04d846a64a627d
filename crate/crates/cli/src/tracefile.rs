//! Trace file formats.
//!
//! `Text`: UTF-8, one decimal value per line, `#` lines are comments. Output
//! starts with a `# fgn-toolkit v1` header followed by provenance comments.
//! Values are written with 17 significant digits, so they read back exactly.
//!
//! `RawF64`: little-endian IEEE-754 binary64 values, no header.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use fgn_core::Trace;

use crate::error::CliError;

pub const HEADER: &str = "# fgn-toolkit v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum TraceFormat {
    #[default]
    Text,
    #[value(name = "raw")]
    RawF64,
}

/// Writes `values` as text: the header, one `# key=value` comment per
/// metadata entry, then one line per value.
pub fn render_text<I, D>(meta: &[(&str, String)], values: I) -> String
where
    I: IntoIterator<Item = D>,
    D: std::fmt::Display,
{
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for (key, value) in meta {
        let _ = writeln!(out, "# {key}={value}");
    }
    for v in values {
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Text or raw encoding of a real-valued trace.
pub fn encode_trace(trace: &Trace, format: TraceFormat) -> Vec<u8> {
    match format {
        TraceFormat::Text => {
            let p = trace.provenance();
            let mut meta = vec![("n", trace.len().to_string())];
            if let Some(h) = p.h {
                meta.push(("h", h.to_string()));
            }
            if let Some(seed) = p.seed {
                meta.push(("seed", seed.to_string()));
            }
            if let Some(mode) = p.mode {
                meta.push(("mode", mode.to_string()));
            }
            render_text(&meta, trace.values().iter().map(|v| format!("{v:.16e}"))).into_bytes()
        }
        TraceFormat::RawF64 => trace.values().iter().flat_map(|v| v.to_le_bytes()).collect(),
    }
}

pub fn decode_trace(bytes: &[u8], format: TraceFormat) -> Result<Trace, CliError> {
    let values = match format {
        TraceFormat::Text => {
            let text = std::str::from_utf8(bytes)
                .map_err(|e| CliError::Parse(format!("trace is not UTF-8: {e}")))?;
            let mut values = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let v: f64 = line.parse().map_err(|_| {
                    CliError::Parse(format!("line {}: not a number: {line:?}", lineno + 1))
                })?;
                values.push(v);
            }
            values
        }
        TraceFormat::RawF64 => {
            if !bytes.len().is_multiple_of(8) {
                return Err(CliError::Parse(format!(
                    "raw trace size {} is not a multiple of 8",
                    bytes.len()
                )));
            }
            bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect()
        }
    };
    Ok(Trace::new(values)?)
}

pub fn read_trace(path: &Path, format: TraceFormat) -> Result<Trace, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode_trace(&bytes, format)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn write_trace(path: &Path, trace: &Trace, format: TraceFormat) -> Result<(), CliError> {
    write_bytes(path, &encode_trace(trace, format))
}
