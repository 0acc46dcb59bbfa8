//! Deterministic report emission.
//!
//! Numeric fields serialize with 17 significant digits so re-parsing
//! reproduces bit-identical values; field order is fixed, so identical
//! inputs yield byte-identical reports.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// 17-significant-digit scientific form, round-trippable to the same bits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON value with insertion-ordered object fields.
pub enum Json {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Num(x) => out.push_str(&num(*x)),
            Json::Int(n) => out.push_str(&n.to_string()),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32));
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Object(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\":");
                    value.write(out);
                }
                out.push('}');
            }
        }
    }
}

/// The standard top-level report layout.
pub fn report(model: Json, result: Json, diagnostics: Json) -> String {
    let mut text = Json::Object(vec![
        ("model", model),
        ("result", result),
        ("diagnostics", diagnostics),
    ])
    .render();
    text.push('\n');
    text
}

/// Write the report to `out` (or standard output when absent).
pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}
