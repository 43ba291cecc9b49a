//! Report documents. JSON output is canonical: keys sorted, integers and
//! strings only, no timing unless asked for.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::commands::{CommandError, Options, Outcome};
use crate::instance::{Instance, InstanceError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `sha256:` digest of the normalized instance text.
pub fn digest(inst: &Instance) -> String {
    format!("sha256:{:x}", Sha256::digest(inst.to_string().as_bytes()))
}

pub fn success(cmd: &str, inst: &Instance, opts: &Options, out: Outcome) -> Value {
    json!({
        "command": cmd,
        "instance_digest": digest(inst),
        "ring": inst.ring.to_string(),
        "depth": opts.depth,
        "version": VERSION,
        "inputs": out.inputs,
        "verdicts": out.verdicts,
        "certificates": out.certificates,
        "status": if out.pass { "pass" } else { "inconsistent" },
    })
}

pub fn command_error(cmd: &str, inst: Option<&Instance>, e: &CommandError) -> Value {
    json!({
        "command": cmd,
        "instance_digest": inst.map(digest),
        "version": VERSION,
        "status": "error",
        "error": { "kind": e.kind(), "message": e.to_string() },
    })
}

pub fn parse_error(cmd: &str, e: &InstanceError) -> Value {
    json!({
        "command": cmd,
        "version": VERSION,
        "status": "error",
        "error": { "kind": "syntax", "message": e.message, "line": e.line, "column": e.column },
    })
}

pub fn io_error(cmd: &str, message: String) -> Value {
    json!({
        "command": cmd,
        "version": VERSION,
        "status": "error",
        "error": { "kind": "io", "message": message },
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("values serialize");
    s.push('\n');
    s
}

/// Indented `key: value` lines; certificates are left out.
pub fn to_text(report: &Value) -> String {
    let mut out = String::new();
    for key in ["command", "status", "ring", "instance_digest", "depth", "inputs", "verdicts", "error"] {
        if let Some(v) = report.get(key) {
            walk(&mut out, key, v, 0);
        }
    }
    out
}

fn walk(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in map {
                walk(out, k, x, indent + 1);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in items.iter().enumerate() {
                walk(out, &format!("[{i}]"), x, indent + 1);
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        Value::Null => {}
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}
