//! Instance files: a flat key table, one declaration per line.
//!
//! ```text
//! # comments start with '#'
//! ring = "Z"
//! module M = [[2, 0], [0, 12]]
//! ideal I = ["4", "6"]
//! system x = ["2"]
//! ```
//!
//! Module rows are generators and columns are relations. Entries are
//! element literals, quoted or (for integers) bare. Rings are `Z`, `Q[t]`
//! and `F_p[t]` for a prime `p`.

use std::fmt;

use adic_core::cech::ElementSystem;
use adic_core::fpmod::{FPModule, Ideal};
use adic_core::{parse_element, ExactMatrix, Ring, RingElement};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct InstanceError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub ring: Ring,
    pub modules: Vec<(String, FPModule)>,
    pub ideals: Vec<(String, Ideal)>,
    pub systems: Vec<(String, ElementSystem)>,
}

pub fn parse_ring(spec: &str) -> Result<Ring, String> {
    let spec = spec.trim();
    match spec {
        "Z" => return Ok(Ring::Integers),
        "Q[t]" => return Ok(Ring::PolyOverRationals),
        _ => {}
    }
    let p = spec
        .strip_prefix("F_")
        .and_then(|s| s.strip_suffix("[t]"))
        .ok_or_else(|| format!("unknown ring kind {spec:?} (expected Z, Q[t] or F_p[t])"))?;
    let p: u32 = p.parse().map_err(|_| format!("bad characteristic {p:?} in {spec:?}"))?;
    Ring::poly_over_prime_field(p).map_err(|e| e.to_string())
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '\'')
}

/// One declaration line being parsed; columns are 1-based character counts.
struct Line<'a> {
    number: usize,
    text: &'a str,
    rhs: &'a str,
    rhs_start: usize,
    /// Byte position in `rhs` where the next literal search starts.
    cursor: usize,
}

impl Line<'_> {
    fn column_of(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }

    fn error(&self, byte: usize, message: impl Into<String>) -> InstanceError {
        InstanceError { line: self.number, column: self.column_of(byte), message: message.into() }
    }

    fn value(&self) -> Result<Value, InstanceError> {
        serde_json::from_str(self.rhs).map_err(|e| {
            let offset = if e.line() == 1 { e.column().saturating_sub(1) } else { 0 };
            let byte = self.rhs_start + self.rhs.char_indices().nth(offset).map_or(self.rhs.len(), |(b, _)| b);
            let message = e.to_string();
            let message = message.split(" at line").next().unwrap_or(&message).to_string();
            self.error(byte, message)
        })
    }

    /// Parses one literal, locating it in the source for error columns.
    fn element(&mut self, ring: Ring, v: &Value) -> Result<RingElement, InstanceError> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(self.error(self.rhs_start + self.cursor, "expected an element literal")),
        };
        let start = self.cursor;
        let found = self.rhs[start..].find(&text).map(|i| start + i);
        if let Some(i) = found {
            self.cursor = i + text.len();
        }
        parse_element(ring, &text).map_err(|e| {
            let byte = self.rhs_start + found.map_or(start, |i| i + e.offset);
            self.error(byte, format!("{} in literal {text:?} over {ring}", e.message))
        })
    }

    fn elements(&mut self, ring: Ring, v: &Value) -> Result<Vec<RingElement>, InstanceError> {
        let Value::Array(items) = v else {
            return Err(self.error(self.rhs_start, "expected a list of elements"));
        };
        items.iter().map(|x| self.element(ring, x)).collect()
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut ring: Option<Ring> = None;
    let mut inst = Instance { ring: Ring::Integers, modules: Vec::new(), ideals: Vec::new(), systems: Vec::new() };
    let mut names: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lead = raw.len() - trimmed.len();
        let Some(eq) = raw.find('=') else {
            let line = Line { number, text: raw, rhs: "", rhs_start: raw.len(), cursor: 0 };
            return Err(line.error(lead, "expected a declaration of the form `<kind> <name> = <value>`"));
        };
        let rhs_start = eq + 1 + (raw[eq + 1..].len() - raw[eq + 1..].trim_start().len());
        let mut line = Line { number, text: raw, rhs: raw[rhs_start..].trim_end(), rhs_start, cursor: 0 };
        let head: Vec<&str> = raw[..eq].split_whitespace().collect();
        let value = line.value()?;

        if head == ["ring"] {
            if ring.is_some() {
                return Err(line.error(lead, "ring declared twice"));
            }
            let Value::String(spec) = &value else {
                return Err(line.error(rhs_start, "ring must be a quoted string"));
            };
            let r = parse_ring(spec).map_err(|m| line.error(rhs_start, m))?;
            ring = Some(r);
            inst.ring = r;
            continue;
        }
        let [kind, name] = head[..] else {
            return Err(line.error(lead, "expected `ring`, `module <name>`, `ideal <name>` or `system <name>`"));
        };
        let name_at = lead + raw[lead..].find(name).unwrap_or(0);
        if !is_name(name) {
            return Err(line.error(name_at, format!("invalid name {name:?}")));
        }
        if !matches!(kind, "module" | "ideal" | "system") {
            return Err(line.error(lead, format!("unknown declaration kind {kind:?}")));
        }
        if names.iter().any(|n| n == name) {
            return Err(line.error(name_at, format!("duplicate name {name:?}")));
        }
        let Some(r) = ring else {
            return Err(line.error(lead, "the ring must be declared before any entity"));
        };
        match kind {
            "module" => {
                let Value::Array(rows) = &value else {
                    return Err(line.error(rhs_start, "a module is a list of rows"));
                };
                let mut entries = Vec::new();
                for row in rows {
                    entries.push(line.elements(r, row)?);
                }
                let cols = entries.first().map_or(0, Vec::len);
                if entries.iter().any(|row| row.len() != cols) {
                    return Err(line.error(rhs_start, "module rows must all have the same length"));
                }
                let a = ExactMatrix::from_rows(r, entries, cols).map_err(|e| line.error(rhs_start, e.to_string()))?;
                inst.modules.push((name.to_string(), FPModule::new(a)));
            }
            "ideal" => {
                let gens = line.elements(r, &value)?;
                let ideal = Ideal::new(r, gens).map_err(|e| line.error(rhs_start, e.to_string()))?;
                inst.ideals.push((name.to_string(), ideal));
            }
            _ => {
                let xs = line.elements(r, &value)?;
                let sys = ElementSystem::new(r, xs).map_err(|e| line.error(rhs_start, e.to_string()))?;
                inst.systems.push((name.to_string(), sys));
            }
        }
        names.push(name.to_string());
    }
    if ring.is_none() {
        return Err(InstanceError { line: text.lines().count().max(1), column: 1, message: "no ring declared".into() });
    }
    Ok(inst)
}

fn quoted(xs: &[RingElement]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("\"{x}\"")).collect();
    format!("[{}]", items.join(", "))
}

/// The normalized form: quoted canonical literals in declaration order.
impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring = \"{}\"", self.ring)?;
        for (name, m) in &self.modules {
            let a = m.presentation();
            let rows: Vec<String> = (0..a.rows()).map(|i| quoted(a.row(i))).collect();
            writeln!(f, "module {name} = [{}]", rows.join(", "))?;
        }
        for (name, ideal) in &self.ideals {
            writeln!(f, "ideal {name} = {}", quoted(ideal.generators()))?;
        }
        for (name, sys) in &self.systems {
            writeln!(f, "system {name} = {}", quoted(sys.elements()))?;
        }
        Ok(())
    }
}
