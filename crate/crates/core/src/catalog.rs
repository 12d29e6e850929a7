//! Built-in codes and the plain-text code format.
//!
//! ```text
//! # comment
//! 4 2 4-2-2
//! XXXX
//! ZZZZ
//! LX XXII
//! LZ ZIZI
//! LX XIXI
//! LZ ZZII
//! ```
//!
//! The header is `n k name`; generator lines follow; `LX`/`LZ` lines give the
//! logical pairs in order. Whitespace inside Pauli strings is ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::code::{Convention, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{validate_code, PauliOperator};

const BUILTINS: &[(&str, &str)] = &[
    ("15-1-3-canonical", include_str!("../data/15-1-3-canonical.code")),
    ("15-1-3-standard", include_str!("../data/15-1-3-standard.code")),
    ("14-2-2-canonical", include_str!("../data/14-2-2-canonical.code")),
    ("14-2-2-standard", include_str!("../data/14-2-2-standard.code")),
    ("4-2-2", include_str!("../data/4-2-2.code")),
    ("5-1-3", include_str!("../data/5-1-3.code")),
    ("steane-7-1-3", include_str!("../data/steane-7-1-3.code")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(name, _)| *name)
}

/// Raw definition text of a built-in code.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn builtin(name: &str) -> Result<StabilizerCode> {
    let text = builtin_source(name).ok_or_else(|| Error::UnknownCode(name.to_string()))?;
    load(text)
}

/// Built-in name, or else a path to a code file.
pub fn resolve(selector: &str) -> Result<StabilizerCode> {
    if builtin_source(selector).is_some() {
        return builtin(selector);
    }
    let path = Path::new(selector);
    if path.exists() {
        load_path(path)
    } else {
        Err(Error::UnknownCode(selector.to_string()))
    }
}

pub fn load_path(path: &Path) -> Result<StabilizerCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    load(&text)
}

/// Parses and validates a code definition. The convention tag is read off the
/// name (`canonical`, `standard`, otherwise custom).
pub fn load(text: &str) -> Result<StabilizerCode> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut header: Option<(usize, usize, String)> = None;
    let mut generators = Vec::new();
    let mut logical_x = Vec::new();
    let mut logical_z = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((n, _, _)) = &header else {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 {
                return Err(parse_err(line_no, format!("expected header `n k name`, got {line:?}")));
            }
            let n: usize =
                fields[0].parse().map_err(|_| parse_err(line_no, format!("bad qubit count {:?}", fields[0])))?;
            let k: usize =
                fields[1].parse().map_err(|_| parse_err(line_no, format!("bad logical count {:?}", fields[1])))?;
            if k > n || n == 0 {
                return Err(parse_err(line_no, format!("need 0 < n and k <= n, got n={n} k={k}")));
            }
            if n > crate::pauli::MAX_QUBITS {
                return Err(parse_err(line_no, format!("n={n} exceeds {}", crate::pauli::MAX_QUBITS)));
            }
            let name = fields[2..].join(" ");
            header = Some((n, k, if name.is_empty() { "custom".into() } else { name }));
            continue;
        };
        let n = *n;
        let (target, body) = if let Some(rest) = line.strip_prefix("LX") {
            (&mut logical_x, rest)
        } else if let Some(rest) = line.strip_prefix("LZ") {
            (&mut logical_z, rest)
        } else {
            (&mut generators, line)
        };
        let op: PauliOperator = body.parse().map_err(|e: Error| parse_err(line_no, e.to_string()))?;
        if op.num_qubits() != n {
            return Err(parse_err(line_no, format!("expected {n} qubits, found {}", op.num_qubits())));
        }
        target.push(op);
    }

    let (n, k, name) = header.ok_or_else(|| parse_err(0, "empty code definition".into()))?;
    if generators.len() != n - k {
        return Err(parse_err(0, format!("expected {} generators for n={n} k={k}, found {}", n - k, generators.len())));
    }
    if logical_x.len() != k || logical_z.len() != k {
        return Err(parse_err(
            0,
            format!("expected {k} LX and {k} LZ lines, found {} and {}", logical_x.len(), logical_z.len()),
        ));
    }
    let convention = if name.contains("standard") {
        Convention::Standard
    } else if name.contains("canonical") {
        Convention::Canonical
    } else {
        Convention::Custom
    };
    let code = StabilizerCode { name, n, k, generators, logical_x, logical_z, convention };
    let diag = validate_code(&code);
    if !diag.is_valid() {
        return Err(Error::InvalidCode(diag.violations));
    }
    Ok(code)
}

/// Inverse of [`load`].
pub fn serialize(code: &StabilizerCode) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", code.n, code.k, code.name).unwrap();
    for g in &code.generators {
        writeln!(out, "{g}").unwrap();
    }
    for (x, z) in code.logical_x.iter().zip(&code.logical_z) {
        writeln!(out, "LX {x}").unwrap();
        writeln!(out, "LZ {z}").unwrap();
    }
    out
}
