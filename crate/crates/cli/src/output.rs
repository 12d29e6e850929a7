use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value;

use crate::args::{OutputArgs, OUTPUT_DIR_ENV};
use crate::CliError;

/// Tool version and the exact argument list of this run.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub args: Vec<String>,
}

impl Provenance {
    pub fn new(args: &[String]) -> Self {
        Self { tool: "msd", version: env!("CARGO_PKG_VERSION"), args: args.iter().skip(1).cloned().collect() }
    }

    fn comment(&self) -> String {
        format!("# {} {} {}", self.tool, self.version, self.args.join(" "))
    }
}

/// CSV text: provenance comment, header, rows, then optional trailing comments.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(prov: &Provenance, header: &[&str]) -> Self {
        Self { text: format!("{}\n{}\n", prov.comment(), header.join(",")) }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn comment(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Shortest round-trip text; scientific outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Pretty JSON with a `provenance` field added to the top-level object.
pub fn json<T: Serialize>(prov: &Provenance, body: &T) -> Result<String, CliError> {
    let mut value = serde_json::to_value(body).map_err(|e| CliError::Numeric(e.to_string()))?;
    let prov = serde_json::to_value(prov).expect("provenance serializes");
    match &mut value {
        Value::Object(map) => {
            map.insert("provenance".into(), prov);
        }
        other => {
            value = serde_json::json!({ "provenance": prov, "data": other.take() });
        }
    }
    let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
    s.push('\n');
    Ok(s)
}

pub fn resolve_path(out: &OutputArgs) -> Option<PathBuf> {
    let path = out.output.clone()?;
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Some(PathBuf::from(dir).join(path)),
        _ => Some(path),
    }
}

pub fn emit(out: &OutputArgs, text: &str) -> Result<(), CliError> {
    match resolve_path(out) {
        Some(path) => write_file(&path, text),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

pub fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
