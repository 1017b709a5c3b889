use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "ctxsim";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// The measured residual or count the check is decided on.
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub command: &'static str,
    pub record: String,
    pub input: Map<String, Value>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl Record {
    pub fn new(
        command: &'static str,
        record: impl Into<String>,
        input: &Map<String, Value>,
    ) -> Self {
        Self {
            command,
            record: record.into(),
            input: input.clone(),
            results: Map::new(),
            checks: Vec::new(),
        }
    }

    /// Non-finite values are kept as `null` and rejected by [`Record::validate`].
    pub fn result(&mut self, key: &str, value: f64) -> &mut Self {
        let v = serde_json::Number::from_f64(value).map_or(Value::Null, Value::Number);
        self.results.insert(key.to_string(), v);
        self
    }

    pub fn integer(&mut self, key: &str, value: i64) -> &mut Self {
        self.results.insert(key.to_string(), Value::from(value));
        self
    }

    /// Passes when `|value| ≤ tolerance`.
    pub fn check(&mut self, name: &str, value: f64, tolerance: f64) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            pass: value.abs() <= tolerance,
            value,
            tolerance,
        });
        self
    }

    pub fn validate(&self) -> CliResult<()> {
        for (k, v) in &self.results {
            if v.is_null() {
                return Err(CliError::Numeric(format!(
                    "{}/{}: result '{k}' is not finite",
                    self.command, self.record
                )));
            }
        }
        for c in &self.checks {
            if !c.value.is_finite() {
                return Err(CliError::Numeric(format!(
                    "{}/{}: check '{}' is not finite",
                    self.command, self.record, c.name
                )));
            }
        }
        Ok(())
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Same shortest round-trip spelling as the JSON output.
fn number_text(x: f64) -> String {
    serde_json::Number::from_f64(x).map_or_else(|| x.to_string(), |n| n.to_string())
}

fn pass_text(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render(records: &[Record], format: Format) -> CliResult<String> {
    for r in records {
        r.validate()?;
    }
    match format {
        Format::Text => Ok(render_text(records)),
        Format::Jsonl => render_jsonl(records),
        Format::Csv => render_csv(records),
    }
}

fn render_text(records: &[Record]) -> String {
    let mut out = format!("{TOOL} {VERSION}\n");
    for r in records {
        let _ = writeln!(out, "\n== {} / {}", r.command, r.record);
        let echo: Vec<String> = r
            .input
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar_text(v)))
            .collect();
        let _ = writeln!(out, "  input   {}", echo.join(" "));
        for (k, v) in &r.results {
            let _ = writeln!(out, "  result  {k:<36} {}", scalar_text(v));
        }
        for c in &r.checks {
            let _ = writeln!(
                out,
                "  check   {:<36} {}  value={} tolerance={}",
                c.name,
                pass_text(c.pass),
                number_text(c.value),
                number_text(c.tolerance)
            );
        }
    }
    out
}

fn json_line<S: Serialize>(value: &S) -> CliResult<String> {
    let mut line = serde_json::to_string(value)
        .map_err(|e| CliError::Numeric(format!("cannot serialize record: {e}")))?;
    line.push('\n');
    Ok(line)
}

fn render_jsonl(records: &[Record]) -> CliResult<String> {
    let header = serde_json::json!({ "tool": TOOL, "version": VERSION, "format": "jsonl" });
    let mut out = json_line(&header)?;
    for r in records {
        out.push_str(&json_line(r)?);
    }
    Ok(out)
}

fn render_csv(records: &[Record]) -> CliResult<String> {
    let fail = |e: csv::Error| CliError::Numeric(format!("cannot write csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "command",
        "record",
        "kind",
        "key",
        "value",
        "tolerance",
        "pass",
    ])
    .map_err(fail)?;
    for r in records {
        for (k, v) in &r.input {
            w.write_record([r.command, &r.record, "input", k, &scalar_text(v), "", ""])
                .map_err(fail)?;
        }
        for (k, v) in &r.results {
            w.write_record([r.command, &r.record, "result", k, &scalar_text(v), "", ""])
                .map_err(fail)?;
        }
        for c in &r.checks {
            w.write_record([
                r.command,
                &r.record,
                "check",
                &c.name,
                &number_text(c.value),
                &number_text(c.tolerance),
                pass_text(c.pass),
            ])
            .map_err(fail)?;
        }
    }
    let body = w
        .into_inner()
        .map_err(|e| CliError::Numeric(format!("cannot write csv: {e}")))?;
    Ok(format!(
        "# {TOOL} {VERSION}\n{}",
        String::from_utf8_lossy(&body)
    ))
}
