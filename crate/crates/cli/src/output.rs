use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

use crate::args::Format;
use crate::CliError;

/// A command result in every form it can be printed in.
pub struct Report {
    pub csv: String,
    pub json: Value,
    /// Bare text form, for commands that have one.
    pub text: Option<String>,
}

impl Report {
    pub fn new(csv: String, json: Value) -> Self {
        Report {
            csv,
            json,
            text: None,
        }
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }
}

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn quote(arg: &str) -> String {
    let plain = !arg.is_empty()
        && arg
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_=.,:/+@%".contains(c));
    if plain {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', "'\\''"))
    }
}

/// The command line as a shell would need it to rerun.
pub fn invocation(argv: &[String]) -> String {
    argv.iter().map(|a| quote(a)).collect::<Vec<_>>().join(" ")
}

pub struct Sink {
    pub out: Option<PathBuf>,
    pub invocation: String,
}

impl Sink {
    fn provenance_line(&self) -> String {
        format!("# aperiodic {}: {}\n", version(), self.invocation)
    }

    fn write(&self, body: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => {
                fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(body.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }

    pub fn emit(&self, report: Report, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write(&(self.provenance_line() + &report.csv)),
            Format::Json => {
                let provenance = json!({ "invocation": self.invocation, "version": version() });
                let value = match report.json {
                    Value::Object(mut map) => {
                        map.insert("provenance".into(), provenance);
                        Value::Object(map)
                    }
                    other => json!({ "provenance": provenance, "result": other }),
                };
                let mut body = serde_json::to_string_pretty(&value)
                    .map_err(|e| CliError::Io(e.to_string()))?;
                body.push('\n');
                self.write(&body)
            }
            Format::Text => {
                let text = report.text.ok_or_else(|| {
                    CliError::Usage("this command has no text output; use csv or json".into())
                })?;
                eprint!("{}", self.provenance_line());
                self.write(&text)
            }
        }
    }
}
