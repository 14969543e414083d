use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::args::Format;
use crate::CliError;

/// One command result in every supported rendering.
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Falls back to the table, tab separated, when empty.
    pub plain: String,
}

impl Output {
    pub fn table(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            plain: String::new(),
        }
    }

    pub fn with_plain(mut self, plain: String) -> Self {
        self.plain = plain;
        self
    }

    fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| CliError::numeric(format!("cannot serialize output: {e}")))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::numeric(format!("cannot write csv: {e}"));
                w.write_record(&self.header).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row).map_err(io)?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| CliError::numeric(format!("cannot write csv: {e}")))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
            Format::Plain if !self.plain.is_empty() => Ok(self.plain.clone()),
            Format::Plain => Ok(self
                .rows
                .iter()
                .map(|r| r.join("\t") + "\n")
                .collect()),
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format)?;
        match out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::numeric(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::numeric(format!("cannot write to stdout: {e}")))
            }
        }
    }
}

/// Shortest round-tripping decimal.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}
