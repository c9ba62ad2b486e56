use std::fmt::Debug;
use std::io::Write;
use std::path::Path;

use spectral_moments::VERSION_LINE;

use crate::CliError;

pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

/// CSV table preceded by `#` lines carrying the version and full parameter set.
pub struct Report {
    text: String,
}

impl Report {
    pub fn new(command: &str, params: &impl Debug) -> Self {
        let mut text = String::new();
        text.push_str(&format!(
            "# {VERSION_LINE}\n# command: {command}\n# parameters: {params:?}\n"
        ));
        Self { text }
    }

    pub fn comment(&mut self, line: &str) {
        for l in line.lines() {
            self.text.push_str("# ");
            self.text.push_str(l);
            self.text.push('\n');
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let joined: Vec<String> = fields.iter().map(|f| quote(f.as_ref())).collect();
        self.text.push_str(&joined.join(","));
        self.text.push('\n');
    }

    pub fn emit(self, out: Option<&Path>) -> Result<(), CliError> {
        write_output(&self.text, out)
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn write_output(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Computation(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Computation(format!("cannot write to stdout: {e}"))),
    }
}
