//! Result rendering and exit codes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 2.
    Usage(String),
    /// Logical failure: exit 1.
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<cobit::Error> for CliError {
    fn from(e: cobit::Error) -> Self {
        use cobit::Error as E;
        match e {
            E::InvalidArgument(_) | E::Parse { .. } | E::UnknownRule(_) | E::NotSimulable(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// What a subcommand produced: machine JSON, a human rendering, an exit code.
#[derive(Debug)]
pub struct Report {
    pub json: serde_json::Value,
    pub pretty: String,
    pub code: u8,
}

impl Report {
    pub fn new(value: &impl Serialize, pretty: String, code: u8) -> Self {
        Report {
            json: serde_json::to_value(value).expect("reports serialise"),
            pretty,
            code,
        }
    }

    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            let mut s = self.pretty.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        } else {
            let mut s = serde_json::to_string(&self.json).expect("json values serialise");
            s.push('\n');
            s
        }
    }
}

pub fn write_out(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Failure(e.to_string()))
        }
    }
}

/// Wraps `text` in an ANSI colour unless `NO_COLOR` is set.
pub fn paint(text: &str, ok: bool) -> String {
    if std::env::var_os("NO_COLOR").is_some() {
        return text.to_string();
    }
    let code = if ok { 32 } else { 31 };
    format!("\x1b[{code}m{text}\x1b[0m")
}
