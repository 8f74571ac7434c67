use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
    Internal(String),
}

impl CliError {
    pub const USAGE: u8 = 1;
    pub const DATA: u8 = 2;
    pub const INTERNAL: u8 = 3;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => Self::USAGE,
            CliError::Data(_) => Self::DATA,
            CliError::Internal(_) => Self::INTERNAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(e) => write!(f, "{e:#}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<gectag_core::Error> for CliError {
    fn from(e: gectag_core::Error) -> Self {
        CliError::Data(e.into())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Data(anyhow::anyhow!("{}: {e}", path.display()))
}

/// Inputs must exist before any work starts.
pub fn require_files<'a>(paths: impl IntoIterator<Item = &'a PathBuf>) -> CliResult<()> {
    for p in paths {
        if !p.is_file() {
            return Err(CliError::Usage(format!("no such file: {}", p.display())));
        }
    }
    Ok(())
}

/// Command output: a file, or stdout.
pub fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// The versioned JSON report every command emits.
pub struct Report {
    fields: Map<String, Value>,
    warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        let mut fields = Map::new();
        fields.insert("schema".into(), json!(1));
        fields.insert("command".into(), json!(command));
        fields.insert("seed".into(), json!(seed));
        Report {
            fields,
            warnings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl serde::Serialize) {
        self.fields
            .insert(key.into(), serde_json::to_value(value).expect("report values serialise"));
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    /// Destination: `--report` if given, else stdout, else stderr when the
    /// command output already took stdout.
    pub fn emit(mut self, path: Option<&Path>, output_on_stdout: bool) -> CliResult<()> {
        self.fields.insert("warning_count".into(), json!(self.warnings.len()));
        self.fields.insert("warnings".into(), json!(self.warnings));
        let text = serde_json::to_string_pretty(&Value::Object(self.fields)).expect("report serialises");
        match path {
            Some(p) => std::fs::write(p, text + "\n").map_err(|e| io_error(p, e)),
            None if output_on_stdout => write_ignoring_closed_pipe(io::stderr().lock(), &text),
            None => write_ignoring_closed_pipe(io::stdout().lock(), &text),
        }
    }
}

fn write_ignoring_closed_pipe(mut w: impl Write, text: &str) -> CliResult<()> {
    match writeln!(w, "{text}").and_then(|_| w.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(io_error(Path::new("<report>"), e)),
        _ => Ok(()),
    }
}
