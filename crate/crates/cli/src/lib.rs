//! Command-line front end: argument parsing, dispatch and record output.

pub mod args;
pub mod record;
pub mod run;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Format, Request, Task};
pub use record::ExperimentRecord;
pub use run::{run, Failure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "UQL_THREADS";

/// Parses `argv` into a request. `Err` holds the exit code and the text to
/// print: help and version requests exit 0.
pub fn parse_args<I, T>(argv: I) -> Result<Request, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        (code, e.render().to_string())
    })?;
    cli.resolve().map_err(|msg| (EXIT_USAGE, format!("error: {msg}\n")))
}

/// Writes the record to the request's destination.
pub fn emit(record: &ExperimentRecord, format: Format, path: Option<&std::path::Path>, stdout: &mut dyn Write) -> Result<(), String> {
    let text = match format {
        Format::Json => record.to_json().map_err(|e| e.to_string())? + "\n",
        Format::Csv => record.to_csv(),
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn thread_count() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got '{v}'")),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{THREADS_VAR}: {e}")),
    }
}

/// Full CLI behaviour; returns the process exit code.
pub fn execute<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let request = match parse_args(argv) {
        Ok(r) => r,
        Err((code, text)) => {
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let threads = match thread_count() {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    let record = match pool.install(|| run(&request)) {
        Ok(r) => r,
        Err(Failure::Usage(msg) | Failure::Numerical(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    if let Err(msg) = emit(&record, request.format, request.out.as_deref(), stdout) {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    match &record.error {
        Some(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_NUMERICAL
        }
        None => EXIT_OK,
    }
}
