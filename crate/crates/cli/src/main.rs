use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use afd_core::manifest::{load_manifest, Command};
use afd_core::report::{emit_report, CheckOutcome, Format, ReportDocument};
use afd_core::run::{run_command, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

/// Exact curvature, field-equation and geodesic checks on algebraic manifests.
#[derive(Debug, Parser)]
#[command(name = "afd", version)]
struct Cli {
    /// One of: check, dim, christoffel, curvature, efe, geodesic, lie, bracket, pullback
    command: String,
    /// Path to a JSON manifest
    manifest: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Checks to run with `check`, replacing the manifest's list
    #[arg(long = "check", value_name = "NAME", num_args = 1..)]
    checks: Vec<String>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("afd: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command: Command = match cli.command.parse() {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    let checks = if cli.checks.is_empty() {
        None
    } else if command != Command::Check {
        return usage_error("--check only applies to the `check` command");
    } else {
        match cli.checks.iter().map(|c| c.parse()).collect::<Result<Vec<Command>, _>>() {
            Ok(cs) => Some(cs),
            Err(e) => return usage_error(&e.to_string()),
        }
    };
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };

    let report = match load_manifest(&cli.manifest) {
        Ok(m) => run_command(&m, command, &RunOptions { checks }),
        Err(e) => {
            eprintln!("afd: {}: {e}", cli.manifest.display());
            ReportDocument {
                command: command.as_str().to_string(),
                inputs: serde_json::Value::Null,
                results: BTreeMap::from([("manifest".to_string(), CheckOutcome::Failed(e))]),
                warnings: Vec::new(),
            }
        }
    };
    let text = emit_report(&report, format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return usage_error(&format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
