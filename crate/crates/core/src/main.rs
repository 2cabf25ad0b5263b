use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use catext_core::cli::{parse_coefficient, run, Command, ExitStatus, Format, JobSpec};
use catext_core::diagrams::Coefficient;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Limits,
    Bw,
    HochschildMitchell,
    Ext,
    Specseq,
    Verify,
    RandomSuite,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Limits => Command::Limits,
            Cmd::Bw => Command::Bw,
            Cmd::HochschildMitchell => Command::HochschildMitchell,
            Cmd::Ext => Command::Ext,
            Cmd::Specseq => Command::Specseq,
            Cmd::Verify => Command::Verify,
            Cmd::RandomSuite => Command::RandomSuite,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

/// Cohomology of finite categories and Ext between diagrams of modules.
///
/// Exit status: 0 on success, 1 on a verification mismatch, 2 on an input error.
/// CATEXT_SIZE_GUARD overrides the 64-morphism bound on constructions.
#[derive(Debug, Parser)]
#[command(name = "catext", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Category file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Diagram file for F (JSON).
    #[arg(long = "diagram-f")]
    diagram_f: Option<PathBuf>,
    /// Diagram file for G (JSON); defaults to F where a second diagram is needed.
    #[arg(long = "diagram-g")]
    diagram_g: Option<PathBuf>,
    /// Coefficients: `p,m` for F_p[x]/(x^m), or `Z`. Must agree with the diagram files.
    #[arg(long, value_parser = coeff)]
    coeff: Option<Coefficient>,
    /// Truncation degree N.
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

fn coeff(s: &str) -> Result<Coefficient, String> {
    parse_coefficient(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ExitStatus::InputError.code() as u8 } else { 0 });
        }
    };
    let spec = JobSpec {
        command: args.command.into(),
        input: args.input,
        diagram_f: args.diagram_f,
        diagram_g: args.diagram_g,
        degree: args.degree,
        coeff: args.coeff,
        seed: args.seed,
        out: args.out.clone(),
        format: match args.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Table => Format::Table,
        },
    };
    let outcome = run(&spec);
    if args.out.is_none() || outcome.status == ExitStatus::InputError {
        let _ = std::io::stdout().write_all(outcome.report.as_bytes());
    }
    if let Some(error) = outcome.value.get("error").and_then(|e| e.as_str()) {
        eprintln!("catext: {error}");
    }
    if let Some(messages) = outcome.value.get("messages").and_then(|m| m.as_array()) {
        for m in messages.iter().filter_map(|m| m.as_str()) {
            eprintln!("catext: {m}");
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
