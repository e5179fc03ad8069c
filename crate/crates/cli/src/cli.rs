//! Argument parsing and output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use jetnorm_core::normalform::Scheduler;
use jetnorm_core::scalar::{self, Scalar};
use num_traits::Signed;
use serde_json::json;

use crate::corpus::{self, Overrides};
use crate::error::CliError;
use crate::problem::{parse_levi_factor, parse_problem_with_order};
use crate::report::Report;
use crate::run::{apply_overrides, run, Command, EXIT_INPUT_ERROR, EXIT_OBSTRUCTION, EXIT_SUCCESS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn parse_scheduler(s: &str) -> Result<Scheduler, String> {
    s.parse()
}

fn parse_radius(s: &str) -> Result<Scalar, String> {
    match scalar::parse(s) {
        Some(r) if r.is_positive() => Ok(r),
        Some(_) => Err("radius must be positive".into()),
        None => Err(format!("`{s}` is not a rational of the form p or p/q")),
    }
}

#[derive(Parser, Debug)]
#[command(name = "jetnorm", version, about = "Exact formal normal forms of Poisson brackets, Lie algebra actions and Lie algebroids")]
struct Args {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Degree grouping of the iteration: degree or doubling.
    #[arg(long, global = true, value_parser = parse_scheduler)]
    scheduler: Option<Scheduler>,
    /// Truncation order N, replacing the one in the problem file.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: Option<u32>,
    /// Radius of the weighted norm used in the trace, as p or p/q.
    #[arg(long, global = true, value_parser = parse_radius)]
    radius: Option<Scalar>,
    /// TOML file with `s` and `r` rows giving the Levi factor and its complement.
    #[arg(long, global = true, value_name = "FILE")]
    levi_factor: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate the input invariants.
    Check { file: PathBuf },
    /// Classify the isotropy algebra.
    Analyze { file: PathBuf },
    /// Linearize a bracket, an action or an algebroid.
    Linearize { file: PathBuf },
    /// Normalize relative to a Levi factor.
    Levi { file: PathBuf },
    /// Normalize an algebroid.
    Algebroid { file: PathBuf },
    /// Dimension of a cohomology group of the isotropy algebra.
    Cohomology {
        file: PathBuf,
        /// Cochain degree r.
        #[arg(long)]
        degree: usize,
        /// Polynomial degree d of the module.
        #[arg(long)]
        module_degree: u32,
    },
    /// The bundled examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    /// List entry names and descriptions.
    List,
    /// Run one entry, or all of them with --all.
    Run {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn error_json(e: &CliError) -> serde_json::Value {
    let mut v = json!({ "code": e.code(), "message": e.to_string() });
    if let CliError::Parse { line, column, .. } = e {
        v["line"] = json!(line);
        v["column"] = json!(column);
    }
    v
}

fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => r.to_json() + "\n",
        Format::Text => r.to_text(),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("standard output: {e}"))),
    }
}

fn overrides(args: &Args) -> Result<Overrides, CliError> {
    let levi = match &args.levi_factor {
        Some(p) => Some(parse_levi_factor(&read(p)?)?),
        None => None,
    };
    Ok(Overrides {
        scheduler: args.scheduler,
        max_degree: args.max_degree,
        radius: args.radius.clone(),
        levi,
    })
}

fn run_file(command: Command, file: &Path, o: &Overrides) -> Result<Report, CliError> {
    let mut spec = parse_problem_with_order(&read(file)?, o.max_degree)?;
    apply_overrides(&mut spec, o.scheduler, o.radius.clone(), o.levi.clone());
    run(command, &spec)
}

fn execute(args: &Args, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let o = overrides(args)?;
    let out = args.out.as_deref();
    let (command, file) = match &args.command {
        Cmd::Check { file } => (Command::Check, file),
        Cmd::Analyze { file } => (Command::Analyze, file),
        Cmd::Linearize { file } => (Command::Linearize, file),
        Cmd::Levi { file } => (Command::Levi, file),
        Cmd::Algebroid { file } => (Command::Algebroid, file),
        Cmd::Cohomology {
            file,
            degree,
            module_degree,
        } => (
            Command::Cohomology {
                degree: *degree,
                module_degree: *module_degree,
            },
            file,
        ),
        Cmd::Corpus { action: CorpusCmd::List } => {
            let text = match args.format {
                Format::Json => {
                    let list: Vec<_> = corpus::entries()
                        .iter()
                        .map(|e| {
                            let spec = e.spec(None).ok();
                            json!({
                                "name": e.name,
                                "command": e.command.name(),
                                "kind": spec.as_ref().map(|s| s.kind.to_string()),
                                "description": spec.and_then(|s| s.description),
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&list).expect("list serializes") + "\n"
                }
                Format::Text => corpus::entries()
                    .iter()
                    .map(|e| format!("{:<28} {}\n", e.name, e.command.name()))
                    .collect(),
            };
            emit(&text, out, stdout)?;
            return Ok(EXIT_SUCCESS);
        }
        Cmd::Corpus {
            action: CorpusCmd::Run { name: Some(name), .. },
        } => {
            let entry = corpus::find(name).ok_or_else(|| CliError::Input(format!("no corpus entry named `{name}`")))?;
            let report = entry.run(&o)?;
            emit(&render_report(&report, args.format), out, stdout)?;
            return Ok(report.exit_code);
        }
        Cmd::Corpus {
            action: CorpusCmd::Run { name: None, .. },
        } => {
            let results = corpus::run_all(&o);
            let code = if results.iter().any(|(_, r)| r.is_err()) {
                EXIT_INPUT_ERROR
            } else if results.iter().any(|(_, r)| matches!(r, Ok(rep) if rep.exit_code == EXIT_OBSTRUCTION)) {
                EXIT_OBSTRUCTION
            } else {
                EXIT_SUCCESS
            };
            let text = match args.format {
                Format::Json => {
                    let list: Vec<_> = results
                        .iter()
                        .map(|(name, r)| match r {
                            Ok(rep) => json!({ "name": name, "report": rep }),
                            Err(e) => json!({ "name": name, "error": error_json(e) }),
                        })
                        .collect();
                    serde_json::to_string_pretty(&list).expect("reports serialize") + "\n"
                }
                Format::Text => results
                    .iter()
                    .map(|(name, r)| match r {
                        Ok(rep) => format!("== {name}\n{}", rep.to_text()),
                        Err(e) => format!("== {name}\nerror[{}]: {e}\n", e.code()),
                    })
                    .collect(),
            };
            emit(&text, out, stdout)?;
            return Ok(code);
        }
    };
    let report = run_file(command, file, &o)?;
    emit(&render_report(&report, args.format), out, stdout)?;
    Ok(report.exit_code)
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 on success, 2 for an obstruction, 1 on input errors.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_SUCCESS };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&args, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            if args.format == Format::Json {
                let v = json!({ "error": error_json(&e), "exit_code": EXIT_INPUT_ERROR });
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("serializes"));
            }
            e.exit_code()
        }
    }
}
