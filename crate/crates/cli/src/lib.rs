//! Batch front end: load workspace documents, run the checks of one
//! subcommand, and print a deterministic report.
//!
//! Exit codes: `0` every check passed, `1` some check failed or could not
//! be verified, `2` the input is malformed or an engine precondition failed.

pub mod commands;
pub mod doc;
pub mod load;
pub mod report;
pub mod resolve;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;
use zcat_core::Verdict;

use crate::commands::Options;
use crate::doc::Document;
use crate::report::{Check, Report};
use crate::resolve::Workspace;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}:{line}:{column}: {path}: {message}")]
    Schema { file: String, line: usize, column: usize, path: String, message: String },
    #[error("{0}")]
    Io(String),
    #[error("document `{doc}`: {message}")]
    Resolve { doc: String, message: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "zcat", version, about = "Checks for Z-linearized finite categories, finite sites and sheaves")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Step budget for exhaustive enumerations.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Target {
    /// Workspace files; documents from all files share one namespace.
    #[arg(required = true)]
    pub workspace: Vec<PathBuf>,
    /// Run only the named document.
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate categories, functors, ZMorphisms and partitions.
    Validate(Target),
    /// Compose chains of ZMorphisms.
    ZCompose(Target),
    /// Topology, Nisnevich, distinguished-square and powered checks.
    SiteCheck(Target),
    /// Type Γ, blurry and powered blurry checks.
    BlurCheck(Target),
    /// Sheaf, additivity and squares-probe checks.
    SheafCheck(Target),
    /// Enumerate and precompose parametrizations.
    Parametrize(Target),
    /// Model axioms and quotient models.
    ModelCheck(Target),
    /// Fingerprint invariants and equivalence.
    Fingerprint(Target),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::ZCompose(_) => "z-compose",
            Command::SiteCheck(_) => "site-check",
            Command::BlurCheck(_) => "blur-check",
            Command::SheafCheck(_) => "sheaf-check",
            Command::Parametrize(_) => "parametrize",
            Command::ModelCheck(_) => "model-check",
            Command::Fingerprint(_) => "fingerprint",
        }
    }

    fn target(&self) -> &Target {
        match self {
            Command::Validate(t)
            | Command::ZCompose(t)
            | Command::SiteCheck(t)
            | Command::BlurCheck(t)
            | Command::SheafCheck(t)
            | Command::Parametrize(t)
            | Command::ModelCheck(t)
            | Command::Fingerprint(t) => t,
        }
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn dispatch(cmd: &Command, ws: &Workspace, name: &str, d: &Document, opts: &Options) -> resolve::Res<Option<Check>> {
    use commands as c;
    Ok(match (cmd, d) {
        (Command::Validate(_), d) => return c::validate(ws, name, d),
        (Command::ZCompose(_), Document::ZCompose(x)) => Some(c::z_compose_check(ws, name, x)?),
        (Command::SiteCheck(_), Document::Topology(x)) => Some(c::topology(ws, name, x)?),
        (Command::SiteCheck(_), Document::Nisnevich(x)) => Some(c::nisnevich(ws, name, x)?),
        (Command::SiteCheck(_), Document::Square(x)) => Some(c::square_check(ws, name, x)?),
        (Command::SiteCheck(_), Document::Powered(x)) => Some(c::powered(ws, name, x)?),
        (Command::BlurCheck(_), Document::Gamma(x)) => Some(c::gamma(ws, name, x)?),
        (Command::BlurCheck(_), Document::Blurry(x)) => Some(c::blurry(ws, name, x)?),
        (Command::BlurCheck(_), Document::PoweredBlurry(x)) => Some(c::powered_blurry(ws, name, x)?),
        (Command::SheafCheck(_), Document::Sheaf(x)) => Some(c::sheaf(ws, name, x, opts)?),
        (Command::SheafCheck(_), Document::Additivity(x)) => Some(c::additivity(ws, name, x)?),
        (Command::SheafCheck(_), Document::SquaresProbe(x)) => Some(c::squares_probe(ws, name, x, opts)?),
        (Command::Parametrize(_), Document::Parametrize(x)) => Some(c::parametrize(ws, name, x, opts)?),
        (Command::ModelCheck(_), Document::ModelCheck(x)) => Some(c::model_check(ws, name, x)?),
        (Command::Fingerprint(_), Document::Equivalence(x)) => Some(c::equivalence(ws, name, x)?),
        _ => None,
    })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let target = cli.command.target();
    let ws = Workspace::new(load::load(&target.workspace)?);
    let opts = Options { budget: cli.budget };
    if let Some(only) = &target.only {
        if !ws.entries.contains_key(only) {
            return Err(CliError::Resolve { doc: only.clone(), message: "no document with this name".into() });
        }
    }
    let mut checks = Vec::new();
    for (name, entry) in &ws.entries {
        if target.only.as_ref().is_some_and(|o| o != name) {
            continue;
        }
        if let Some(c) = dispatch(&cli.command, &ws, name, &entry.doc, &opts)? {
            checks.push(c);
        }
    }
    if let Some(only) = &target.only {
        if checks.is_empty() {
            return Err(CliError::Resolve {
                doc: only.clone(),
                message: format!("`{}` has nothing to check in this document", cli.command.name()),
            });
        }
    }
    Ok(Report::new(cli.command.name(), checks))
}

/// Parse `args` (including the program name) and run the command.
pub fn run_command<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match run(&cli) {
        Ok(report) => Outcome {
            code: if report.verdict == Verdict::Pass { 0 } else { 1 },
            stdout: match cli.format {
                Format::Json => report.json(),
                Format::Text => report.text(),
            },
            stderr: String::new(),
        },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
