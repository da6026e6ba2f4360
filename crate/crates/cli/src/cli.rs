//! Argument parsing and dispatch for the `dpo` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use dpo_core::DEFAULT_ISO_CAP;

use crate::commands::{self, Outcome, Settings, INVALID, OK};
use crate::error::CliError;
use crate::io::write_doc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dpo", version, about = "Double-pushout derivations: replay, move, restrict, check")]
pub struct Cli {
    /// Directory for output documents.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// First seed of randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Start isomorphisms tried before an iso check gives up.
    #[arg(long, global = true, default_value_t = DEFAULT_ISO_CAP, value_name = "N")]
    pub max_iso: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate files or directories of files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Run a script (or replay a dump) and write the derivation dump.
    Derive { script: PathBuf },
    /// Invert a derivation.
    Invert { derivation: PathBuf },
    /// Move the first derivation along the second.
    Move {
        derivation: PathBuf,
        along: PathBuf,
        /// Move backward: the second derivation ends where the first starts.
        #[arg(long)]
        backward: bool,
    },
    /// Accessed part of a derivation, as a handle of its start graph.
    Acc { derivation: PathBuf },
    /// Restrict a derivation to a handle of its start graph.
    Restrict { derivation: PathBuf, handle: PathBuf },
    /// Restriction of a derivation to its accessed part.
    Spine { derivation: PathBuf },
    /// Decide whether two derivations are equal up to isomorphism.
    Iso { first: PathBuf, second: PathBuf },
    /// Property checks.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["theorem", "indep", "dpo", "random"])))]
pub struct CheckArgs {
    /// Spine preservation for two derivations.
    #[arg(long, num_args = 2, value_names = ["D", "D_BAR"])]
    pub theorem: Option<Vec<PathBuf>>,
    /// Independence of two rule sets on the given hosts.
    #[arg(long, num_args = 2, value_names = ["P", "P_BAR"], requires = "host")]
    pub indep: Option<Vec<PathBuf>>,
    /// Every step of every given derivation is a double pushout.
    #[arg(long, num_args = 1.., value_name = "DERIVATION")]
    pub dpo: Option<Vec<PathBuf>>,
    /// The randomized law suite.
    #[arg(long)]
    pub random: bool,
    #[arg(long, value_name = "GRAPH", num_args = 1..)]
    pub host: Vec<PathBuf>,
    /// With --indep: a P_BAR step followed by a P step.
    #[arg(long, requires = "indep")]
    pub sequential: bool,
    /// With --theorem: check the backward variant, D_BAR ends where D starts.
    #[arg(long, requires = "theorem")]
    pub backward: bool,
    /// With --random: number of seeds.
    #[arg(long, default_value_t = 100, requires = "random")]
    pub count: u64,
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let settings = Settings {
        seed: cli.seed,
        max_iso: cli.max_iso,
    };
    match &cli.command {
        Command::Validate { paths } => commands::validate(paths),
        Command::Derive { script } => commands::derive(script),
        Command::Invert { derivation } => commands::invert(derivation),
        Command::Move {
            derivation,
            along,
            backward,
        } => commands::move_cmd(derivation, along, *backward),
        Command::Acc { derivation } => commands::acc(derivation),
        Command::Restrict { derivation, handle } => commands::restrict_cmd(derivation, handle),
        Command::Spine { derivation } => commands::spine_cmd(derivation),
        Command::Iso { first, second } => commands::iso(first, second, &settings),
        Command::Check(c) => {
            if let Some(p) = &c.theorem {
                commands::check_theorem(&p[0], &p[1], c.backward, &settings)
            } else if let Some(p) = &c.indep {
                commands::check_indep(&p[0], &p[1], &c.host, c.sequential)
            } else if let Some(p) = &c.dpo {
                commands::check_dpo(p)
            } else {
                commands::check_random(c.count, &settings)
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.use_stderr() {
                true => INVALID,
                false => OK,
            };
            let rendered = e.render().to_string();
            let _ = match e.use_stderr() {
                true => stderr.write_all(rendered.as_bytes()),
                false => stdout.write_all(rendered.as_bytes()),
            };
            return code;
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return INVALID;
        }
    };
    if let Some(dir) = &cli.out {
        for (name, doc) in &outcome.files {
            if let Err(e) = write_doc(dir, name, doc) {
                let _ = writeln!(stderr, "error: {e}");
                return INVALID;
            }
        }
    }
    let _ = match cli.format {
        Format::Json => stdout.write_all(crate::format::to_json(&outcome.json).as_bytes()),
        Format::Text => stdout.write_all(outcome.text.as_bytes()),
    };
    outcome.code
}
