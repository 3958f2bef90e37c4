//! Command-line front end: instance files, command dispatch and reports.
//!
//! Exit codes: 0 when the computation completed (whatever the answer),
//! 2 on bad input, 3 when a state or node cap stopped the computation.

mod instance;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use threeway_core::lp::{bounded_system, lp_feasible, transportation_system};
use threeway_core::oracle::{brute_3dm, brute_count, brute_entry_set, brute_exists, ryser_permanent, EnumLimits};
use threeway_core::reductions::{
    embed_bounds, example21_instance, permanent_marginals, reduce_3dm, secure_frechet_gadget, secure_zero_gadget,
    vlach_instance, PermanentInstance,
};
use threeway_core::transfer::{count_tables, entry_value_set, exists_fixed_rc};
use threeway_core::{check_consistency, frechet_upper, EntryIndex};

pub use instance::{parse_instance, parse_matrix, write_instance, InstanceFile};
pub use report::{Answer, Diagnostics, Gadget, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] threeway_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if is_cap(e) => 3,
            _ => 2,
        }
    }
}

fn is_cap(e: &threeway_core::Error) -> bool {
    matches!(e, threeway_core::Error::CapExceeded { .. } | threeway_core::Error::LimitExceeded { .. })
}

#[derive(Debug, Parser)]
#[command(name = "threeway", version, about = "Exact analysis of 3-way tables under 2-marginals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Largest transfer state space to build.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub state_cap: u64,
    /// Largest number of search nodes for the brute-force oracle.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub node_cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the emitted instance (for constructing commands) or the report here.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Vlach,
    Example21,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the 2-marginals agree on their shared 1-marginals.
    Check { input: PathBuf },
    /// Decide whether a table exists (transfer engine).
    Exists { input: PathBuf },
    /// Count the tables exactly (transfer engine).
    Count { input: PathBuf },
    /// All values one entry takes over the tables (transfer engine).
    EntryRange {
        input: PathBuf,
        #[arg(long, value_parser = parse_entry)]
        entry: EntryIndex,
    },
    /// 3-dimensional matching on `upper_bounds` to slim 2-marginals.
    #[command(name = "reduce-3dm")]
    Reduce3dm { input: PathBuf },
    /// 0/1 matrix (JSON rows) to 2-marginals counted by its permanent.
    ReducePermanent { input: PathBuf },
    /// 1-marginals plus upper bounds to slim 2-marginals.
    Embed { input: PathBuf },
    /// Feasibility of 2-marginals to zero-attainability of entry (1,1,1).
    GadgetZero { input: PathBuf },
    /// 3-dimensional matching to attainability of 2n at one entry.
    GadgetFrechet { input: PathBuf },
    /// Emit a worked example instance.
    Gen {
        #[arg(value_enum)]
        which: Example,
        /// Emit the embedded 2-marginal instance instead of the bounds.
        #[arg(long)]
        embed: bool,
    },
    /// Exact feasibility of the real relaxation.
    Lp { input: PathBuf },
    /// Brute-force reference answers.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    Count {
        input: PathBuf,
    },
    Exists {
        input: PathBuf,
    },
    EntryRange {
        input: PathBuf,
        #[arg(long, value_parser = parse_entry)]
        entry: EntryIndex,
    },
    #[command(name = "3dm")]
    Matching {
        input: PathBuf,
    },
    Permanent {
        input: PathBuf,
    },
}

/// Parses `i,j,k` (1-based).
pub fn parse_entry(s: &str) -> Result<EntryIndex, String> {
    let parts: Vec<usize> =
        s.split(',').map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?;
    match parts[..] {
        [i, j, k] if i > 0 && j > 0 && k > 0 => Ok(EntryIndex::new(i, j, k)),
        _ => Err(format!("expected three 1-based indices i,j,k, got {s:?}")),
    }
}

/// A finished command: the report, plus an instance file when one was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    pub emitted: Option<String>,
    pub exit_code: i32,
}

struct Input {
    text: String,
    digest: String,
}

fn read_input(path: &PathBuf) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Input { text, digest })
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Check { .. } => "check".into(),
        Command::Exists { .. } => "exists".into(),
        Command::Count { .. } => "count".into(),
        Command::EntryRange { .. } => "entry-range".into(),
        Command::Reduce3dm { .. } => "reduce-3dm".into(),
        Command::ReducePermanent { .. } => "reduce-permanent".into(),
        Command::Embed { .. } => "embed".into(),
        Command::GadgetZero { .. } => "gadget-zero".into(),
        Command::GadgetFrechet { .. } => "gadget-frechet".into(),
        Command::Gen { which, embed } => {
            let w = if *which == Example::Vlach { "vlach" } else { "example21" };
            format!("gen {w}{}", if *embed { " --embed" } else { "" })
        }
        Command::Lp { .. } => "lp".into(),
        Command::Oracle(o) => match o {
            OracleCommand::Count { .. } => "oracle count".into(),
            OracleCommand::Exists { .. } => "oracle exists".into(),
            OracleCommand::EntryRange { .. } => "oracle entry-range".into(),
            OracleCommand::Matching { .. } => "oracle 3dm".into(),
            OracleCommand::Permanent { .. } => "oracle permanent".into(),
        },
    }
}

fn input_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Check { input }
        | Command::Exists { input }
        | Command::Count { input }
        | Command::EntryRange { input, .. }
        | Command::Reduce3dm { input }
        | Command::ReducePermanent { input }
        | Command::Embed { input }
        | Command::GadgetZero { input }
        | Command::GadgetFrechet { input }
        | Command::Lp { input } => Some(input),
        Command::Gen { .. } => None,
        Command::Oracle(o) => match o {
            OracleCommand::Count { input }
            | OracleCommand::Exists { input }
            | OracleCommand::EntryRange { input, .. }
            | OracleCommand::Matching { input }
            | OracleCommand::Permanent { input } => Some(input),
        },
    }
}

fn emit(instance: InstanceFile, gadget: Option<Gadget>) -> (Answer, Option<String>) {
    let text = write_instance(&instance);
    (Answer::Instance { instance: Box::new(instance), gadget }, Some(text))
}

fn dispatch(cli: &Cli, input: Option<&Input>, diag: &mut Diagnostics) -> Result<(Answer, Option<String>), CliError> {
    let opts = &cli.opts;
    let lim = EnumLimits::new(u64::MAX, opts.node_cap);
    let inst = |name: &str| -> Result<InstanceFile, CliError> {
        let input = input.expect("commands with an input path have input text");
        parse_instance(&input.text).map_err(|e| CliError::Input(format!("{name}: {e}")))
    };
    let text = || input.expect("input text").text.as_str();

    let answer = match &cli.command {
        Command::Check { .. } => {
            let inst = inst("check")?;
            if let Some(m) = &inst.two_marginals {
                let report = check_consistency(m);
                diag.violations = report.violations;
                Answer::Consistency { consistent: report.consistent, total: report.total }
            } else {
                let u = inst.require_one("check")?;
                match u.common_total() {
                    Ok(t) => Answer::Consistency { consistent: true, total: Some(t) },
                    Err(e) => {
                        diag.notes.push(e.to_string());
                        Answer::Consistency { consistent: false, total: None }
                    }
                }
            }
        }
        Command::Exists { .. } => {
            let inst = inst("exists")?;
            let m = inst.require_two("exists")?;
            Answer::Exists { exists: exists_fixed_rc(m, opts.state_cap)? }
        }
        Command::Count { .. } => {
            let inst = inst("count")?;
            let m = inst.require_two("count")?;
            let report = check_consistency(m);
            if !report.consistent {
                diag.violations = report.violations;
            }
            Answer::Count { count: count_tables(m, opts.state_cap)?.to_string() }
        }
        Command::EntryRange { entry, .. } => {
            let inst = inst("entry-range")?;
            let m = inst.require_two("entry-range")?;
            let values = entry_value_set(m, *entry, opts.state_cap)?;
            Answer::ValueSet {
                entry: *entry,
                values: values.into_iter().collect(),
                frechet_upper: frechet_upper(m, *entry)?,
            }
        }
        Command::Reduce3dm { .. } => {
            let inst = inst("reduce-3dm")?;
            let (m, spec) = reduce_3dm(inst.require_bounds("reduce-3dm")?)?;
            return Ok(emit(InstanceFile::embedded(m, spec), None));
        }
        Command::ReducePermanent { .. } => match permanent_marginals(&parse_matrix(text())?)? {
            PermanentInstance::Marginals(m) => return Ok(emit(InstanceFile::from_two_marginals(m), None)),
            PermanentInstance::TriviallyInfeasible { zero_line } => Answer::TriviallyInfeasible {
                reason: format!("{zero_line} of the matrix is zero, so the permanent is 0"),
            },
        },
        Command::Embed { .. } => {
            let inst = inst("embed")?;
            let (m, spec) = embed_bounds(inst.require_one("embed")?, inst.require_bounds("embed")?)?;
            return Ok(emit(InstanceFile::embedded(m, spec), None));
        }
        Command::GadgetZero { .. } => {
            let inst = inst("gadget-zero")?;
            let (m, spec) = secure_zero_gadget(inst.require_two("gadget-zero")?)?;
            return Ok(emit(InstanceFile::from_two_marginals(m), Some(Gadget::A(spec))));
        }
        Command::GadgetFrechet { .. } => {
            let inst = inst("gadget-frechet")?;
            let (m, spec) = secure_frechet_gadget(inst.require_bounds("gadget-frechet")?)?;
            let file = InstanceFile::embedded(m, spec.embedding.clone());
            return Ok(emit(file, Some(Gadget::B(Box::new(spec)))));
        }
        Command::Gen { which, embed } => {
            let (u, p) = match which {
                Example::Vlach => vlach_instance(),
                Example::Example21 => example21_instance(),
            };
            let file = if *embed {
                let (m, spec) = embed_bounds(&u, &p)?;
                InstanceFile::embedded(m, spec)
            } else {
                InstanceFile::from_bounds(u, p)
            };
            return Ok(emit(file, None));
        }
        Command::Lp { .. } => {
            let inst = inst("lp")?;
            let sys = match (&inst.two_marginals, &inst.one_marginals, &inst.upper_bounds) {
                (Some(m), _, _) => transportation_system(m),
                (None, Some(u), Some(p)) => bounded_system(u, p),
                _ => {
                    return Err(CliError::Input("`lp` needs two_marginals, or one_marginals with upper_bounds".into()))
                }
            };
            let res = lp_feasible(&sys);
            diag.notes.push(format!("{} rows, {} variables, {} pivots", sys.rows.len(), sys.num_vars, res.pivots));
            Answer::Lp { verdict: res.verdict, witness: res.witness.as_ref().map(report::witness_strings) }
        }
        Command::Oracle(o) => match o {
            OracleCommand::Count { .. } => {
                let inst = inst("oracle count")?;
                Answer::Count { count: brute_count(inst.require_two("oracle count")?, lim)?.to_string() }
            }
            OracleCommand::Exists { .. } => {
                let inst = inst("oracle exists")?;
                Answer::Exists { exists: brute_exists(inst.require_two("oracle exists")?, lim)? }
            }
            OracleCommand::EntryRange { entry, .. } => {
                let inst = inst("oracle entry-range")?;
                let m = inst.require_two("oracle entry-range")?;
                Answer::ValueSet {
                    entry: *entry,
                    values: brute_entry_set(m, *entry, lim)?.into_iter().collect(),
                    frechet_upper: frechet_upper(m, *entry)?,
                }
            }
            OracleCommand::Matching { .. } => {
                let inst = inst("oracle 3dm")?;
                Answer::Exists { exists: brute_3dm(inst.require_bounds("oracle 3dm")?)? }
            }
            OracleCommand::Permanent { .. } => {
                Answer::Permanent { permanent: ryser_permanent(&parse_matrix(text())?)?.to_string() }
            }
        },
    };
    Ok((answer, None))
}

/// Runs one command. Input errors are returned; cap overruns become an
/// `incomplete` report with exit code 3.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let input = input_path(&cli.command).map(read_input).transpose()?;
    let mut diagnostics = Diagnostics::default();
    let (answer, emitted, exit_code) = match dispatch(cli, input.as_ref(), &mut diagnostics) {
        Ok((answer, emitted)) => (answer, emitted, 0),
        Err(CliError::Core(e)) if is_cap(&e) => (Answer::Incomplete { reason: e.to_string() }, None, 3),
        Err(e) => return Err(e),
    };
    let report = Report {
        command: command_name(&cli.command),
        input_digest: input.map(|i| i.digest),
        answer,
        diagnostics,
        timing_ms: cli.opts.timing.then(|| start.elapsed().as_millis() as u64),
    };
    Ok(Outcome { report, emitted, exit_code })
}

/// Runs a command and writes its output; returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let rendered = match cli.opts.format {
        Format::Json => outcome.report.to_json(),
        Format::Text => outcome.report.to_text(),
    };
    let write = |path: &PathBuf, text: &str| {
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })
    };
    let result = match (&cli.opts.output, &outcome.emitted) {
        (Some(path), Some(instance)) => write(path, instance).map(|()| print!("{rendered}")),
        (Some(path), None) => write(path, &rendered),
        (None, _) => {
            print!("{rendered}");
            Ok(())
        }
    };
    match result {
        Ok(()) => outcome.exit_code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
