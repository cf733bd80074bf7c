//! The `gadgetcheck` command line.
//!
//! Exit codes: 0 when the requested property holds or the artifact was
//! written, 1 when a property fails, 2 for unreadable or malformed input,
//! 3 when a search budget runs out.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::checkable::{
    check_simply_checkable, infer_broken, post_select, CheckError, CheckSpec, CheckVerdict,
};
use crate::dot::to_dot;
use crate::model::{join_diagnostics, parse_gadget, write_gadget, Gadget, GadgetMachine, Location};
use crate::push1::{format_moves, solve_reachability, Push1Grid, SolveError};
use crate::synthesis::{
    synthesize, verify_equivalence, EquivalenceVerdict, ExploreOptions, Synthesis, SynthesisError,
    WitnessSide, DEFAULT_BUDGET,
};
use crate::systems::{compose, load_system, Composite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// What a command produced. `main` copies this onto the real streams.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: Vec<String>,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        CommandOutcome {
            exit_code: EXIT_OK,
            stdout,
            stderr: Vec::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        CommandOutcome {
            exit_code: code,
            stdout: String::new(),
            stderr: vec![message.into()],
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gadgetcheck",
    version,
    about = "Verify and synthesize motion-planning gadgets"
)]
struct Cli {
    /// Worker threads for exploration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum configurations explored before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Check path as `IN:OUT`.
    #[arg(long, value_name = "IN:OUT")]
    check: String,
    /// State reached by the check path.
    #[arg(long)]
    checked: String,
    /// Comma-separated broken states.
    #[arg(long, value_delimiter = ',', conflicts_with = "infer_broken")]
    broken: Vec<String>,
    /// Take the largest successor-closed set the check path cannot leave.
    #[arg(long)]
    infer_broken: bool,
    /// Let push transitions through the rules.
    #[arg(long)]
    allow_push: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize the minimal gadget of a grid, system or gadget file.
    Synth {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a construction against a gadget file.
    Verify {
        construction: PathBuf,
        gadget: PathBuf,
    },
    /// Compose a system file and synthesize the result.
    Compose {
        system: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Prune a simply checkable gadget.
    Postselect {
        gadget: PathBuf,
        #[command(flatten)]
        spec: CheckArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Report whether a gadget is simply checkable.
    Check {
        gadget: PathBuf,
        #[command(flatten)]
        spec: CheckArgs,
    },
    /// Shortest agent path in a grid, as LURD letters.
    Solve {
        grid: PathBuf,
        #[arg(long, value_name = "X,Y")]
        start: Option<String>,
        #[arg(long, value_name = "X,Y")]
        goal: Option<String>,
    },
    /// Draw a gadget (or the synthesized gadget of a construction) in DOT.
    ExportDot {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Draw trivial transitions too.
        #[arg(long)]
        show_trivial: bool,
    },
}

/// Failure carrying its exit code.
struct Failure(i32, String);

type Step<T> = Result<T, Failure>;

impl From<SynthesisError> for Failure {
    fn from(e: SynthesisError) -> Self {
        match e {
            SynthesisError::BudgetExceeded { .. } => Failure(EXIT_BUDGET, e.to_string()),
            SynthesisError::ThreadPool(_) => Failure(EXIT_INPUT, e.to_string()),
        }
    }
}

struct Input {
    path: PathBuf,
    bytes: Vec<u8>,
}

impl Input {
    fn read(path: &Path) -> Step<Input> {
        std::fs::read(path)
            .map(|bytes| Input {
                path: path.to_owned(),
                bytes,
            })
            .map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
    }

    fn text(&self) -> Step<&str> {
        std::str::from_utf8(&self.bytes)
            .map_err(|_| Failure(EXIT_INPUT, format!("{}: not UTF-8", self.path.display())))
    }

    fn extension(&self) -> Option<&str> {
        self.path.extension().and_then(|e| e.to_str())
    }

    fn bad(&self, message: impl std::fmt::Display) -> Failure {
        Failure(EXIT_INPUT, format!("{}: {message}", self.path.display()))
    }

    /// `gadgetcheck 0.1.0 | input: hall.grid | sha256: ...`
    fn provenance(&self) -> String {
        let name = self
            .path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let digest: String = Sha256::digest(&self.bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        format!(
            "gadgetcheck {} | input: {name} | sha256: {digest}",
            env!("CARGO_PKG_VERSION")
        )
    }

    fn gadget(&self) -> Step<Gadget> {
        let g = parse_gadget(self.text()?).map_err(|e| self.bad(e))?;
        let diags = g.validate();
        if !diags.is_empty() {
            return Err(self.bad(join_diagnostics(&diags)));
        }
        Ok(g)
    }

    fn grid(&self) -> Step<Push1Grid> {
        Push1Grid::parse(self.text()?).map_err(|e| self.bad(e))
    }

    fn construction(&self) -> Step<Loaded> {
        match self.extension() {
            Some("grid") => Ok(Loaded::Grid(self.grid()?)),
            Some("sys") => {
                let system =
                    load_system(&self.path).map_err(|e| Failure(EXIT_INPUT, e.to_string()))?;
                Ok(Loaded::System(Box::new(
                    compose(&system).map_err(|e| self.bad(e))?,
                )))
            }
            _ => {
                let g = self.gadget()?;
                let m = g.machine().map_err(|e| self.bad(e))?;
                Ok(Loaded::Gadget(m))
            }
        }
    }
}

enum Loaded {
    Grid(Push1Grid),
    System(Box<Composite>),
    Gadget(GadgetMachine),
}

impl Loaded {
    fn synthesize(&self, opts: &ExploreOptions) -> Result<Synthesis, SynthesisError> {
        match self {
            Loaded::Grid(c) => synthesize(c, opts),
            Loaded::System(c) => synthesize(c.as_ref(), opts),
            Loaded::Gadget(c) => synthesize(c, opts),
        }
    }

    fn verify(
        &self,
        g: &Gadget,
        opts: &ExploreOptions,
    ) -> Result<EquivalenceVerdict, SynthesisError> {
        match self {
            Loaded::Grid(c) => verify_equivalence(c, g, opts),
            Loaded::System(c) => verify_equivalence(c.as_ref(), g, opts),
            Loaded::Gadget(c) => verify_equivalence(c, g, opts),
        }
    }
}

fn write_out(path: &Path, text: &str) -> Step<()> {
    std::fs::write(path, text).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
}

/// Artifact to a file (summary on stdout) or to stdout (summary on stderr).
fn emit(artifact: String, summary: String, out: Option<&Path>) -> Step<CommandOutcome> {
    match out {
        Some(path) => {
            write_out(path, &artifact)?;
            Ok(CommandOutcome::ok(summary))
        }
        None => Ok(CommandOutcome {
            exit_code: EXIT_OK,
            stdout: artifact,
            stderr: summary.lines().map(str::to_owned).collect(),
        }),
    }
}

fn synth_summary(s: &Synthesis) -> String {
    format!(
        "states: {}\ntransitions: {}\nconfigurations: {}\n",
        s.gadget.states.len(),
        s.gadget.transitions.len(),
        s.configurations
    )
}

fn spec_from(args: &CheckArgs, g: &Gadget) -> Step<CheckSpec> {
    let (i, o) = args
        .check
        .split_once(':')
        .filter(|(i, o)| !i.is_empty() && !o.is_empty())
        .ok_or_else(|| {
            Failure(
                EXIT_INPUT,
                format!("--check expects IN:OUT, got `{}`", args.check),
            )
        })?;
    let mut spec = CheckSpec::new(Location::new(i), Location::new(o), args.checked.clone());
    spec.allow_push = args.allow_push;
    if args.infer_broken {
        let broken = infer_broken(g, &spec);
        spec = spec.with_broken(broken);
    } else {
        spec = spec.with_broken(args.broken.iter().filter(|b| !b.is_empty()).cloned());
    }
    Ok(spec)
}

fn verdict_lines(v: &CheckVerdict) -> Vec<String> {
    v.violations.iter().map(ToString::to_string).collect()
}

fn parse_xy(flag: &str, text: &str) -> Step<(usize, usize)> {
    text.split_once(',')
        .and_then(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)))
        .ok_or_else(|| Failure(EXIT_INPUT, format!("--{flag} expects X,Y, got `{text}`")))
}

fn execute(cli: Cli) -> Step<CommandOutcome> {
    let opts = ExploreOptions {
        budget: cli.budget,
        threads: cli.threads.unwrap_or(0),
    };
    match cli.command {
        Command::Synth { input, out } => {
            let input = Input::read(&input)?;
            let s = input.construction()?.synthesize(&opts)?;
            emit(
                write_gadget(&s.gadget, &[input.provenance()]),
                synth_summary(&s),
                out.as_deref(),
            )
        }
        Command::Verify {
            construction,
            gadget,
        } => {
            let c = Input::read(&construction)?;
            let g = Input::read(&gadget)?;
            let loaded = c.construction()?;
            let spec = g.gadget()?;
            Ok(match loaded.verify(&spec, &opts)? {
                EquivalenceVerdict::Equivalent => CommandOutcome::ok("EQUIVALENT\n".into()),
                EquivalenceVerdict::PortMismatch {
                    construction_only,
                    gadget_only,
                } => {
                    let mut stdout = String::from("PORT MISMATCH\n");
                    for (label, locs) in [
                        ("construction only", construction_only),
                        ("gadget only", gadget_only),
                    ] {
                        if !locs.is_empty() {
                            let names: Vec<&str> = locs.iter().map(Location::as_str).collect();
                            let _ = writeln!(stdout, "{label}: {}", names.join(" "));
                        }
                    }
                    CommandOutcome {
                        exit_code: EXIT_FAILS,
                        stdout,
                        stderr: Vec::new(),
                    }
                }
                EquivalenceVerdict::LanguageMismatch { witness, side } => {
                    let stdout: String = witness.iter().map(|s| format!("{s}\n")).collect();
                    let who = match side {
                        WitnessSide::Construction => "the construction",
                        WitnessSide::Gadget => "the gadget",
                    };
                    CommandOutcome {
                        exit_code: EXIT_FAILS,
                        stdout,
                        stderr: vec![format!("not equivalent: only {who} accepts this sequence")],
                    }
                }
            })
        }
        Command::Compose { system, out } => {
            let input = Input::read(&system)?;
            let system =
                load_system(&input.path).map_err(|e| Failure(EXIT_INPUT, e.to_string()))?;
            let composite = compose(&system).map_err(|e| input.bad(e))?;
            let s = synthesize(&composite, &opts)?;
            emit(
                write_gadget(&s.gadget, &[input.provenance()]),
                synth_summary(&s),
                out.as_deref(),
            )
        }
        Command::Postselect { gadget, spec, out } => {
            let input = Input::read(&gadget)?;
            let g = input.gadget()?;
            let spec = spec_from(&spec, &g)?;
            match post_select(&g, &spec) {
                Ok(p) => {
                    let summary = format!(
                        "states: {}\ntransitions: {}\nbroken: {}\n",
                        p.states.len(),
                        p.transitions.len(),
                        spec.broken.iter().cloned().collect::<Vec<_>>().join(" ")
                    );
                    emit(
                        write_gadget(&p, &[input.provenance()]),
                        summary,
                        out.as_deref(),
                    )
                }
                Err(CheckError::NotCheckable(v)) => Ok(CommandOutcome {
                    exit_code: EXIT_FAILS,
                    stdout: String::new(),
                    stderr: verdict_lines(&v),
                }),
            }
        }
        Command::Check { gadget, spec } => {
            let input = Input::read(&gadget)?;
            let g = input.gadget()?;
            let spec = spec_from(&spec, &g)?;
            let v = check_simply_checkable(&g, &spec);
            let broken: Vec<&str> = spec.broken.iter().map(String::as_str).collect();
            let mut stdout = format!("broken: {}\n", broken.join(" "));
            if v.passes() {
                stdout.push_str("SIMPLY CHECKABLE\n");
                Ok(CommandOutcome::ok(stdout))
            } else {
                stdout.push_str("NOT SIMPLY CHECKABLE\n");
                for line in verdict_lines(&v) {
                    let _ = writeln!(stdout, "{line}");
                }
                Ok(CommandOutcome {
                    exit_code: EXIT_FAILS,
                    stdout,
                    stderr: Vec::new(),
                })
            }
        }
        Command::Solve { grid, start, goal } => {
            let input = Input::read(&grid)?;
            let grid = input.grid()?;
            let start = match start {
                Some(s) => parse_xy("start", &s)?,
                None => grid
                    .agent_start()
                    .ok_or_else(|| input.bad("no `@` in the grid and no --start"))?,
            };
            let goal = match goal {
                Some(s) => parse_xy("goal", &s)?,
                None => grid
                    .goal()
                    .ok_or_else(|| input.bad("no `G` in the grid and no --goal"))?,
            };
            match solve_reachability(&grid, start, goal, opts.budget) {
                Ok(Some(moves)) => Ok(CommandOutcome::ok(format!("{}\n", format_moves(&moves)))),
                Ok(None) => Ok(CommandOutcome {
                    exit_code: EXIT_FAILS,
                    stdout: "UNREACHABLE\n".into(),
                    stderr: Vec::new(),
                }),
                Err(e @ SolveError::Budget { .. }) => Err(Failure(EXIT_BUDGET, e.to_string())),
                Err(e) => Err(input.bad(e)),
            }
        }
        Command::ExportDot {
            input,
            out,
            show_trivial,
        } => {
            let input = Input::read(&input)?;
            let g = match input.extension() {
                Some("grid" | "sys") => input.construction()?.synthesize(&opts)?.gadget,
                _ => input.gadget()?,
            };
            let dot = format!("// {}\n{}", input.provenance(), to_dot(&g, show_trivial));
            let summary = format!("states: {}\n", g.states.len());
            emit(dot, summary, out.as_deref())
        }
    }
}

/// Runs one command line (including the program name) without touching
/// the process's own streams or exit status.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandOutcome::ok(text)
            } else {
                CommandOutcome::fail(code, text.trim_end())
            };
        }
    };
    match execute(cli) {
        Ok(outcome) => outcome,
        Err(Failure(code, message)) => CommandOutcome::fail(code, message),
    }
}
