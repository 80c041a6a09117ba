//! Command-line front end. Exit status: 0 on success, 1 on a failed check or
//! any runtime error, 2 on a usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::exact::{exact_envelope, soundness_check, EnvelopeOptions, DEFAULT_CAP};
use crate::format::{parse_diagram, serialize_diagram};
use crate::model::{InfluenceDiagram, NodeId};
use crate::render;
use crate::sensitivity::{cost_profile, sweep, SensitivitySpec};
use crate::solver::solve;

#[derive(Parser, Debug)]
#[command(name = "iid", version, about = "Solve interval influence diagrams")]
struct Cli {
    /// Print full-precision JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for envelope and sweep evaluation.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expected-value interval and admissible sets.
    Solve {
        file: PathBuf,
        /// Also print the transformation steps.
        #[arg(long)]
        trace: bool,
    },
    /// Envelope over every vertex combination of the named nodes' rows.
    Exact {
        file: PathBuf,
        #[command(flatten)]
        nodes: Nodes,
        /// Also enumerate the corners of every value interval.
        #[arg(long)]
        include_value_box: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Widen the named nodes over a list of ranges and tabulate the results.
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        nodes: Nodes,
        /// Comma-separated ranges in [0, 1).
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_range)]
        ranges: Vec<f64>,
        /// Sweep every nonempty subset of the nodes instead of the whole set.
        #[arg(long)]
        subsets: bool,
        /// Compare against the exact envelope; timing goes to stderr.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Sample admitted members and verify containment of their optimal
    /// values and choices; fails on any violation.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rewrite a diagram file in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Args, Debug)]
struct Nodes {
    /// Comma-separated chance node names.
    #[arg(long, required = true, value_delimiter = ',')]
    nodes: Vec<String>,
}

fn parse_range(s: &str) -> Result<f64, String> {
    let r: f64 = s.trim().parse().map_err(|_| format!("`{}` is not a number", s))?;
    if (0.0..1.0).contains(&r) {
        Ok(r)
    } else {
        Err(format!("{} is outside [0, 1)", r))
    }
}

enum Failure {
    Error(Error),
    Io(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn load(path: &PathBuf) -> Result<InfluenceDiagram, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {}", path.display(), e)))?;
    parse_diagram(&text).map_err(|e| Failure::Io(format!("{}: {}", path.display(), e)))
}

fn ids(diagram: &InfluenceDiagram, names: &[String]) -> Result<Vec<NodeId>, Failure> {
    Ok(names.iter().map(|n| diagram.id(n)).collect::<crate::Result<_>>()?)
}

fn emit<T: Serialize>(out: &mut dyn Write, json: bool, value: &T, text: impl FnOnce() -> String) -> std::io::Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(value).expect("reports serialize"))
    } else {
        write!(out, "{}", text())
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let jobs = cli.jobs.map(usize::from);
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    match cli.command {
        Command::Solve { file, trace } => {
            let report = solve(&load(&file)?)?;
            emit(out, cli.json, &report, || render::solve_report(&report, trace)).map_err(io)?;
        }
        Command::Exact { file, nodes, include_value_box, cap } => {
            let diagram = load(&file)?;
            let varied = ids(&diagram, &nodes.nodes)?;
            let options = EnvelopeOptions { include_value_box, cap, jobs };
            let report = exact_envelope(&diagram, &varied, &options)?;
            emit(out, cli.json, &report, || render::envelope_report(&report)).map_err(io)?;
        }
        Command::Sweep { file, nodes, ranges, subsets, exact, cap } => {
            let diagram = load(&file)?;
            let names: Vec<&str> = nodes.nodes.iter().map(String::as_str).collect();
            let mut spec = if subsets {
                SensitivitySpec::all_subsets(&names, &ranges)
            } else {
                SensitivitySpec::new(&names, &ranges)
            };
            if exact {
                spec = spec.with_exact(cap);
            }
            spec.jobs = jobs;
            let report = sweep(&diagram, &spec)?;
            emit(out, cli.json, &report, || render::sweep_report(&report)).map_err(io)?;
            if exact {
                let range = ranges.iter().copied().fold(0.0, f64::max);
                let profile = cost_profile(&diagram, &ids(&diagram, &nodes.nodes)?, range, 21)?;
                writeln!(
                    err,
                    "cost at R={}: solve {:.3} ms, point solve {:.3} ms (ratio {:.2}); exact enumeration needs {} configurations",
                    render::sig4(range),
                    profile.solve_seconds * 1e3,
                    profile.point_solve_seconds * 1e3,
                    profile.ratio(),
                    profile.exact_configurations
                )
                .map_err(io)?;
            }
        }
        Command::Check { file, samples, seed } => {
            let report = soundness_check(&load(&file)?, samples, seed)?;
            emit(out, cli.json, &report, || render::soundness_report(&report)).map_err(io)?;
            if !report.passed() {
                return Err(Failure::Violation);
            }
        }
        Command::Fmt { file } => {
            let text = std::fs::read_to_string(&file).map_err(io)?;
            let diagram = parse_diagram(&text).map_err(|e| Failure::Io(format!("{}: {}", file.display(), e)))?;
            let canonical = serialize_diagram(&diagram);
            if canonical == text {
                writeln!(out, "{}: already canonical", file.display()).map_err(io)?;
            } else {
                std::fs::write(&file, canonical).map_err(io)?;
                writeln!(out, "{}: rewritten", file.display()).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first), writing reports to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{}", text);
            } else {
                let _ = write!(err, "{}", text);
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(Failure::Violation) => 1,
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {}", e);
            1
        }
        Err(Failure::Io(m)) => {
            let _ = writeln!(err, "error: {}", m);
            1
        }
    }
}

/// [`run_with`] on the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
