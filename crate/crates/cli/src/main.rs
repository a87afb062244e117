//! `cobit`: run protocols, prove resource inequalities and bound gate
//! capacities from the command line.

mod capacity;
mod config;
mod output;
mod protocol;
mod prove;
mod rsp;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{FileConfig, Tolerances};
use output::{write_out, CliError, CliResult, Report, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "cobit", version, about = "Coherent classical communication laboratory")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Master RNG seed [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of stdout (`-` is stdout)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    pretty: bool,
    /// `key = value` file with seed, pretty, output and tol.<name> entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a tolerance, e.g. `--tol fidelity=1e-8`
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a named protocol
    #[command(subcommand)]
    Protocol(ProtocolCmd),
    /// Coherent remote state preparation
    #[command(subcommand)]
    Rsp(RspCmd),
    /// Decide `LHS >= RHS` or `LHS == RHS` over the rule database
    Prove {
        lhs: String,
        #[arg(value_parser = [">=", "=="])]
        relation: String,
        rhs: String,
        /// Allow catalysis with this budget, e.g. "ebit"
        #[arg(long, num_args = 0..=1, default_missing_value = "ebit")]
        cat: Option<String>,
        /// Allow asymptotic rules
        #[arg(long)]
        asy: bool,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Numerical bound on the entanglement-assisted classical capacity of a gate
    Capacity {
        /// cnot, swap, cz, identity or a JSON file
        #[arg(long)]
        gate: String,
        #[arg(long, default_value_t = 0.0)]
        e: f64,
        /// Ensemble size
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Comma-separated e values for a concavity scan
        #[arg(long)]
        grid: Option<String>,
        /// Report Q_e instead
        #[arg(long)]
        quantum: bool,
    },
    /// Fast checks of the core relations
    Selftest,
}

#[derive(Subcommand, Debug)]
enum ProtocolCmd {
    Run {
        name: String,
        /// basis, haar or a bit string
        #[arg(long, default_value = "haar")]
        input: String,
        /// Schmidt weight for concentration
        #[arg(long, default_value_t = 0.7)]
        p: f64,
        /// Number of pairs for concentration
        #[arg(long, default_value_t = 4)]
        copies: usize,
    },
    List,
}

#[derive(Args, Debug)]
struct RspOpts {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: Option<usize>,
    /// pauli or haar
    #[arg(long, default_value = "haar")]
    cover: String,
    #[arg(long, default_value_t = 16)]
    retries: usize,
    #[arg(long, default_value_t = 500)]
    test_states: usize,
}

#[derive(Subcommand, Debug)]
enum RspCmd {
    Run(RspOpts),
    /// Emit a certified covering set
    Cover(RspOpts),
}

struct Settings {
    seed: u64,
    pretty: bool,
    output: Option<PathBuf>,
    tol: Tolerances,
}

fn settings(g: &Global) -> CliResult<Settings> {
    let file = match &g.config {
        Some(p) => FileConfig::load(p).map_err(CliError::Usage)?,
        None => FileConfig::default(),
    };
    let mut tol = Tolerances::default();
    for (k, v) in &file.values {
        if let Some(name) = k.strip_prefix("tol.") {
            tol.apply_override(&format!("{name}={v}")).map_err(CliError::Usage)?;
        } else if !matches!(k.as_str(), "seed" | "pretty" | "output") {
            return Err(CliError::Usage(format!("unknown config key `{k}`")));
        }
    }
    for spec in &g.tol {
        tol.apply_override(spec).map_err(CliError::Usage)?;
    }
    Ok(Settings {
        seed: match g.seed {
            Some(s) => s,
            None => file.get("seed").map_err(CliError::Usage)?.unwrap_or(0),
        },
        pretty: g.pretty || file.get("pretty").map_err(CliError::Usage)?.unwrap_or(false),
        output: g
            .output
            .clone()
            .or(file.get::<PathBuf>("output").map_err(CliError::Usage)?)
            .filter(|p| p.as_os_str() != "-"),
        tol,
    })
}

fn dispatch(cmd: &Command, s: &Settings) -> CliResult<Report> {
    match cmd {
        Command::Protocol(ProtocolCmd::List) => Ok(protocol::list()),
        Command::Protocol(ProtocolCmd::Run { name, input, p, copies }) => protocol::run(&protocol::ProtocolArgs {
            name,
            input,
            seed: s.seed,
            p: *p,
            copies: *copies,
            fidelity_tol: s.tol.get("fidelity"),
        }),
        Command::Rsp(sub) => {
            let (o, is_run) = match sub {
                RspCmd::Run(o) => (o, true),
                RspCmd::Cover(o) => (o, false),
            };
            let args = rsp::RspArgs {
                d: o.d,
                n: o.n,
                cover: &o.cover,
                retries: o.retries,
                test_states: o.test_states,
                seed: s.seed,
                fidelity_tol: s.tol.get("rsp_fidelity"),
            };
            if is_run {
                rsp::run(&args)
            } else {
                rsp::cover(&args)
            }
        }
        Command::Prove { lhs, relation, rhs, cat, asy, depth } => prove::run(&prove::ProveArgs {
            lhs,
            relation,
            rhs,
            cat: cat.as_deref(),
            asy: *asy,
            depth: *depth,
        }),
        Command::Capacity { gate, e, m, restarts, grid, quantum } => capacity::run(&capacity::CapacityArgs {
            gate,
            e: *e,
            m: *m,
            restarts: *restarts,
            grid: grid.as_deref(),
            quantum: *quantum,
            seed: s.seed,
            witness_tol: s.tol.get("witness"),
        }),
        Command::Selftest => selftest::run(s.seed, &s.tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = settings(&cli.global).and_then(|s| {
        let report = dispatch(&cli.command, &s)?;
        write_out(&report.render(s.pretty), s.output.as_deref())?;
        Ok(report.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
