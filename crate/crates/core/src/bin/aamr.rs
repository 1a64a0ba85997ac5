use std::path::PathBuf;
use std::process::ExitCode;

use aamr::harness::{dispatch, parse_problem, CliOptions, Command, ExitStatus};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aamr", version, about = "Best approximation by averaged alternating modified reflections")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the problem and print the recovered projection
    Run(Common),
    /// Solve the problem with Dykstra's algorithm
    Oracle(Common),
    /// Run a fixed number of iterations and report the residual rate
    Rate(Common),
    /// Run the cone-shifted scheme until the shadow enters the interior of B
    Finterm(Common),
    /// Verify the Krasnosel'skii-Mann inequalities along a run
    Check(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    trace_out: Option<PathBuf>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    quiet: bool,
    #[arg(long, hide = true)]
    corrupt_trace: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ExitStatus::InvalidInput.code() as u8 } else { 0 });
        }
    };
    let (cmd, c) = match cli.command {
        Cmd::Run(c) => (Command::Run, c),
        Cmd::Oracle(c) => (Command::Oracle, c),
        Cmd::Rate(c) => (Command::Rate, c),
        Cmd::Finterm(c) => (Command::Finterm, c),
        Cmd::Check(c) => (Command::Check, c),
    };
    let problem = match parse_problem(&c.problem) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_status().code() as u8);
        }
    };
    let opts = CliOptions {
        alpha: c.alpha,
        beta: c.beta,
        max_iter: c.max_iter,
        tol: c.tol,
        trace_out: c.trace_out,
        n_max: c.n_max,
        gamma: c.gamma,
        margin: c.margin,
        quiet: c.quiet,
        corrupt_trace: c.corrupt_trace,
    };
    let status = dispatch(cmd, &problem, &opts, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(status.code() as u8)
}
