//! Subcommands of the `aamr` binary, written against an output sink so they
//! can be driven from tests.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::problem::ProblemFile;
use crate::harness::rate::{rate_report, RateReport, SequenceCheck};
use crate::harness::trace::write_trace;
use crate::oracles::{dykstra, OracleResult};
use crate::point::Point;
use crate::solver::{
    check_km_inequalities, reference_fixed_point, residual, run_aamr, run_aamr_with_reference,
    run_finite_termination, AamrParams, KmCheck, RunResult, Status,
};

pub const DEFAULT_ORACLE_TOL: f64 = 1e-10;
pub const DEFAULT_ORACLE_MAX_ITER: usize = 1_000_000;
pub const DEFAULT_N_MAX: usize = 10_000;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    NonConvergence = 1,
    InvalidInput = 2,
    Precondition = 3,
    Numerical = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl Error {
    pub fn exit_status(&self) -> ExitStatus {
        match self.root() {
            Error::Precondition(_) => ExitStatus::Precondition,
            Error::NotFixedPoint { .. } => ExitStatus::NonConvergence,
            Error::Numerical(_) => ExitStatus::Numerical,
            _ => ExitStatus::InvalidInput,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Oracle,
    Rate,
    Finterm,
    Check,
}

/// Command-line overrides shared by all subcommands.
#[derive(Debug, Clone, Default)]
pub struct CliOptions {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub trace_out: Option<PathBuf>,
    pub n_max: Option<usize>,
    pub gamma: Option<f64>,
    pub margin: Option<f64>,
    pub quiet: bool,
    /// `check` only: push `x_1` away from the fixed point before verifying.
    pub corrupt_trace: bool,
}

impl CliOptions {
    fn params(&self, problem: &ProblemFile) -> AamrParams {
        let mut p = problem.aamr_params();
        if let Some(a) = self.alpha {
            p.alpha = a;
        }
        if let Some(b) = self.beta {
            p.beta = b;
        }
        if let Some(m) = self.max_iter {
            p.max_iter = m;
        }
        if let Some(t) = self.tol {
            p.fp_tol = t;
        }
        p
    }
}

struct Out<'a> {
    sink: &'a mut dyn Write,
    quiet: bool,
}

impl Out<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        if !self.quiet {
            writeln!(self.sink, "{}", s.as_ref())?;
        }
        Ok(())
    }
}

fn save_trace(path: Option<&Path>, run: &RunResult) -> Result<()> {
    if let Some(path) = path {
        let f = BufWriter::new(File::create(path)?);
        write_trace(f, &run.trace)?;
    }
    Ok(())
}

fn status_name(s: Status) -> String {
    match s {
        Status::Converged => "converged".into(),
        Status::MaxIterReached => "max-iter-reached".into(),
        Status::FinitelyTerminated { l0 } => format!("finitely-terminated (l0 = {l0})"),
    }
}

/// Runs the shadow-sequence solver.
pub fn cmd_run(
    problem: &ProblemFile,
    opts: &CliOptions,
    sink: &mut dyn Write,
) -> Result<(ExitStatus, RunResult)> {
    let mut out = Out { sink, quiet: opts.quiet };
    let mut params = opts.params(problem);
    params.record_shadow = opts.trace_out.is_some();
    let run = run_aamr(&problem.a, &problem.b, &params)?;
    save_trace(opts.trace_out.as_deref(), &run)?;
    let last = run.last_record();
    out.line(format!("status: {}", status_name(run.status)))?;
    out.line(format!("iterations: {}", run.iterations()))?;
    out.line(format!("solution: {}", run.solution))?;
    out.line(format!("fp_residual: {:e}", last.map_or(0.0, |r| r.fp_residual)))?;
    out.line(format!("r_residual: {:e}", last.map_or(0.0, |r| r.r_residual)))?;
    let code = match run.status {
        Status::Converged => ExitStatus::Success,
        _ => ExitStatus::NonConvergence,
    };
    Ok((code, run))
}

/// Runs Dykstra's algorithm on the same instance.
pub fn cmd_oracle(
    problem: &ProblemFile,
    opts: &CliOptions,
    sink: &mut dyn Write,
) -> Result<(ExitStatus, OracleResult)> {
    let mut out = Out { sink, quiet: opts.quiet };
    let tol = opts.tol.unwrap_or(DEFAULT_ORACLE_TOL);
    let max_iter = opts.max_iter.unwrap_or(DEFAULT_ORACLE_MAX_ITER);
    let res = dykstra(&problem.a, &problem.b, &problem.q, max_iter, tol)?;
    out.line(format!("point: {}", res.point))?;
    out.line(format!("gap: {:e}", res.gap))?;
    out.line(format!("iterations: {}", res.iterations))?;
    let code = if res.converged { ExitStatus::Success } else { ExitStatus::NonConvergence };
    Ok((code, res))
}

/// Output of [`cmd_rate`].
#[derive(Debug, Clone)]
pub struct RateOutcome {
    pub report: RateReport,
    pub sequence: SequenceCheck,
    pub run: RunResult,
}

/// Runs a fixed number of iterations and reports on the residual rate.
pub fn cmd_rate(
    problem: &ProblemFile,
    opts: &CliOptions,
    sink: &mut dyn Write,
) -> Result<(ExitStatus, RateOutcome)> {
    let mut out = Out { sink, quiet: opts.quiet };
    let n_max = opts.n_max.unwrap_or(DEFAULT_N_MAX);
    if n_max == 0 {
        return Err(Error::InvalidParams("--n-max must be at least 1".into()));
    }
    let base = opts.params(problem);
    // Only an exactly stationary iterate stops the run early; the sequence is
    // constant from there on.
    let mut params = base.clone().with_max_iter(n_max).with_fp_tol(f64::MIN_POSITIVE);
    params.record_shadow = opts.trace_out.is_some();
    let run = run_aamr(&problem.a, &problem.b, &params)?;
    save_trace(opts.trace_out.as_deref(), &run)?;

    let mut residuals: Vec<f64> = run.trace.iter().map(|r| r.r_residual).collect();
    let tail = residual(&problem.a, &problem.b, &problem.q, &run.final_x)?;
    residuals.resize(n_max + 1, tail);
    let report = rate_report(&residuals);

    let fp: Vec<f64> = run.trace.iter().map(|r| r.fp_residual / params.alpha).collect();
    let x0_to_u = reference_fixed_point(&problem.a, &problem.b, &base)
        .ok()
        .map(|u| params.x0.dist(&u).powi(2));
    let sequence = SequenceCheck::new(&fp, params.alpha, x0_to_u);

    out.line(format!("iterations: {}", report.iterations))?;
    for w in &report.windows {
        out.line(format!(
            "window [{}, {}]: max sqrt(n) r(x_n) = {:.6e}",
            w.start,
            2 * w.start,
            w.max_scaled_residual
        ))?;
    }
    match report.fitted_slope {
        Some(s) => out.line(format!("tail slope: {s:.4}"))?,
        None => out.line("tail slope: n/a (residual below floor)")?,
    }
    out.line(format!("windows decreasing: {}", report.windows_decreasing))?;
    out.line(format!(
        "residual sequence: nonnegative {}, monotone {}, partial sum {:.6e}, bound {}",
        sequence.nonnegative,
        sequence.monotone,
        sequence.partial_sum,
        sequence.bound.map_or("n/a".to_string(), |b| format!("{b:.6e}"))
    ))?;
    out.line(format!("verdict: {}", report.verdict))?;
    let code = if report.verdict { ExitStatus::Success } else { ExitStatus::NonConvergence };
    Ok((code, RateOutcome { report, sequence, run }))
}

/// Runs the cone-shifted scheme until the shadow enters `int B`.
pub fn cmd_finterm(
    problem: &ProblemFile,
    opts: &CliOptions,
    sink: &mut dyn Write,
) -> Result<(ExitStatus, RunResult)> {
    let mut out = Out { sink, quiet: opts.quiet };
    let mut params = problem.finite_term_params().ok_or_else(|| {
        Error::InvalidParams("problem file has no [finite_term] block".into())
    })?;
    if let Some(g) = opts.gamma {
        params.gamma = g;
    }
    if let Some(m) = opts.margin {
        params.margin = m;
    }
    if let Some(m) = opts.max_iter {
        params.max_iter = m;
    }
    params.alpha = opts.alpha.unwrap_or(params.alpha);
    params.beta = opts.beta.unwrap_or(params.beta);
    params.record_shadow = opts.trace_out.is_some();
    let run = run_finite_termination(&problem.a, &problem.b, &params)?;
    save_trace(opts.trace_out.as_deref(), &run)?;
    out.line(format!("status: {}", status_name(run.status)))?;
    let code = match run.status {
        Status::FinitelyTerminated { l0 } => {
            out.line(format!("l0: {l0}"))?;
            out.line(format!("w: {}", run.solution))?;
            out.line(format!("interior slack: {:e}", problem.b.interior_slack(&run.solution)?))?;
            ExitStatus::Success
        }
        _ => {
            out.line(format!("iterations: {}", run.iterations()))?;
            ExitStatus::NonConvergence
        }
    };
    Ok((code, run))
}

/// Output of [`cmd_check`].
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub checks: Vec<KmCheck>,
    pub reference: Point,
}

impl CheckOutcome {
    pub fn violations(&self) -> impl Iterator<Item = &KmCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }

    pub fn min_gap(&self) -> f64 {
        self.checks.iter().map(|c| c.gap).fold(f64::INFINITY, f64::min)
    }
}

/// Verifies the Krasnosel'skii–Mann inequalities along a full run.
pub fn cmd_check(
    problem: &ProblemFile,
    opts: &CliOptions,
    sink: &mut dyn Write,
) -> Result<(ExitStatus, CheckOutcome)> {
    let mut out = Out { sink, quiet: opts.quiet };
    let params = opts.params(problem);
    let u = reference_fixed_point(&problem.a, &problem.b, &params)?;
    let mut rerun = params.clone().recording_iterates();
    rerun.record_shadow = opts.trace_out.is_some();
    let run = run_aamr_with_reference(&problem.a, &problem.b, &rerun, Some(&u))?;
    save_trace(opts.trace_out.as_deref(), &run)?;
    let mut xs = run.iterates;
    if opts.corrupt_trace && xs.len() >= 2 {
        let away = &xs[1] - &u;
        let dir = if away.norm() > 0.0 {
            away.scale(1.0 / away.norm())
        } else {
            let mut e = vec![0.0; u.dim()];
            e[0] = 1.0;
            Point::from_vec(e)
        };
        let size = 10.0 * (1.0 + xs[0].dist(&u));
        xs[1] = Point::lincomb(1.0, &xs[1], size, &dir);
    }
    let checks = check_km_inequalities(
        &xs,
        &problem.a,
        &problem.b,
        &problem.q,
        params.alpha,
        params.beta,
        &u,
    )?;
    let outcome = CheckOutcome { checks, reference: u };
    out.line(format!("iterations checked: {}", outcome.checks.len()))?;
    out.line(format!("min gap: {:e}", if outcome.checks.is_empty() { 0.0 } else { outcome.min_gap() }))?;
    let mut failed = 0usize;
    for c in outcome.violations() {
        failed += 1;
        out.line(format!(
            "violation at n = {}: gap = {:e}, |(I-R)x_n| = {:e}, |(I-R)x_(n+1)| = {:e}",
            c.n, c.gap, c.fp_residual, c.next_fp_residual
        ))?;
    }
    out.line(format!("violations: {failed}"))?;
    let code = if failed == 0 { ExitStatus::Success } else { ExitStatus::NonConvergence };
    Ok((code, outcome))
}

/// Runs one subcommand and maps every failure to an exit status, writing
/// diagnostics to `err`.
pub fn dispatch(
    cmd: Command,
    problem: &ProblemFile,
    opts: &CliOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> ExitStatus {
    let res = match cmd {
        Command::Run => cmd_run(problem, opts, out).map(|r| r.0),
        Command::Oracle => cmd_oracle(problem, opts, out).map(|r| r.0),
        Command::Rate => cmd_rate(problem, opts, out).map(|r| r.0),
        Command::Finterm => cmd_finterm(problem, opts, out).map(|r| r.0),
        Command::Check => cmd_check(problem, opts, out).map(|r| r.0),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_status()
        }
    }
}
