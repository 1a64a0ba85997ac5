//! Averaged alternating modified reflections.
//!
//! For closed convex `A`, `B`, parameters `alpha, beta` in `(0, 1)` and an
//! anchor `q`, the iteration
//!
//! ```text
//! y_n     = P_A(x_n + q)
//! x_{n+1} = (1 - alpha) x_n + alpha R(x_n),   R = (2 beta P_{B-q} - I)(2 beta P_{A-q} - I)
//! ```
//!
//! drives the shadow sequence `y_n` to the projection of `q` onto `A ∩ B`
//! whenever the intersection is nonempty and `q - P_{A∩B}(q)` lies in
//! `N_A + N_B` at that point (for instance when `A ∩ int B` is nonempty).

use crate::error::{Error, Result};
use crate::geometry::{project_shifted, ConvexSet, INTERIOR_MARGIN};
use crate::oracles::alternating_projections;
use crate::point::Point;

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_BETA: f64 = 0.7;
pub const DEFAULT_FP_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Any iterate coordinate beyond this magnitude aborts the run.
pub const DIVERGENCE_BOUND: f64 = 1e12;
/// Fixed-point tolerance used when computing a reference fixed point.
pub const REFERENCE_FP_TOL: f64 = 1e-12;
/// Largest `|R(u) - u|` accepted for a reference fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-8;
/// Smallest admissible Fejér gap in the KM check.
pub const KM_GAP_TOL: f64 = 1e-8;
/// Slack allowed on the monotone decrease of `|(I - R) x_n|`.
pub const MONOTONE_TOL: f64 = 1e-10;
/// Feasibility threshold for the shifted cone in [`validate_gamma`].
pub const GAMMA_GAP_TOL: f64 = 1e-7;
const GAMMA_BUDGET: usize = 200_000;

/// Parameters of a best-approximation run.
#[derive(Debug, Clone, PartialEq)]
pub struct AamrParams {
    pub alpha: f64,
    pub beta: f64,
    /// Point to be projected onto `A ∩ B`.
    pub q: Point,
    pub x0: Point,
    pub max_iter: usize,
    /// Stop once `|x_{n+1} - x_n| <= fp_tol`.
    pub fp_tol: f64,
    pub record_shadow: bool,
    /// Keep every `x_n` in [`RunResult::iterates`].
    pub record_iterates: bool,
}

impl AamrParams {
    /// Default parameters, starting from the origin.
    pub fn new(q: Point) -> Self {
        let x0 = Point::zeros(q.dim());
        AamrParams {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            q,
            x0,
            max_iter: DEFAULT_MAX_ITER,
            fp_tol: DEFAULT_FP_TOL,
            record_shadow: false,
            record_iterates: false,
        }
    }

    pub fn with_x0(mut self, x0: Point) -> Self {
        self.x0 = x0;
        self
    }

    pub fn with_alpha_beta(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_fp_tol(mut self, fp_tol: f64) -> Self {
        self.fp_tol = fp_tol;
        self
    }

    pub fn recording_shadow(mut self) -> Self {
        self.record_shadow = true;
        self
    }

    pub fn recording_iterates(mut self) -> Self {
        self.record_iterates = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha_beta(self.alpha, self.beta)?;
        if !(self.fp_tol > 0.0) {
            return Err(Error::InvalidParams(format!("fp_tol must be > 0, got {}", self.fp_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParams("max_iter must be at least 1".into()));
        }
        self.q.ensure_finite()?;
        self.x0.ensure_finite()?;
        self.x0.ensure_dim(self.q.dim())
    }
}

fn check_alpha_beta(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParams(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParams(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(())
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterReached,
    /// The shadow point entered the interior of `B` at iteration `l0`.
    FinitelyTerminated { l0: usize },
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    /// `|x_{n+1} - x_n|`
    pub fp_residual: f64,
    /// `r(x_n) = |y_n - P_B(y_n)|`
    pub r_residual: f64,
    /// `sqrt(n) * r(x_n)`
    pub scaled_residual: f64,
    /// `|x_n - u|^2 - |x_{n+1} - u|^2 - alpha (1 - alpha) |(I - R) x_n|^2`
    /// when a reference fixed point `u` was supplied.
    pub km_gap: Option<f64>,
    pub shadow: Option<Point>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub status: Status,
    pub solution: Point,
    pub trace: Vec<IterationRecord>,
    pub final_x: Point,
    /// `x_0, x_1, ...` when requested; one more entry than `trace`.
    pub iterates: Vec<Point>,
}

impl RunResult {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    pub fn last_record(&self) -> Option<&IterationRecord> {
        self.trace.last()
    }
}

/// `R = (2 beta P_B - I)(2 beta P_A - I)` on the sets as given.
pub fn r_operator(a: &ConvexSet, b: &ConvexSet, beta: f64, x: &Point) -> Result<Point> {
    let inner = a.modified_reflect(x, beta)?;
    b.modified_reflect(&inner, beta)
}

/// `T = (1 - alpha) I + alpha R`.
pub fn t_operator(a: &ConvexSet, b: &ConvexSet, alpha: f64, beta: f64, x: &Point) -> Result<Point> {
    check_alpha_beta(alpha, beta)?;
    let r = r_operator(a, b, beta, x)?;
    Ok(Point::lincomb(1.0 - alpha, x, alpha, &r))
}

/// `r(x) = |P_A(x + q) - P_B(P_A(x + q))|`.
pub fn residual(a: &ConvexSet, b: &ConvexSet, q: &Point, x: &Point) -> Result<f64> {
    q.ensure_dim(x.dim())?;
    let y = a.project(&(x + q))?;
    b.distance(&y)
}

/// One application of `T_{A-q, B-q}` with the intermediate quantities the
/// drivers need, computed through shifted projections.
struct Step {
    shadow: Point,
    r_x: Point,
    next: Point,
}

struct ShiftedPair<'a> {
    a: &'a ConvexSet,
    b: &'a ConvexSet,
    q: Point,
    alpha: f64,
    beta: f64,
}

impl ShiftedPair<'_> {
    fn step(&self, x: &Point) -> Result<Step> {
        let neg_q = -&self.q;
        let pa = project_shifted(self.a, &neg_q, x)?;
        let refl_a = Point::lincomb(2.0 * self.beta, &pa, -1.0, x);
        let pb = project_shifted(self.b, &neg_q, &refl_a)?;
        let r_x = Point::lincomb(2.0 * self.beta, &pb, -1.0, &refl_a);
        let next = Point::lincomb(1.0 - self.alpha, x, self.alpha, &r_x);
        let shadow = &pa + &self.q;
        Ok(Step { shadow, r_x, next })
    }

    fn fixed_point_residual(&self, x: &Point) -> Result<f64> {
        Ok(self.step(x)?.r_x.dist(x))
    }
}

fn guard(next: &Point, n: usize) -> Result<()> {
    if next.ensure_finite().is_err() || next.max_abs() > DIVERGENCE_BOUND {
        return Err(Error::Numerical(format!(
            "iterate left the bounded region at n = {n}; the intersection may be empty or the \
             constraint qualification may fail"
        )));
    }
    Ok(())
}

fn check_problem_dims(a: &ConvexSet, b: &ConvexSet, dim: usize) -> Result<()> {
    for s in [a, b] {
        if let Some(d) = s.ambient_dim() {
            crate::error::check_dim(d, dim)?;
        }
    }
    Ok(())
}

/// Runs the shadow-sequence iteration. The solution is the shadow of the
/// final iterate.
pub fn run_aamr(a: &ConvexSet, b: &ConvexSet, params: &AamrParams) -> Result<RunResult> {
    run_aamr_with_reference(a, b, params, None)
}

/// As [`run_aamr`], additionally filling `km_gap` against the fixed point `u`.
pub fn run_aamr_with_reference(
    a: &ConvexSet,
    b: &ConvexSet,
    params: &AamrParams,
    reference: Option<&Point>,
) -> Result<RunResult> {
    params.validate()?;
    check_problem_dims(a, b, params.q.dim())?;
    if let Some(u) = reference {
        u.ensure_dim(params.q.dim())?;
    }
    let pair = ShiftedPair { a, b, q: params.q.clone(), alpha: params.alpha, beta: params.beta };
    let km = params.alpha * (1.0 - params.alpha);

    let mut x = params.x0.clone();
    let mut trace = Vec::new();
    let mut iterates = Vec::new();
    if params.record_iterates {
        iterates.push(x.clone());
    }
    let mut status = Status::MaxIterReached;
    for n in 0..params.max_iter {
        let step = pair.step(&x)?;
        guard(&step.next, n)?;
        let fp_residual = step.next.dist(&x);
        let r_residual = b.distance(&step.shadow)?;
        let km_gap = reference.map(|u| {
            let ir = step.r_x.dist(&x);
            (x.dist(u).powi(2) - step.next.dist(u).powi(2)) - km * ir * ir
        });
        trace.push(IterationRecord {
            n,
            fp_residual,
            r_residual,
            scaled_residual: (n as f64).sqrt() * r_residual,
            km_gap,
            shadow: params.record_shadow.then(|| step.shadow.clone()),
        });
        x = step.next;
        if params.record_iterates {
            iterates.push(x.clone());
        }
        if fp_residual <= params.fp_tol {
            status = Status::Converged;
            break;
        }
    }
    let solution = a.project(&(&x + &params.q))?;
    Ok(RunResult { status, solution, trace, final_x: x, iterates })
}

/// Iterates to [`REFERENCE_FP_TOL`] and returns the final `x` as a fixed
/// point of `R_{A-q, B-q}`, verified to [`FIXED_POINT_TOL`].
pub fn reference_fixed_point(a: &ConvexSet, b: &ConvexSet, params: &AamrParams) -> Result<Point> {
    let mut p = params.clone().with_fp_tol(REFERENCE_FP_TOL);
    p.record_shadow = false;
    p.record_iterates = false;
    let run = run_aamr(a, b, &p)?;
    let pair = ShiftedPair { a, b, q: params.q.clone(), alpha: params.alpha, beta: params.beta };
    let residual = pair.fixed_point_residual(&run.final_x)?;
    if residual > FIXED_POINT_TOL {
        return Err(Error::NotFixedPoint { residual });
    }
    Ok(run.final_x)
}

/// Outcome of the Krasnosel'skii–Mann inequalities at one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmCheck {
    pub n: usize,
    /// `|x_n - u|^2 - |x_{n+1} - u|^2 - alpha (1 - alpha) |(I - R) x_n|^2`
    pub gap: f64,
    /// `|(I - R) x_{n+1}| <= |(I - R) x_n| + MONOTONE_TOL`
    pub monotone_ok: bool,
    pub fp_residual: f64,
    pub next_fp_residual: f64,
}

impl KmCheck {
    pub fn holds(&self) -> bool {
        self.gap >= -KM_GAP_TOL && self.monotone_ok
    }
}

/// Checks the Fejér-type decrease and the monotone fixed-point residual
/// along a sequence of iterates against the fixed point `u` of `R_{A-q,B-q}`.
pub fn check_km_inequalities(
    trace_x: &[Point],
    a: &ConvexSet,
    b: &ConvexSet,
    q: &Point,
    alpha: f64,
    beta: f64,
    u: &Point,
) -> Result<Vec<KmCheck>> {
    check_alpha_beta(alpha, beta)?;
    check_problem_dims(a, b, q.dim())?;
    u.ensure_dim(q.dim())?;
    let pair = ShiftedPair { a, b, q: q.clone(), alpha, beta };
    let residual = pair.fixed_point_residual(u)?;
    if residual > FIXED_POINT_TOL {
        return Err(Error::NotFixedPoint { residual });
    }
    let km = alpha * (1.0 - alpha);
    let ir: Vec<f64> = trace_x
        .iter()
        .map(|x| {
            x.ensure_dim(q.dim())?;
            pair.fixed_point_residual(x)
        })
        .collect::<Result<_>>()?;
    Ok(trace_x
        .windows(2)
        .enumerate()
        .map(|(n, w)| {
            let gap = (w[0].dist(u).powi(2) - w[1].dist(u).powi(2)) - km * ir[n] * ir[n];
            KmCheck {
                n,
                gap,
                monotone_ok: ir[n + 1] <= ir[n] + MONOTONE_TOL,
                fp_residual: ir[n],
                next_fp_residual: ir[n + 1],
            }
        })
        .collect())
}

/// Parameters of the cone-shifted scheme
/// `w_n = P_A(z_n)`, `z_{n+1} = T_{A, B + gamma e}(z_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTermParams {
    pub alpha: f64,
    pub beta: f64,
    pub z0: Point,
    pub max_iter: usize,
    /// Interior direction of the cone `B`.
    pub e: Point,
    pub gamma: f64,
    /// Slack required of `w_n` inside `B`.
    pub margin: f64,
    pub record_shadow: bool,
}

impl FiniteTermParams {
    pub fn new(z0: Point, e: Point, gamma: f64) -> Self {
        FiniteTermParams {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            z0,
            max_iter: DEFAULT_MAX_ITER,
            e,
            gamma,
            margin: INTERIOR_MARGIN,
            record_shadow: false,
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_alpha_beta(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }
}

/// Decides numerically whether `A ∩ (B + gamma e)` is nonempty by running
/// alternating projections from the origin.
pub fn validate_gamma(a: &ConvexSet, b: &ConvexSet, e: &Point, gamma: f64) -> Result<bool> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParams(format!("gamma must be > 0, got {gamma}")));
    }
    e.ensure_finite()?;
    check_problem_dims(a, b, e.dim())?;
    let shifted = b.shifted(e.scale(gamma))?;
    let ap = alternating_projections(a, &shifted, &Point::zeros(e.dim()), GAMMA_BUDGET, 0.1 * GAMMA_GAP_TOL)?;
    Ok(ap.gap <= GAMMA_GAP_TOL)
}

/// Runs the cone-shifted scheme until the shadow point `w_n` lands in the
/// interior of `B` with slack at least `margin`.
pub fn run_finite_termination(
    a: &ConvexSet,
    b: &ConvexSet,
    params: &FiniteTermParams,
) -> Result<RunResult> {
    check_alpha_beta(params.alpha, params.beta)?;
    if params.max_iter == 0 {
        return Err(Error::InvalidParams("max_iter must be at least 1".into()));
    }
    if !(params.margin > 0.0) {
        return Err(Error::InvalidParams(format!("margin must be > 0, got {}", params.margin)));
    }
    params.z0.ensure_finite()?;
    params.z0.ensure_dim(params.e.dim())?;
    check_problem_dims(a, b, params.e.dim())?;
    if !b.is_cone() {
        return Err(Error::Precondition(format!(
            "B must be a closed convex cone, got a {} set",
            b.kind_name()
        )));
    }
    if !b.interior_contains(&params.e, params.margin)? {
        return Err(Error::Precondition("e is not in the interior of B".into()));
    }
    if !validate_gamma(a, b, &params.e, params.gamma)? {
        return Err(Error::Precondition(format!(
            "A ∩ (B + gamma e) appears empty for gamma = {}",
            params.gamma
        )));
    }

    let shifted_b = b.shifted(params.e.scale(params.gamma))?;
    let zero = Point::zeros(params.e.dim());
    let pair = ShiftedPair { a, b: &shifted_b, q: zero, alpha: params.alpha, beta: params.beta };

    let mut z = params.z0.clone();
    let mut trace = Vec::new();
    for n in 0..params.max_iter {
        let step = pair.step(&z)?;
        guard(&step.next, n)?;
        let w = step.shadow;
        let r_residual = shifted_b.distance(&w)?;
        let fp_residual = step.next.dist(&z);
        trace.push(IterationRecord {
            n,
            fp_residual,
            r_residual,
            scaled_residual: (n as f64).sqrt() * r_residual,
            km_gap: None,
            shadow: params.record_shadow.then(|| w.clone()),
        });
        if b.interior_contains(&w, params.margin)? {
            return Ok(RunResult {
                status: Status::FinitelyTerminated { l0: n },
                solution: w,
                trace,
                final_x: z,
                iterates: Vec::new(),
            });
        }
        z = step.next;
    }
    let solution = a.project(&z)?;
    Ok(RunResult { status: Status::MaxIterReached, solution, trace, final_x: z, iterates: Vec::new() })
}
