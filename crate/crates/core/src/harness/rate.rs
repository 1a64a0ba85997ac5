//! Empirical checks of the `o(1/sqrt(n))` residual rate.

/// Window starts: the maximum of `sqrt(n) r(x_n)` is taken over `[N, 2N]`.
pub const FIRST_WINDOW: usize = 100;
/// Largest admissible log-log slope of `r(x_n)` over the trace tail.
pub const RATE_SLOPE_MAX: f64 = -0.4;
/// Residuals below this fraction of `max(1, max_n r)` count as converged.
pub const RATE_FLOOR_REL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct RateWindow {
    pub start: usize,
    pub max_scaled_residual: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub windows: Vec<RateWindow>,
    /// Least-squares slope of `ln r` against `ln n` over the tail of the
    /// resolved part of the trace; `None` when fewer than two residuals sit
    /// above the floor there.
    pub fitted_slope: Option<f64>,
    pub windows_decreasing: bool,
    pub verdict: bool,
    pub floor: f64,
    pub iterations: usize,
}

/// Builds the report from `r(x_0), .., r(x_N)`.
pub fn rate_report(residuals: &[f64]) -> RateReport {
    let iterations = residuals.len().saturating_sub(1);
    let rmax = residuals.iter().copied().fold(0.0, f64::max);
    let floor = RATE_FLOOR_REL * rmax.max(1.0);

    let mut windows = Vec::new();
    let mut start = FIRST_WINDOW;
    while 2 * start <= iterations {
        let span = &residuals[start..=2 * start];
        let max_scaled_residual = span
            .iter()
            .zip(start..)
            .map(|(r, n)| (n as f64).sqrt() * r)
            .fold(0.0, f64::max);
        let max_residual = span.iter().copied().fold(0.0, f64::max);
        windows.push(RateWindow { start, max_scaled_residual, max_residual });
        start *= 10;
    }
    let windows_decreasing = windows.windows(2).all(|w| {
        w[1].max_scaled_residual < w[0].max_scaled_residual || w[1].max_residual <= floor
    });

    let fitted_slope = residuals
        .iter()
        .rposition(|&r| r > floor)
        .and_then(|last| tail_slope(residuals, (last / 10).max(1), last, floor));
    let verdict = windows_decreasing && fitted_slope.is_none_or(|s| s <= RATE_SLOPE_MAX);
    RateReport { windows, fitted_slope, windows_decreasing, verdict, floor, iterations }
}

fn tail_slope(residuals: &[f64], from: usize, to: usize, floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = (from..=to)
        .filter(|&n| residuals[n] > floor)
        .map(|n| ((n as f64).ln(), residuals[n].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Hypotheses of the summability lemma for `a_n = |(I - R) x_n|^2`:
/// nonnegative, non-increasing and with partial sums bounded by
/// `|x_0 - u|^2 / (alpha (1 - alpha))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceCheck {
    pub nonnegative: bool,
    pub monotone: bool,
    pub partial_sum: f64,
    /// `None` when no reference fixed point was available.
    pub bound: Option<f64>,
}

impl SequenceCheck {
    /// `fixed_point_residuals[n] = |(I - R) x_n|`.
    pub fn new(fixed_point_residuals: &[f64], alpha: f64, x0_to_u_sq: Option<f64>) -> Self {
        let a: Vec<f64> = fixed_point_residuals.iter().map(|v| v * v).collect();
        SequenceCheck {
            nonnegative: a.iter().all(|&v| v >= 0.0),
            monotone: fixed_point_residuals
                .windows(2)
                .all(|w| w[1] <= w[0] + crate::solver::MONOTONE_TOL),
            partial_sum: a.iter().sum(),
            bound: x0_to_u_sq.map(|d| d / (alpha * (1.0 - alpha))),
        }
    }

    pub fn bounded(&self) -> Option<bool> {
        self.bound.map(|b| self.partial_sum <= b + 1e-6)
    }

    pub fn holds(&self) -> bool {
        self.nonnegative && self.monotone && self.bounded().unwrap_or(true)
    }
}
