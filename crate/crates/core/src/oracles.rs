//! Reference solvers sharing no code path with the reflection iteration.

use crate::error::{Error, Result};
use crate::geometry::ConvexSet;
use crate::point::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub point: Point,
    /// Distance between the last `A`-iterate and the last `B`-iterate.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("oracle tolerance must be > 0, got {tol}")))
    }
}

/// Dykstra's algorithm for the projection of `q` onto `A ∩ B`.
///
/// Stops when both the A/B gap and the change of the `B`-iterate fall below
/// `tol`. The returned point is the last `B`-iterate.
pub fn dykstra(
    a: &ConvexSet,
    b: &ConvexSet,
    q: &Point,
    max_iter: usize,
    tol: f64,
) -> Result<OracleResult> {
    check_tol(tol)?;
    q.ensure_finite()?;
    let mut x = q.clone();
    let mut p = Point::zeros(q.dim());
    let mut r = Point::zeros(q.dim());
    let mut gap = f64::INFINITY;
    for k in 0..max_iter {
        let y = a.project(&(&x + &p))?;
        p = &(&x + &p) - &y;
        let x_next = b.project(&(&y + &r))?;
        r = &(&y + &r) - &x_next;
        gap = y.dist(&x_next);
        let change = x_next.dist(&x);
        x = x_next;
        if gap <= tol && change <= tol {
            return Ok(OracleResult { point: x, gap, iterations: k + 1, converged: true });
        }
    }
    Ok(OracleResult { point: x, gap, iterations: max_iter, converged: false })
}

/// Alternating projections `x <- P_A(P_B(x))`, used as a feasibility test.
///
/// `gap = |P_B(x) - P_A(P_B(x))|` for the last iterate; a small gap certifies
/// numerically that the sets intersect. The loop also ends when the iterate
/// stops moving, which is how a positive distance between the sets shows up.
pub fn alternating_projections(
    a: &ConvexSet,
    b: &ConvexSet,
    x0: &Point,
    max_iter: usize,
    tol: f64,
) -> Result<OracleResult> {
    check_tol(tol)?;
    let mut x = x0.clone();
    let mut gap = f64::INFINITY;
    for k in 0..max_iter {
        let pb = b.project(&x)?;
        let x_next = a.project(&pb)?;
        gap = pb.dist(&x_next);
        let change = x_next.dist(&x);
        x = x_next;
        if gap <= tol {
            return Ok(OracleResult { point: x, gap, iterations: k + 1, converged: true });
        }
        if change <= f64::EPSILON * (1.0 + x.norm()) {
            return Ok(OracleResult { point: x, gap, iterations: k + 1, converged: false });
        }
    }
    Ok(OracleResult { point: x, gap, iterations: max_iter, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    #[test]
    fn dykstra_quadrant() {
        let a = ConvexSet::halfspace(pt![1, 0], 0.0).unwrap();
        let b = ConvexSet::halfspace(pt![0, 1], 0.0).unwrap();
        let res = dykstra(&a, &b, &pt![1, 1], 1000, 1e-12).unwrap();
        assert!(res.converged);
        assert!(res.point.dist(&pt![0, 0]) <= 1e-12);
    }

    #[test]
    fn dykstra_single_set() {
        let b = ConvexSet::ball(pt![0, 0], 1.0).unwrap();
        let res = dykstra(&b, &b, &pt![2, 0], 1000, 1e-12).unwrap();
        assert!(res.point.dist(&pt![1, 0]) <= 1e-12);
    }

    /// Brute force over the segment `{u >= 0, u1 + u2 = 1}` at step 1e-4.
    fn grid_minimizer(q: &Point) -> Point {
        let mut best = (f64::INFINITY, pt![0, 0]);
        for i in 0..=10_000 {
            let t = i as f64 * 1e-4;
            let u = pt![t, 1.0 - t];
            let d = u.dist(q);
            if d < best.0 {
                best = (d, u);
            }
        }
        best.1
    }

    #[test]
    fn dykstra_matches_grid_search_on_segment() {
        let a = ConvexSet::hyperplane(pt![1, 1], 1.0).unwrap();
        let b = ConvexSet::nonneg_orthant();
        for q in [pt![2, -1], pt![0.3, 0.1], pt![-2, 0.5], pt![0.9, 0.8]] {
            let grid = grid_minimizer(&q);
            let res = dykstra(&a, &b, &q, 100_000, 1e-12).unwrap();
            assert!(res.converged);
            assert!(res.point.dist(&grid) <= 1e-4, "q = {q}: {} vs {grid}", res.point);
        }
        let res = dykstra(&a, &b, &pt![2, -1], 100_000, 1e-12).unwrap();
        assert!(res.point.dist(&pt![1, 0]) <= 1e-10);
    }

    #[test]
    fn alternating_projections_same_ball() {
        let b = ConvexSet::ball(pt![0, 0], 1.0).unwrap();
        let res = alternating_projections(&b, &b, &pt![5, 5], 10, 1e-12).unwrap();
        assert_eq!(res.iterations, 1);
        assert_eq!(res.gap, 0.0);
    }

    #[test]
    fn alternating_projections_feasible_shifted_orthant() {
        let a = ConvexSet::affine(vec![pt![0, 1]], vec![1.0]).unwrap();
        let b = ConvexSet::nonneg_orthant().shifted(pt![0.1, 0.1]).unwrap();
        let res = alternating_projections(&a, &b, &pt![-5, -5], 10_000, 1e-9).unwrap();
        assert!(res.gap <= 1e-7);
    }

    #[test]
    fn alternating_projections_detects_separation() {
        let a = ConvexSet::halfspace(pt![1, 0], -1.0).unwrap();
        let b = ConvexSet::halfspace(pt![-1, 0], -1.0).unwrap();
        let res = alternating_projections(&a, &b, &pt![0, 0], 10_000, 1e-9).unwrap();
        assert!(!res.converged);
        assert!((res.gap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_rejects_bad_tolerance() {
        let b = ConvexSet::ball(pt![0, 0], 1.0).unwrap();
        assert!(dykstra(&b, &b, &pt![1, 1], 10, 0.0).is_err());
        assert!(alternating_projections(&b, &b, &pt![1, 1], 10, -1.0).is_err());
    }
}
