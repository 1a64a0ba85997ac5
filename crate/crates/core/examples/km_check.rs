//! Verifies the Fejér-type decrease and the monotone fixed-point residual
//! along a run, then shows the checker catching a tampered iterate.

use aamr::solver::{check_km_inequalities, reference_fixed_point};
use aamr::{pt, run_aamr_with_reference, AamrParams, ConvexSet, Point};

fn main() -> aamr::Result<()> {
    let a = ConvexSet::ball(pt![0, 0, 0], 2.0)?;
    let b = ConvexSet::halfspace(pt![1, 1, 1], 1.0)?;
    let q = pt![3, 2, 1];
    let params = AamrParams::new(q.clone()).with_x0(pt![1, -1, 0]).recording_iterates();

    let u = reference_fixed_point(&a, &b, &params)?;
    let run = run_aamr_with_reference(&a, &b, &params, Some(&u))?;
    let mut xs = run.iterates;
    let checks = check_km_inequalities(&xs, &a, &b, &q, params.alpha, params.beta, &u)?;
    let min_gap = checks.iter().map(|c| c.gap).fold(f64::INFINITY, f64::min);
    let bad = checks.iter().filter(|c| !c.holds()).count();
    println!("{} steps, min gap {min_gap:.3e}, violations {bad}", checks.len());

    xs[1] = Point::lincomb(1.0, &xs[1], 10.0, &(&xs[1] - &u));
    let checks = check_km_inequalities(&xs, &a, &b, &q, params.alpha, params.beta, &u)?;
    let first = checks.iter().find(|c| !c.holds()).map(|c| (c.n, c.gap));
    println!("after tampering with x_1: first violation {first:?}");
    Ok(())
}
