//! Windowed maxima of sqrt(n) r(x_n) for two lines meeting at a small angle.

use aamr::harness::rate_report;
use aamr::{pt, residual, run_aamr, AamrParams, ConvexSet};

fn main() -> aamr::Result<()> {
    let t: f64 = 0.05;
    let a = ConvexSet::hyperplane(pt![0, 1], 0.0)?;
    let b = ConvexSet::hyperplane(pt![-t.sin(), t.cos()], 0.0)?;
    let q = pt![1, 3];
    let n = 10_000;

    let params = AamrParams::new(q.clone()).with_max_iter(n).with_fp_tol(f64::MIN_POSITIVE);
    let run = run_aamr(&a, &b, &params)?;
    let mut r: Vec<f64> = run.trace.iter().map(|rec| rec.r_residual).collect();
    r.resize(n + 1, residual(&a, &b, &q, &run.final_x)?);

    let report = rate_report(&r);
    for w in &report.windows {
        println!("[{:>5}, {:>5}]  {:.6e}", w.start, 2 * w.start, w.max_scaled_residual);
    }
    match report.fitted_slope {
        Some(s) => println!("tail slope {s:.3}"),
        None => println!("tail slope n/a"),
    }
    println!("verdict {}", report.verdict);
    Ok(())
}
