//! Projects a point onto the intersection of a halfspace and a disc.

use aamr::{pt, run_aamr, AamrParams, ConvexSet};

fn main() -> aamr::Result<()> {
    let a = ConvexSet::halfspace(pt![-1, 0], -0.5)?; // x1 >= 1/2
    let b = ConvexSet::ball(pt![0, 0], 1.0)?;
    let q = pt![-1, 1];

    let params = AamrParams::new(q).with_alpha_beta(0.5, 0.7);
    let run = run_aamr(&a, &b, &params)?;

    println!("status      {:?}", run.status);
    println!("iterations  {}", run.iterations());
    println!("solution    {}", run.solution);
    println!("expected    (0.5, {:.10})", 0.75f64.sqrt());
    Ok(())
}
