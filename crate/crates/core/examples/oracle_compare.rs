//! Solves the same instances with the reflection iteration and with
//! Dykstra's algorithm and prints the discrepancy.

use aamr::matrix::fixed_diagonal_set;
use aamr::{dykstra, pt, run_aamr, AamrParams, ConvexSet, Point, SymMatrix};

fn main() -> aamr::Result<()> {
    let near_corr = SymMatrix::from_rows(&[
        vec![2.0, -1.0, 0.0],
        vec![-1.0, 2.0, -1.0],
        vec![0.0, -1.0, 2.0],
    ])?;
    let cases: Vec<(&str, ConvexSet, ConvexSet, Point)> = vec![
        (
            "box ∩ ball",
            ConvexSet::r#box(vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0])?,
            ConvexSet::ball(pt![1, 1, 1], 1.2)?,
            pt![-1, 2, 0.5],
        ),
        (
            "affine ∩ orthant",
            ConvexSet::affine(vec![pt![1, 1, 1, 1]], vec![1.0])?,
            ConvexSet::nonneg_orthant(),
            pt![0.9, -0.3, 0.6, 0.2],
        ),
        (
            "unit diagonal ∩ PSD",
            fixed_diagonal_set(&[1.0; 3])?,
            ConvexSet::psd_cone(3)?,
            near_corr.embed(),
        ),
    ];

    println!("{:<22} {:>6} {:>8} {:>12}", "instance", "aamr", "dykstra", "difference");
    for (name, a, b, q) in cases {
        let run = run_aamr(&a, &b, &AamrParams::new(q.clone()))?;
        let oracle = dykstra(&a, &b, &q, 1_000_000, 1e-11)?;
        println!(
            "{name:<22} {:>6} {:>8} {:>12.3e}",
            run.iterations(),
            oracle.iterations,
            run.solution.dist(&oracle.point)
        );
    }
    Ok(())
}
