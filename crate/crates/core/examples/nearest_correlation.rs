//! Nearest correlation matrix: the closest PSD matrix with unit diagonal in
//! the Frobenius norm.

use aamr::matrix::fixed_diagonal_set;
use aamr::{run_aamr, AamrParams, ConvexSet, SymMatrix};

fn main() -> aamr::Result<()> {
    let g = SymMatrix::parse_text(
        "4
         2 -1  0  0
        -1  2 -1  0
         0 -1  2 -1
         0  0 -1  2",
    )?;
    let a = ConvexSet::psd_cone(4)?;
    let b = fixed_diagonal_set(&[1.0; 4])?;
    let run = run_aamr(&a, &b, &AamrParams::new(g.embed()))?;
    let x = SymMatrix::unembed(&run.solution, 4)?;

    println!("{:?} after {} iterations", run.status, run.iterations());
    print!("{}", x.to_text());
    println!("eigenvalues {:?}", x.eigenvalues()?);
    println!("distance to G {:.10}", run.solution.dist(&g.embed()));
    Ok(())
}
