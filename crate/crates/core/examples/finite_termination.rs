//! Finds a point of A ∩ int B in finitely many steps by shifting the cone
//! B into its own interior.

use aamr::matrix::fixed_diagonal_set;
use aamr::{pt, run_finite_termination, ConvexSet, FiniteTermParams, Status, SymMatrix};

fn main() -> aamr::Result<()> {
    // a line against the orthant
    let a = ConvexSet::affine(vec![pt![0, 1]], vec![1.0])?;
    let b = ConvexSet::nonneg_orthant();
    let params = FiniteTermParams::new(pt![-5, -5], pt![1, 1], 0.1);
    let run = run_finite_termination(&a, &b, &params)?;
    report("line vs orthant", run.status, &run.solution.to_string(), b.interior_slack(&run.solution)?);

    // a unit-diagonal matrix that is positive definite
    let a = fixed_diagonal_set(&[1.0; 3])?;
    let b = ConvexSet::psd_cone(3)?;
    let z0 = SymMatrix::from_rows(&[
        vec![-2.0, 3.0, 1.0],
        vec![3.0, 0.5, -2.0],
        vec![1.0, -2.0, -1.0],
    ])?;
    let e = SymMatrix::identity(3)?.embed();
    let run = run_finite_termination(&a, &b, &FiniteTermParams::new(z0.embed(), e, 0.05))?;
    let w = SymMatrix::unembed(&run.solution, 3)?;
    report("unit diagonal vs PSD", run.status, &format!("\n{}", w.to_text()), w.min_eigenvalue()?);
    Ok(())
}

fn report(name: &str, status: Status, w: &str, slack: f64) {
    match status {
        Status::FinitelyTerminated { l0 } => println!("{name}: l0 = {l0}, slack = {slack:.4e}, w = {w}"),
        other => println!("{name}: {other:?}"),
    }
}
