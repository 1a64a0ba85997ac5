//! Best approximation onto the intersection of two closed convex sets by
//! averaged alternating modified reflections (AAMR).
//!
//! The crate is organised around a small catalog of sets with exact
//! projections ([`geometry`]), the reflection iteration and its verifiers
//! ([`solver`]), independent reference solvers ([`oracles`]), a symmetric
//! matrix embedding for matrix nearness problems ([`matrix`]) and the
//! problem-file driven experiment runner behind the `aamr` binary
//! ([`harness`]).
//!
//! ```
//! use aamr::{pt, run_aamr, AamrParams, ConvexSet, Status};
//!
//! let a = ConvexSet::hyperplane(pt![0, 1], 0.0).unwrap();
//! let b = ConvexSet::hyperplane(pt![1, 0], 0.0).unwrap();
//! let run = run_aamr(&a, &b, &AamrParams::new(pt![1, 1])).unwrap();
//! assert_eq!(run.status, Status::Converged);
//! assert!(run.solution.norm() < 1e-6);
//! ```

pub mod error;
pub mod geometry;
pub mod harness;
pub mod matrix;
pub mod oracles;
pub mod point;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{project_shifted, ConvexSet, SetKind};
pub use matrix::SymMatrix;
pub use oracles::{alternating_projections, dykstra, OracleResult};
pub use point::Point;
pub use solver::{
    check_km_inequalities, r_operator, reference_fixed_point, residual, run_aamr,
    run_aamr_with_reference, run_finite_termination, t_operator, validate_gamma, AamrParams,
    FiniteTermParams, IterationRecord, KmCheck, RunResult, Status,
};
