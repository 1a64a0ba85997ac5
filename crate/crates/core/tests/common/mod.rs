#![allow(dead_code)]

use aamr::harness::{ParamOverrides, ProblemFile};
use aamr::matrix::{fixed_diagonal_set, SymMatrix};
use aamr::{pt, ConvexSet, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Point {
    Point::new((0..dim).map(|_| rng.gen_range(-scale..scale)).collect()).unwrap()
}

pub fn random_sym(rng: &mut ChaCha8Rng, order: usize, scale: f64) -> SymMatrix {
    let mut rows = vec![vec![0.0; order]; order];
    for i in 0..order {
        for j in i..order {
            let v = rng.gen_range(-scale..scale);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    SymMatrix::from_rows(&rows).unwrap()
}

/// `L L^T` with `L` of size `order x rank`.
pub fn random_psd(rng: &mut ChaCha8Rng, order: usize, rank: usize, scale: f64) -> SymMatrix {
    let l: Vec<Vec<f64>> =
        (0..order).map(|_| (0..rank).map(|_| rng.gen_range(-scale..scale)).collect()).collect();
    let rows: Vec<Vec<f64>> = (0..order)
        .map(|i| (0..order).map(|j| (0..rank).map(|k| l[i][k] * l[j][k]).sum()).collect())
        .collect();
    SymMatrix::from_rows(&rows).unwrap()
}

/// A best-approximation instance whose sets satisfy `A ∩ int B != ∅` or are
/// polyhedral, so the reflection iteration is guaranteed to converge.
pub struct Instance {
    pub name: &'static str,
    pub a: ConvexSet,
    pub b: ConvexSet,
    pub q: Point,
    pub x0: Point,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn problem(&self) -> ProblemFile {
        ProblemFile {
            dimension: self.dim(),
            a: self.a.clone(),
            b: self.b.clone(),
            q: self.q.clone(),
            x0: self.x0.clone(),
            params: ParamOverrides::default(),
            finite_term: None,
        }
    }
}

fn inst(name: &'static str, a: ConvexSet, b: ConvexSet, q: Point) -> Instance {
    let x0 = Point::zeros(q.dim());
    Instance { name, a, b, q, x0 }
}

/// Feasible instances in dimensions 2 through 45, including embedded
/// matrix problems of order 3 to 9.
pub fn oracle_suite() -> Vec<Instance> {
    let mut r = rng(20240611);
    let mut v = Vec::new();

    v.push(inst(
        "axes (R^2)",
        ConvexSet::hyperplane(pt![0, 1], 0.0).unwrap(),
        ConvexSet::hyperplane(pt![1, 0], 0.0).unwrap(),
        pt![1, 1],
    ));
    v.push(inst(
        "halfspace ∩ ball (R^2)",
        ConvexSet::halfspace(pt![-1, 0], -0.5).unwrap(),
        ConvexSet::ball(pt![0, 0], 1.0).unwrap(),
        pt![-1, 1],
    ));
    v.push(inst(
        "box ∩ box (R^3)",
        ConvexSet::r#box(vec![0.0; 3], vec![2.0; 3]).unwrap(),
        ConvexSet::r#box(vec![1.0; 3], vec![3.0; 3]).unwrap(),
        random_point(&mut r, 3, 5.0),
    ));
    v.push(inst(
        "ball ∩ halfspace through center (R^3)",
        ConvexSet::ball(pt![1, 0, -1], 2.0).unwrap(),
        ConvexSet::halfspace(pt![1, 2, 2], -1.0).unwrap(),
        pt![3, 4, 1],
    ));
    v.push(inst(
        "ball ∩ ball (R^4)",
        ConvexSet::ball(pt![0, 0, 0, 0], 1.5).unwrap(),
        ConvexSet::ball(pt![1, 1, 0, 0], 1.0).unwrap(),
        pt![-2, 3, 1, -1],
    ));
    v.push(inst(
        "affine ∩ orthant (R^5)",
        ConvexSet::affine(vec![pt![1, 1, 1, 1, 1], pt![1, -1, 0, 2, 0]], vec![2.0, 0.5]).unwrap(),
        ConvexSet::nonneg_orthant(),
        random_point(&mut r, 5, 3.0),
    ));
    v.push(inst(
        "hyperplane ∩ slab box (R^6)",
        ConvexSet::hyperplane(pt![1, -1, 2, 0.5, 1, -3], 1.0).unwrap(),
        ConvexSet::r#box(
            vec![-1.0, f64::NEG_INFINITY, -1.0, -1.0, f64::NEG_INFINITY, -1.0],
            vec![1.0, 1.0, f64::INFINITY, 1.0, 1.0, 1.0],
        )
        .unwrap(),
        random_point(&mut r, 6, 4.0),
    ));
    v.push(inst(
        "nearest correlation 3x3 (R^6)",
        fixed_diagonal_set(&[1.0; 3]).unwrap(),
        ConvexSet::psd_cone(3).unwrap(),
        random_sym(&mut r, 3, 2.0).embed(),
    ));
    v.push(inst(
        "PSD 5x5 ∩ trace <= 1 (R^15)",
        ConvexSet::psd_cone(5).unwrap(),
        ConvexSet::halfspace(SymMatrix::identity(5).unwrap().embed(), 1.0).unwrap(),
        random_sym(&mut r, 5, 1.0).embed(),
    ));
    v.push(inst(
        "well-conditioned 6x6, spectrum in [0.1, 10], unit diagonal (R^21)",
        fixed_diagonal_set(&[1.0; 6]).unwrap(),
        ConvexSet::spectral_box(6, 0.1, 10.0).unwrap(),
        random_sym(&mut r, 6, 1.5).embed(),
    ));
    let half = 0.5 * std::f64::consts::SQRT_2;
    let mut lower = vec![0.0; 8];
    let mut upper = vec![1.0; 8];
    lower.extend(vec![-half; 28]);
    upper.extend(vec![half; 28]);
    v.push(inst(
        "PSD 8x8 ∩ entrywise bounds (R^36)",
        ConvexSet::r#box(lower, upper).unwrap(),
        ConvexSet::psd_cone(8).unwrap(),
        random_sym(&mut r, 8, 1.0).embed(),
    ));
    v.push(inst(
        "nearest correlation 9x9 (R^45)",
        ConvexSet::psd_cone(9).unwrap(),
        fixed_diagonal_set(&[1.0; 9]).unwrap(),
        random_sym(&mut r, 9, 1.0).embed(),
    ));
    v
}

/// Sets meeting at a small angle: linear convergence slow enough that the
/// residual stays above rounding level over the whole rate window.
pub fn rate_suite() -> Vec<Instance> {
    let line = |t: f64| pt![-t.sin(), t.cos()];
    vec![
        inst(
            "lines at 0.05 rad",
            ConvexSet::hyperplane(pt![0, 1], 0.0).unwrap(),
            ConvexSet::hyperplane(line(0.05), 0.0).unwrap(),
            pt![1, 3],
        ),
        inst(
            "lines at 0.08 rad",
            ConvexSet::hyperplane(pt![0, 1], 0.0).unwrap(),
            ConvexSet::hyperplane(line(0.08), 0.0).unwrap(),
            pt![-2, 1],
        ),
        inst(
            "halfspace wedge at 0.1 rad",
            ConvexSet::halfspace(pt![0, 1], 0.0).unwrap(),
            ConvexSet::halfspace(-&line(0.1), 0.0).unwrap(),
            pt![1, 3],
        ),
        inst(
            "planes at 0.06 rad in R^3",
            ConvexSet::hyperplane(pt![0, 0, 1], 0.0).unwrap(),
            ConvexSet::hyperplane(pt![0, -(0.06f64.sin()), 0.06f64.cos()], 0.0).unwrap(),
            pt![1, 2, 3],
        ),
    ]
}

/// Cone instances for the shifted finite-termination scheme: (name, A, B, e, gamma, z0).
pub fn finite_term_suite() -> Vec<(&'static str, ConvexSet, ConvexSet, Point, f64, Point)> {
    vec![
        (
            "line x2 = 1 vs orthant",
            ConvexSet::affine(vec![pt![0, 1]], vec![1.0]).unwrap(),
            ConvexSet::nonneg_orthant(),
            pt![1, 1],
            0.1,
            pt![-5, -5],
        ),
        (
            "unit diagonal 2x2 vs PSD",
            fixed_diagonal_set(&[1.0, 1.0]).unwrap(),
            ConvexSet::psd_cone(2).unwrap(),
            SymMatrix::identity(2).unwrap().embed(),
            0.05,
            SymMatrix::from_rows(&[vec![-3.0, 2.0], vec![2.0, -1.0]]).unwrap().embed(),
        ),
        (
            "unit diagonal 4x4 vs PSD",
            fixed_diagonal_set(&[1.0; 4]).unwrap(),
            ConvexSet::psd_cone(4).unwrap(),
            SymMatrix::identity(4).unwrap().embed(),
            0.05,
            random_sym(&mut rng(7), 4, 3.0).embed(),
        ),
    ]
}

pub mod props;
