use aamr::{project_shifted, ConvexSet, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{random_point, random_sym};

pub const IDEMPOTENCE_TOL: f64 = 1e-12;
pub const FIRM_TOL: f64 = 1e-10;
pub const VARIATIONAL_TOL: f64 = 1e-10;
pub const SHIFT_TOL: f64 = 1e-14;
pub const REFLECT_TOL: f64 = 1e-10;
pub const CONE_TOL: f64 = 1e-10;

pub const VARIANTS: [&str; 9] = [
    "hyperplane",
    "halfspace",
    "box",
    "ball",
    "affine",
    "psd_cone",
    "spectral_box",
    "nonneg_orthant",
    "shifted",
];

fn nonzero_point(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    loop {
        let p = random_point(rng, dim, 2.0);
        if p.norm() > 0.1 {
            return p;
        }
    }
}

/// A random set of the named variant together with the ambient dimension
/// used to sample points for it.
pub fn random_set(rng: &mut ChaCha8Rng, variant: &str) -> (ConvexSet, usize) {
    match variant {
        "hyperplane" | "halfspace" => {
            let dim = rng.gen_range(1..=6);
            let normal = nonzero_point(rng, dim);
            let offset = rng.gen_range(-2.0..2.0);
            let set = if variant == "hyperplane" {
                ConvexSet::hyperplane(normal, offset)
            } else {
                ConvexSet::halfspace(normal, offset)
            };
            (set.unwrap(), dim)
        }
        "box" => {
            let dim = rng.gen_range(1..=6);
            let mut lower = Vec::with_capacity(dim);
            let mut upper = Vec::with_capacity(dim);
            for _ in 0..dim {
                let a: f64 = rng.gen_range(-2.0..2.0);
                let w: f64 = rng.gen_range(0.0..2.0);
                lower.push(if rng.gen_bool(0.2) { f64::NEG_INFINITY } else { a });
                upper.push(if rng.gen_bool(0.2) { f64::INFINITY } else { a + w });
            }
            (ConvexSet::r#box(lower, upper).unwrap(), dim)
        }
        "ball" => {
            let dim = rng.gen_range(1..=6);
            let center = random_point(rng, dim, 2.0);
            let radius = rng.gen_range(0.0..2.0);
            (ConvexSet::ball(center, radius).unwrap(), dim)
        }
        "affine" => {
            let dim = rng.gen_range(2..=6);
            let m = rng.gen_range(1..dim);
            let mut rows: Vec<Point> = (0..m).map(|_| nonzero_point(rng, dim)).collect();
            let x_feas = random_point(rng, dim, 2.0);
            if rng.gen_bool(0.3) {
                // redundant row keeps the system consistent but rank-deficient
                let extra = Point::lincomb(2.0, &rows[0], -1.0, &rows[m - 1]);
                rows.push(extra);
            }
            let rhs = rows.iter().map(|r| r.dot(&x_feas)).collect();
            (ConvexSet::affine(rows, rhs).unwrap(), dim)
        }
        "psd_cone" => {
            let order = rng.gen_range(1..=5);
            (ConvexSet::psd_cone(order).unwrap(), order * (order + 1) / 2)
        }
        "spectral_box" => {
            let order = rng.gen_range(1..=4);
            let lo = rng.gen_range(-1.0..1.0);
            let hi = lo + rng.gen_range(0.0..2.0);
            (ConvexSet::spectral_box(order, lo, hi).unwrap(), order * (order + 1) / 2)
        }
        "nonneg_orthant" => (ConvexSet::nonneg_orthant(), rng.gen_range(1..=6)),
        "shifted" => {
            let inner_kind = ["halfspace", "box", "ball", "psd_cone", "affine"][rng.gen_range(0..5)];
            let (inner, dim) = random_set(rng, inner_kind);
            let shift = random_point(rng, dim, 2.0);
            (inner.shifted(shift).unwrap(), dim)
        }
        other => panic!("unknown variant {other}"),
    }
}

/// Points at a mix of scales, including symmetric-matrix embeddings.
pub fn sample_point(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    let scale = [0.1, 1.0, 5.0][rng.gen_range(0..3)];
    let tri = (((8 * dim + 1) as f64).sqrt() as usize - 1) / 2;
    if tri * (tri + 1) / 2 == dim && rng.gen_bool(0.5) {
        random_sym(rng, tri, scale).embed()
    } else {
        random_point(rng, dim, scale)
    }
}

pub fn idempotence_error(set: &ConvexSet, x: &Point) -> f64 {
    let p = set.project(x).unwrap();
    set.project(&p).unwrap().dist(&p)
}

/// `|Px - Py|^2 - <x - y, Px - Py>`, nonpositive for a firmly nonexpansive map.
pub fn firm_excess(set: &ConvexSet, x: &Point, y: &Point) -> f64 {
    let d = &set.project(x).unwrap() - &set.project(y).unwrap();
    d.norm_sq() - (x - y).dot(&d)
}

/// `<x - Px, c - Px>` for a member `c`.
pub fn variational_excess(set: &ConvexSet, x: &Point, c: &Point) -> f64 {
    let p = set.project(x).unwrap();
    (x - &p).dot(&(c - &p))
}

pub fn reflect_excess(set: &ConvexSet, x: &Point, y: &Point, beta: f64) -> f64 {
    let rx = set.modified_reflect(x, beta).unwrap();
    let ry = set.modified_reflect(y, beta).unwrap();
    rx.dist(&ry) - x.dist(y)
}

/// Explicit translate `inner + p` for the variants with a closed form.
pub fn translated(inner: &ConvexSet, p: &Point) -> Option<ConvexSet> {
    use aamr::SetKind;
    match inner.kind() {
        SetKind::Halfspace { normal, offset } => {
            Some(ConvexSet::halfspace(normal.clone(), offset + normal.dot(p)).unwrap())
        }
        SetKind::Box { lower, upper } => {
            let lo = lower.iter().zip(p.coords()).map(|(l, s)| l + s).collect();
            let hi = upper.iter().zip(p.coords()).map(|(u, s)| u + s).collect();
            Some(ConvexSet::r#box(lo, hi).unwrap())
        }
        SetKind::Ball { center, radius } => Some(ConvexSet::ball(center + p, *radius).unwrap()),
        SetKind::Hyperplane { normal, offset } => {
            Some(ConvexSet::hyperplane(normal.clone(), offset + normal.dot(p)).unwrap())
        }
        SetKind::NonnegOrthant => {
            Some(ConvexSet::r#box(p.coords().to_vec(), vec![f64::INFINITY; p.dim()]).unwrap())
        }
        _ => None,
    }
}

pub fn shift_error(inner: &ConvexSet, p: &Point, y: &Point) -> f64 {
    let moved = translated(inner, p).expect("closed-form translate");
    let a = project_shifted(inner, p, y).unwrap();
    let b = moved.project(y).unwrap();
    a.dist(&b)
}

pub fn cone_error(set: &ConvexSet, x: &Point, lambda: f64) -> f64 {
    let a = set.project(&x.scale(lambda)).unwrap();
    let b = set.project(x).unwrap().scale(lambda);
    a.dist(&b)
}

/// Failures out of `trials` for one property on one variant.
#[derive(Debug, Default, Clone, Copy)]
pub struct Tally {
    pub idempotence: usize,
    pub firm: usize,
    pub variational: usize,
    pub reflect: usize,
    pub shift: usize,
    /// `None` when the variant has no closed-form translate.
    pub worst_shift: Option<f64>,
}

pub fn run_trials(rng: &mut ChaCha8Rng, variant: &str, trials: usize) -> Tally {
    let mut t = Tally::default();
    for _ in 0..trials {
        let (set, dim) = random_set(rng, variant);
        let x = sample_point(rng, dim);
        let y = sample_point(rng, dim);
        let c = set.project(&sample_point(rng, dim)).unwrap();
        let beta = rng.gen_range(0.01..0.99);
        if idempotence_error(&set, &x) > IDEMPOTENCE_TOL {
            t.idempotence += 1;
        }
        if firm_excess(&set, &x, &y) > FIRM_TOL {
            t.firm += 1;
        }
        if variational_excess(&set, &x, &c) > VARIATIONAL_TOL {
            t.variational += 1;
        }
        if reflect_excess(&set, &x, &y, beta) > REFLECT_TOL {
            t.reflect += 1;
        }
        if translated(&set, &x).is_some() {
            let p = random_point(rng, dim, 2.0);
            let err = shift_error(&set, &p, &y);
            t.worst_shift = Some(t.worst_shift.unwrap_or(0.0).max(err));
            if err > SHIFT_TOL {
                t.shift += 1;
            }
        }
    }
    t
}
