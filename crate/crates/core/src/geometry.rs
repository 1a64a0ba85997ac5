//! Closed convex sets with exact metric projections.
//!
//! A [`ConvexSet`] can only be obtained through validated constructors, so
//! every value describes a nonempty closed convex set and all projection
//! routines may assume well-formed data.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::matrix::{embedded_dim, SymMatrix};
use crate::point::Point;

/// Default membership tolerance for [`ConvexSet::contains`].
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Default interior margin for [`ConvexSet::interior_contains`].
pub const INTERIOR_MARGIN: f64 = 1e-12;
/// Relative singular-value cutoff for affine constraint matrices.
pub const AFFINE_RANK_CUTOFF: f64 = 1e-10;

/// Declarative description of a set. Wrap it with [`ConvexSet::new`] to validate.
#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    /// `{x : <normal, x> = offset}`
    Hyperplane { normal: Point, offset: f64 },
    /// `{x : <normal, x> <= offset}`
    Halfspace { normal: Point, offset: f64 },
    /// Componentwise bounds; entries may be infinite.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Point, radius: f64 },
    /// `{x : <rows[i], x> = rhs[i]}` for all `i`.
    Affine { rows: Vec<Point>, rhs: Vec<f64> },
    /// Positive semidefinite matrices of the given order, embedded.
    PsdCone { order: usize },
    /// Symmetric matrices with every eigenvalue in `[eig_lower, eig_upper]`, embedded.
    SpectralBox { order: usize, eig_lower: f64, eig_upper: f64 },
    /// `{x : x_i >= 0}` in any dimension.
    NonnegOrthant,
    /// `inner + shift`
    Shifted { inner: Box<ConvexSet>, shift: Point },
}

/// Orthonormal basis of the row space plus the minimum-norm solution.
#[derive(Debug, Clone, PartialEq)]
struct AffineFactor {
    row_basis: DMatrix<f64>,
    particular: DVector<f64>,
}

impl AffineFactor {
    fn build(rows: &[Point], rhs: &[f64]) -> Result<Self> {
        let d = rows[0].dim();
        let a = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
        let b = DVector::from_column_slice(rhs);
        let svd = a.clone().svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::Numerical("SVD of affine constraints failed".into())),
        };
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| smax > 0.0 && svd.singular_values[k] > AFFINE_RANK_CUTOFF * smax)
            .collect();
        let mut row_basis = DMatrix::zeros(d, keep.len());
        let mut particular = DVector::zeros(d);
        for (c, &k) in keep.iter().enumerate() {
            let v = v_t.row(k).transpose();
            let coef = u.column(k).dot(&b) / svd.singular_values[k];
            particular += &v * coef;
            row_basis.set_column(c, &v);
        }
        let resid = (&a * &particular - &b).norm();
        if resid > 1e-9 * b.norm().max(1.0) {
            return Err(Error::InvalidSet(format!(
                "affine constraints are inconsistent (least-squares residual {resid:e})"
            )));
        }
        Ok(AffineFactor { row_basis, particular })
    }

    fn rank(&self) -> usize {
        self.row_basis.ncols()
    }

    fn project(&self, x: &Point) -> Point {
        let xv = DVector::from_column_slice(x.coords());
        let diff = &xv - &self.particular;
        let corr = &self.row_basis * (self.row_basis.transpose() * diff);
        Point::from_vec((xv - corr).iter().copied().collect())
    }
}

/// A validated nonempty closed convex set.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSet {
    kind: SetKind,
    affine: Option<AffineFactor>,
}

fn nonzero_normal(normal: &Point, what: &str) -> Result<()> {
    normal.ensure_finite()?;
    if normal.norm_sq() == 0.0 {
        return Err(Error::InvalidSet(format!("{what} normal must be nonzero")));
    }
    Ok(())
}

fn finite_scalar(v: f64, what: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSet(format!("{what} must be finite, got {v}")))
    }
}

impl ConvexSet {
    /// Validates `kind` and precomputes whatever the projection needs.
    pub fn new(kind: SetKind) -> Result<Self> {
        let mut affine = None;
        match &kind {
            SetKind::Hyperplane { normal, offset } => {
                nonzero_normal(normal, "hyperplane")?;
                finite_scalar(*offset, "hyperplane offset")?;
            }
            SetKind::Halfspace { normal, offset } => {
                nonzero_normal(normal, "halfspace")?;
                finite_scalar(*offset, "halfspace offset")?;
            }
            SetKind::Box { lower, upper } => {
                if lower.is_empty() {
                    return Err(Error::InvalidSet("box must have at least one coordinate".into()));
                }
                check_dim(lower.len(), upper.len())?;
                for (i, (l, u)) in lower.iter().zip(upper).enumerate() {
                    if l.is_nan() || u.is_nan() || *l == f64::INFINITY || *u == f64::NEG_INFINITY
                    {
                        return Err(Error::InvalidSet(format!("box bound {i} is invalid")));
                    }
                    if l > u {
                        return Err(Error::InvalidSet(format!(
                            "box requires lower <= upper, violated at coordinate {i} ({l} > {u})"
                        )));
                    }
                }
            }
            SetKind::Ball { center, radius } => {
                center.ensure_finite()?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidSet(format!(
                        "ball radius must be strictly positive, got {radius}"
                    )));
                }
            }
            SetKind::Affine { rows, rhs } => {
                if rows.is_empty() {
                    return Err(Error::InvalidSet("affine subspace needs at least one row".into()));
                }
                check_dim(rows.len(), rhs.len())?;
                let d = rows[0].dim();
                for r in rows {
                    r.ensure_dim(d)?;
                    r.ensure_finite()?;
                }
                if let Some(i) = rhs.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { index: i });
                }
                affine = Some(AffineFactor::build(rows, rhs)?);
            }
            SetKind::PsdCone { order } => {
                if *order == 0 {
                    return Err(Error::InvalidSet("PSD cone order must be at least 1".into()));
                }
            }
            SetKind::SpectralBox { order, eig_lower, eig_upper } => {
                if *order == 0 {
                    return Err(Error::InvalidSet("spectral box order must be at least 1".into()));
                }
                if eig_lower.is_nan() || eig_upper.is_nan() || eig_lower > eig_upper {
                    return Err(Error::InvalidSet(format!(
                        "spectral box requires eig_lower <= eig_upper, got [{eig_lower}, {eig_upper}]"
                    )));
                }
                if *eig_lower == f64::INFINITY || *eig_upper == f64::NEG_INFINITY {
                    return Err(Error::InvalidSet("spectral box is empty".into()));
                }
            }
            SetKind::NonnegOrthant => {}
            SetKind::Shifted { inner, shift } => {
                shift.ensure_finite()?;
                if let Some(d) = inner.ambient_dim() {
                    check_dim(d, shift.dim())?;
                }
            }
        }
        Ok(ConvexSet { kind, affine })
    }

    pub fn hyperplane(normal: Point, offset: f64) -> Result<Self> {
        Self::new(SetKind::Hyperplane { normal, offset })
    }

    pub fn halfspace(normal: Point, offset: f64) -> Result<Self> {
        Self::new(SetKind::Halfspace { normal, offset })
    }

    pub fn r#box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(SetKind::Box { lower, upper })
    }

    /// The whole space `R^dim`, as an unbounded box.
    pub fn whole_space(dim: usize) -> Result<Self> {
        Self::r#box(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim])
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        Self::new(SetKind::Ball { center, radius })
    }

    pub fn affine(rows: Vec<Point>, rhs: Vec<f64>) -> Result<Self> {
        Self::new(SetKind::Affine { rows, rhs })
    }

    pub fn psd_cone(order: usize) -> Result<Self> {
        Self::new(SetKind::PsdCone { order })
    }

    pub fn spectral_box(order: usize, eig_lower: f64, eig_upper: f64) -> Result<Self> {
        Self::new(SetKind::SpectralBox { order, eig_lower, eig_upper })
    }

    pub fn nonneg_orthant() -> Self {
        ConvexSet { kind: SetKind::NonnegOrthant, affine: None }
    }

    /// `self + shift`
    pub fn shifted(&self, shift: Point) -> Result<Self> {
        Self::new(SetKind::Shifted { inner: Box::new(self.clone()), shift })
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SetKind::Hyperplane { .. } => "hyperplane",
            SetKind::Halfspace { .. } => "halfspace",
            SetKind::Box { .. } => "box",
            SetKind::Ball { .. } => "ball",
            SetKind::Affine { .. } => "affine",
            SetKind::PsdCone { .. } => "psd_cone",
            SetKind::SpectralBox { .. } => "spectral_box",
            SetKind::NonnegOrthant => "nonneg_orthant",
            SetKind::Shifted { .. } => "shifted",
        }
    }

    /// Ambient dimension, or `None` for sets defined in every dimension.
    pub fn ambient_dim(&self) -> Option<usize> {
        match &self.kind {
            SetKind::Hyperplane { normal, .. } | SetKind::Halfspace { normal, .. } => {
                Some(normal.dim())
            }
            SetKind::Box { lower, .. } => Some(lower.len()),
            SetKind::Ball { center, .. } => Some(center.dim()),
            SetKind::Affine { rows, .. } => Some(rows[0].dim()),
            SetKind::PsdCone { order } | SetKind::SpectralBox { order, .. } => {
                Some(embedded_dim(*order))
            }
            SetKind::NonnegOrthant => None,
            SetKind::Shifted { shift, .. } => Some(shift.dim()),
        }
    }

    /// True for closed convex cones (sets with `t * C = C` for all `t > 0`).
    pub fn is_cone(&self) -> bool {
        match &self.kind {
            SetKind::NonnegOrthant | SetKind::PsdCone { .. } => true,
            SetKind::Hyperplane { offset, .. } | SetKind::Halfspace { offset, .. } => {
                *offset == 0.0
            }
            SetKind::Affine { rhs, .. } => rhs.iter().all(|&b| b == 0.0),
            SetKind::Box { lower, upper } => lower
                .iter()
                .chain(upper)
                .all(|&v| v == 0.0 || v.is_infinite()),
            SetKind::SpectralBox { eig_lower, eig_upper, .. } => {
                (*eig_lower == 0.0 || eig_lower.is_infinite())
                    && (*eig_upper == 0.0 || eig_upper.is_infinite())
            }
            SetKind::Ball { .. } | SetKind::Shifted { .. } => false,
        }
    }

    fn check_input(&self, x: &Point) -> Result<()> {
        if let Some(d) = self.ambient_dim() {
            x.ensure_dim(d)?;
        }
        x.ensure_finite()
    }

    /// Metric projection of `x` onto the set.
    pub fn project(&self, x: &Point) -> Result<Point> {
        self.check_input(x)?;
        self.project_unchecked(x)
    }

    fn project_unchecked(&self, x: &Point) -> Result<Point> {
        let p = match &self.kind {
            SetKind::Hyperplane { normal, offset } => {
                let t = (normal.dot(x) - offset) / normal.norm_sq();
                Point::lincomb(1.0, x, -t, normal)
            }
            SetKind::Halfspace { normal, offset } => {
                let excess = normal.dot(x) - offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    Point::lincomb(1.0, x, -excess / normal.norm_sq(), normal)
                }
            }
            SetKind::Box { lower, upper } => Point::from_vec(
                x.coords()
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(&v, (&l, &u))| v.max(l).min(u))
                    .collect(),
            ),
            SetKind::Ball { center, radius } => {
                let d = center.dist(x);
                if d <= *radius {
                    x.clone()
                } else {
                    Point::lincomb(1.0 - radius / d, center, radius / d, x)
                }
            }
            SetKind::Affine { .. } => self
                .affine
                .as_ref()
                .expect("affine factorization built at construction")
                .project(x),
            SetKind::PsdCone { order } => SymMatrix::unembed(x, *order)?.psd_project()?.embed(),
            SetKind::SpectralBox { order, eig_lower, eig_upper } => SymMatrix::unembed(x, *order)?
                .spectral_box_project(*eig_lower, *eig_upper)?
                .embed(),
            SetKind::NonnegOrthant => x.map(|v| v.max(0.0)),
            SetKind::Shifted { inner, shift } => project_shifted(inner, shift, x)?,
        };
        Ok(p)
    }

    /// Modified reflection `2 * beta * P(x) - x`, for `beta` in `(0, 1]`.
    pub fn modified_reflect(&self, x: &Point, beta: f64) -> Result<Point> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParams(format!("beta must lie in (0, 1], got {beta}")));
        }
        let p = self.project(x)?;
        Ok(Point::lincomb(2.0 * beta, &p, -1.0, x))
    }

    /// Euclidean distance from `x` to the set.
    pub fn distance(&self, x: &Point) -> Result<f64> {
        Ok(self.project(x)?.dist(x))
    }

    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        if !(tol >= 0.0) {
            return Err(Error::InvalidParams(format!("tolerance must be >= 0, got {tol}")));
        }
        Ok(self.distance(x)? <= tol)
    }

    /// True iff the closed ball of radius `margin` around `x` lies in the set
    /// (for the spectral sets: every eigenvalue clears its bounds by `margin`).
    /// Sets with empty interior always answer `false`.
    pub fn interior_contains(&self, x: &Point, margin: f64) -> Result<bool> {
        if !(margin > 0.0) {
            return Err(Error::InvalidParams(format!("margin must be > 0, got {margin}")));
        }
        self.check_input(x)?;
        Ok(self.interior_slack(x)? >= margin)
    }

    /// Signed slack of `x` with respect to the boundary: positive inside the
    /// interior, `-inf` for sets with empty interior.
    pub fn interior_slack(&self, x: &Point) -> Result<f64> {
        self.check_input(x)?;
        let slack = match &self.kind {
            SetKind::Hyperplane { .. } => f64::NEG_INFINITY,
            SetKind::Affine { .. } => {
                let f = self.affine.as_ref().expect("affine factorization built at construction");
                if f.rank() == 0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
            SetKind::Halfspace { normal, offset } => (offset - normal.dot(x)) / normal.norm(),
            SetKind::Box { lower, upper } => x
                .coords()
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(&v, (&l, &u))| (v - l).min(u - v))
                .fold(f64::INFINITY, f64::min),
            SetKind::Ball { center, radius } => radius - center.dist(x),
            SetKind::PsdCone { order } => SymMatrix::unembed(x, *order)?.min_eigenvalue()?,
            SetKind::SpectralBox { order, eig_lower, eig_upper } => {
                let ev = SymMatrix::unembed(x, *order)?.eigenvalues()?;
                (ev[0] - eig_lower).min(eig_upper - ev[ev.len() - 1])
            }
            SetKind::NonnegOrthant => x.coords().iter().copied().fold(f64::INFINITY, f64::min),
            SetKind::Shifted { inner, shift } => inner.interior_slack(&(x - shift))?,
        };
        Ok(slack)
    }
}

/// `P_{inner + shift}(y) = P_inner(y - shift) + shift`.
pub fn project_shifted(inner: &ConvexSet, shift: &Point, y: &Point) -> Result<Point> {
    check_dim(shift.dim(), y.dim())?;
    let p = inner.project(&(y - shift))?;
    Ok(&p + shift)
}
