//! TOML problem files.
//!
//! ```toml
//! dimension = 2
//! q = [1.0, 1.0]
//! x0 = [0.0, 0.0]          # optional, defaults to the origin
//!
//! [A]
//! kind = "hyperplane"
//! normal = [0.0, 1.0]
//! offset = 0.0
//!
//! [B]
//! kind = "ball"
//! center = [0.0, 0.0]
//! radius = 1.0
//!
//! [params]                 # optional overrides
//! alpha = 0.5
//! beta = 0.7
//! max_iter = 100000
//! fp_tol = 1e-10
//!
//! [finite_term]            # only for `finterm`
//! e = [1.0, 1.0]
//! gamma = 0.1
//! margin = 1e-12
//! ```
//!
//! Points are either arrays of coordinates, `{ matrix = [[..], ..] }` or
//! `{ matrix_file = "path" }`; matrices are embedded with
//! [`SymMatrix::embed`]. Relative paths resolve against the problem file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{ConvexSet, SetKind, INTERIOR_MARGIN};
use crate::matrix::{fixed_diagonal_set, SymMatrix};
use crate::point::Point;
use crate::solver::{AamrParams, FiniteTermParams};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    dimension: usize,
    #[serde(rename = "A")]
    a: RawSet,
    #[serde(rename = "B")]
    b: RawSet,
    q: RawPoint,
    x0: Option<RawPoint>,
    #[serde(default)]
    params: ParamOverrides,
    finite_term: Option<RawFiniteTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPoint {
    Coords(Vec<f64>),
    Matrix { matrix: Vec<Vec<f64>> },
    MatrixFile { matrix_file: String },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawSet {
    Hyperplane { normal: RawPoint, offset: f64 },
    Halfspace { normal: RawPoint, offset: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: RawPoint, radius: f64 },
    Affine { rows: Vec<Vec<f64>>, rhs: Vec<f64> },
    PsdCone { order: usize },
    SpectralBox { order: usize, eig_lower: f64, eig_upper: f64 },
    NonnegOrthant {},
    Shifted { inner: Box<RawSet>, shift: RawPoint },
    FixedDiagonal { diagonal: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiniteTerm {
    e: RawPoint,
    gamma: f64,
    margin: Option<f64>,
}

/// Optional solver settings carried by a problem file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub max_iter: Option<usize>,
    pub fp_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTermSpec {
    pub e: Point,
    pub gamma: f64,
    pub margin: f64,
}

/// A validated problem instance.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub dimension: usize,
    pub a: ConvexSet,
    pub b: ConvexSet,
    pub q: Point,
    pub x0: Point,
    pub params: ParamOverrides,
    pub finite_term: Option<FiniteTermSpec>,
}

impl ProblemFile {
    /// Solver parameters with the file's overrides applied.
    pub fn aamr_params(&self) -> AamrParams {
        let mut p = AamrParams::new(self.q.clone()).with_x0(self.x0.clone());
        if let Some(a) = self.params.alpha {
            p.alpha = a;
        }
        if let Some(b) = self.params.beta {
            p.beta = b;
        }
        if let Some(m) = self.params.max_iter {
            p.max_iter = m;
        }
        if let Some(t) = self.params.fp_tol {
            p.fp_tol = t;
        }
        p
    }

    /// Finite-termination parameters, starting from `x0`.
    pub fn finite_term_params(&self) -> Option<FiniteTermParams> {
        let ft = self.finite_term.as_ref()?;
        let base = self.aamr_params();
        let mut p = FiniteTermParams::new(self.x0.clone(), ft.e.clone(), ft.gamma)
            .with_margin(ft.margin)
            .with_alpha_beta(base.alpha, base.beta);
        if let Some(m) = self.params.max_iter {
            p.max_iter = m;
        }
        Some(p)
    }

    /// Parses and validates a problem given as TOML text. Relative matrix
    /// paths resolve against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path, origin: &str) -> Result<ProblemFile> {
        let raw: RawProblem = toml::from_str(text)
            .map_err(|e| Error::Parse { path: origin.to_string(), message: e.to_string() })?;
        let ctx = Ctx { base_dir };
        let dim = raw.dimension;
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into())
                .in_field("dimension"));
        }
        let a = ctx.set(raw.a, dim).map_err(|e| e.in_field("A"))?;
        let b = ctx.set(raw.b, dim).map_err(|e| e.in_field("B"))?;
        let q = ctx.point_of_dim(raw.q, dim).map_err(|e| e.in_field("q"))?;
        let x0 = match raw.x0 {
            Some(x) => ctx.point_of_dim(x, dim).map_err(|e| e.in_field("x0"))?,
            None => Point::zeros(dim),
        };
        let finite_term = match raw.finite_term {
            Some(ft) => {
                let e = ctx.point_of_dim(ft.e, dim).map_err(|e| e.in_field("finite_term.e"))?;
                if !(ft.gamma > 0.0 && ft.gamma.is_finite()) {
                    return Err(Error::InvalidParams(format!("gamma must be > 0, got {}", ft.gamma))
                        .in_field("finite_term.gamma"));
                }
                let margin = ft.margin.unwrap_or(INTERIOR_MARGIN);
                if !(margin > 0.0) {
                    return Err(Error::InvalidParams(format!("margin must be > 0, got {margin}"))
                        .in_field("finite_term.margin"));
                }
                Some(FiniteTermSpec { e, gamma: ft.gamma, margin })
            }
            None => None,
        };
        let problem = ProblemFile { dimension: dim, a, b, q, x0, params: raw.params, finite_term };
        problem.aamr_params().validate().map_err(|e| e.in_field("params"))?;
        Ok(problem)
    }
}

/// Reads and validates a problem file.
pub fn parse_problem(path: impl AsRef<Path>) -> Result<ProblemFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { path: path.display().to_string(), message: e.to_string() })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    ProblemFile::from_toml_str(&text, &base, &path.display().to_string())
}

struct Ctx<'a> {
    base_dir: &'a Path,
}

impl Ctx<'_> {
    fn point(&self, raw: RawPoint) -> Result<Point> {
        match raw {
            RawPoint::Coords(c) => Point::new(c),
            RawPoint::Matrix { matrix } => Ok(SymMatrix::from_rows(&matrix)?.embed()),
            RawPoint::MatrixFile { matrix_file } => {
                Ok(SymMatrix::read_file(self.base_dir.join(matrix_file))?.embed())
            }
        }
    }

    fn point_of_dim(&self, raw: RawPoint, dim: usize) -> Result<Point> {
        let p = self.point(raw)?;
        check_dim(dim, p.dim())?;
        Ok(p)
    }

    fn set(&self, raw: RawSet, dim: usize) -> Result<ConvexSet> {
        let set = self.set_any_dim(raw)?;
        if let Some(d) = set.ambient_dim() {
            check_dim(dim, d)?;
        }
        Ok(set)
    }

    fn set_any_dim(&self, raw: RawSet) -> Result<ConvexSet> {
        let kind = match raw {
            RawSet::Hyperplane { normal, offset } => {
                SetKind::Hyperplane { normal: self.point(normal)?, offset }
            }
            RawSet::Halfspace { normal, offset } => {
                SetKind::Halfspace { normal: self.point(normal)?, offset }
            }
            RawSet::Box { lower, upper } => SetKind::Box { lower, upper },
            RawSet::Ball { center, radius } => SetKind::Ball { center: self.point(center)?, radius },
            RawSet::Affine { rows, rhs } => SetKind::Affine {
                rows: rows.into_iter().map(Point::new).collect::<Result<_>>()?,
                rhs,
            },
            RawSet::PsdCone { order } => SetKind::PsdCone { order },
            RawSet::SpectralBox { order, eig_lower, eig_upper } => {
                SetKind::SpectralBox { order, eig_lower, eig_upper }
            }
            RawSet::NonnegOrthant {} => SetKind::NonnegOrthant,
            RawSet::Shifted { inner, shift } => SetKind::Shifted {
                inner: Box::new(self.set_any_dim(*inner).map_err(|e| e.in_field("inner"))?),
                shift: self.point(shift).map_err(|e| e.in_field("shift"))?,
            },
            RawSet::FixedDiagonal { diagonal } => return fixed_diagonal_set(&diagonal),
        };
        ConvexSet::new(kind)
    }
}
