//! Symmetric matrices and their isometric embedding into coordinate space.
//!
//! The embedding copies the diagonal first and then the strict upper triangle
//! in row-major order, scaled by `sqrt(2)`, so that `<embed(M), embed(N)> =
//! trace(M N)`. Every Euclidean projection in the embedded space is therefore
//! a Frobenius-norm projection on matrices.

use std::f64::consts::SQRT_2;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::point::Point;

/// Asymmetry accepted when loading a dense matrix, relative to `max(1, max|m_ij|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues this close to a clamp boundary are snapped onto it.
const CLAMP_SNAP: f64 = 1e-14;

/// A real symmetric `n x n` matrix stored as its upper triangle (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    upper: Vec<f64>,
}

/// Number of coordinates of the embedding of an `order x order` matrix.
pub fn embedded_dim(order: usize) -> usize {
    order * (order + 1) / 2
}

/// Inverse of [`embedded_dim`], if `dim` is a triangular number.
pub fn order_from_dim(dim: usize) -> Option<usize> {
    let n = (((8 * dim + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    (n..=n + 1).find(|&k| k >= 1 && embedded_dim(k) == dim)
}

impl SymMatrix {
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.order - i * i.saturating_sub(1) / 2 + j - i
    }

    pub fn zeros(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParams("matrix order must be at least 1".into()));
        }
        Ok(SymMatrix { order, upper: vec![0.0; embedded_dim(order)] })
    }

    pub fn identity(order: usize) -> Result<Self> {
        Self::from_diagonal(&vec![1.0; order])
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m.ensure_finite()?;
        Ok(m)
    }

    /// Builds a symmetric matrix from dense rows. Rows must form a square
    /// matrix that is symmetric up to [`SYMMETRY_TOL`]; the result is `(M + M^T) / 2`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        let mut scale = 1.0f64;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParams(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { index: i * n + j });
                }
                scale = scale.max(v.abs());
            }
        }
        for i in 0..n {
            for j in i..n {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidParams(format!(
                        "matrix is not symmetric: entry ({i},{j}) = {a} but ({j},{i}) = {b}"
                    )));
                }
                m.set(i, j, 0.5 * (a + b));
            }
        }
        Ok(m)
    }

    /// Symmetrizes an arbitrary square nalgebra matrix.
    pub fn from_dmatrix(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidParams("matrix must be square".into()));
        }
        let mut s = Self::zeros(m.nrows())?;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                s.set(i, j, 0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        s.ensure_finite()?;
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    fn ensure_finite(&self) -> Result<()> {
        match self.upper.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(Error::NonFinite { index }),
            None => Ok(()),
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.order, self.order, |i, j| self.get(i, j))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.order).map(|i| (0..self.order).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Diagonal first, then the strict upper triangle scaled by `sqrt(2)`.
    pub fn embed(&self) -> Point {
        let n = self.order;
        let mut v = Vec::with_capacity(embedded_dim(n));
        v.extend((0..n).map(|i| self.get(i, i)));
        for i in 0..n {
            for j in i + 1..n {
                v.push(SQRT_2 * self.get(i, j));
            }
        }
        Point::from_vec(v)
    }

    pub fn unembed(x: &Point, order: usize) -> Result<Self> {
        let mut m = Self::zeros(order)?;
        x.ensure_dim(embedded_dim(order))?;
        let c = x.coords();
        for i in 0..order {
            m.set(i, i, c[i]);
        }
        let mut k = order;
        for i in 0..order {
            for j in i + 1..order {
                m.set(i, j, c[k] / SQRT_2);
                k += 1;
            }
        }
        Ok(m)
    }

    /// Frobenius inner product `trace(self * other)`.
    pub fn frobenius_dot(&self, other: &SymMatrix) -> f64 {
        let mut s = 0.0;
        for i in 0..self.order {
            for j in 0..self.order {
                s += self.get(i, j) * other.get(i, j);
            }
        }
        s
    }

    pub fn add_scaled_identity(&self, delta: f64) -> SymMatrix {
        let mut m = self.clone();
        for i in 0..self.order {
            let d = m.get(i, i);
            m.set(i, i, d + delta);
        }
        m
    }

    fn eigen(&self) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
        self.ensure_finite()?;
        SymmetricEigen::try_new(self.to_dmatrix(), f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev: Vec<f64> = self.eigen()?.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// Nearest matrix (Frobenius norm) with spectrum inside `[lo, hi]`.
    /// Either bound may be infinite.
    pub fn spectral_box_project(&self, lo: f64, hi: f64) -> Result<SymMatrix> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidParams(format!(
                "spectral bounds must satisfy lo <= hi, got [{lo}, {hi}]"
            )));
        }
        let eig = self.eigen()?;
        let clamp = |l: f64| {
            if l <= lo + CLAMP_SNAP {
                lo
            } else if l >= hi - CLAMP_SNAP {
                hi
            } else {
                l
            }
        };
        if eig.eigenvalues.iter().all(|&l| clamp(l) == l) {
            return Ok(self.clone());
        }
        let clamped = eig.eigenvalues.map(clamp);
        let q = &eig.eigenvectors;
        let rebuilt = q * DMatrix::from_diagonal(&clamped) * q.transpose();
        SymMatrix::from_dmatrix(&rebuilt)
    }

    /// Nearest positive semidefinite matrix in Frobenius norm.
    pub fn psd_project(&self) -> Result<SymMatrix> {
        self.spectral_box_project(0.0, f64::INFINITY)
    }

    /// Parses the plain-text matrix format: a line holding `n`, followed by
    /// `n` lines of `n` whitespace-separated reals.
    pub fn parse_text(text: &str) -> Result<SymMatrix> {
        let bad = |msg: String| Error::InvalidParams(msg);
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or_else(|| bad("empty matrix file".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| bad(format!("line {ln}: expected matrix order, found {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| bad(format!("line {ln}: bad number {t:?}"))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(bad(format!("expected {n} matrix rows, found {}", rows.len())));
        }
        SymMatrix::from_rows(&rows)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<SymMatrix> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        SymMatrix::parse_text(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.order);
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Symmetric matrices whose diagonal equals `diag`, as an affine subspace of
/// the embedded space.
pub fn fixed_diagonal_set(diag: &[f64]) -> Result<crate::geometry::ConvexSet> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::InvalidSet("diagonal must have at least one entry".into()));
    }
    let d = embedded_dim(n);
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![0.0; d];
            r[i] = 1.0;
            Point::from_vec(r)
        })
        .collect();
    crate::geometry::ConvexSet::affine(rows, diag.to_vec())
}
