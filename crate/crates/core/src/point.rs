//! Points of the ambient Euclidean space.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use crate::error::{check_dim, Error, Result};

/// A coordinate vector in `R^d`.
///
/// Symmetric matrices enter through [`crate::matrix::SymMatrix::embed`], so the
/// Euclidean inner product here is the Frobenius inner product there.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting empty or non-finite input.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParams("point must have at least one coordinate".into()));
        }
        let p = Point { coords };
        p.ensure_finite()?;
        Ok(p)
    }

    pub fn zeros(dim: usize) -> Self {
        Point { coords: vec![0.0; dim] }
    }

    /// Internal constructor for arithmetic results; finiteness is not re-checked.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    pub fn ensure_finite(&self) -> Result<()> {
        match self.coords.iter().position(|c| !c.is_finite()) {
            Some(index) => Err(Error::NonFinite { index }),
            None => Ok(()),
        }
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        check_dim(dim, self.dim())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::from_vec(self.coords.iter().map(|c| s * c).collect())
    }

    /// `a * self + b * other`
    pub fn lincomb(a: f64, x: &Point, b: f64, y: &Point) -> Point {
        Point::from_vec(x.coords.iter().zip(&y.coords).map(|(u, v)| a * u + b * v).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Point {
        Point::from_vec(self.coords.iter().map(|&c| f(c)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point::lincomb(1.0, self, 1.0, rhs)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point::lincomb(1.0, self, -1.0, rhs)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        self.scale(-1.0)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:.10}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand for building points in tests and examples. Panics on invalid input.
#[macro_export]
macro_rules! pt {
    ($($x:expr),+ $(,)?) => {
        $crate::Point::new(vec![$($x as f64),+]).expect("valid point literal")
    };
}
