//! An n-dimensional Hilbert-type curve from `J_n = [n−1, n]` onto the cube
//! `I^n = [0, n]^n`.
//!
//! Cells at depth `k` are visited in reflected-Gray-code order. The whole
//! cube is entered at the origin and left at `(n, 0, …, 0)`; every cell's
//! exit corner is the next cell's entry corner, so values at dyadic
//! parameters are exact and the curve is continuous. The one-dimensional
//! curve is the identity `[0, 1] → [0, 1]`.

mod curve;
mod word;

pub use curve::{
    cell_of_index, curve_point, curve_point_exact, curve_point_exact_rational, index_of_cell,
    preimage, CurveCell, ParameterTrack,
};
pub(crate) use curve::cell_side;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("index {index} out of range for n = {n}, depth {depth}")]
    IndexOutOfRange { n: u32, depth: u64, index: BigUint },
    #[error("cell coordinate {value} on axis {axis} out of range at depth {depth}")]
    CoordinateOutOfRange { axis: usize, value: BigUint, depth: u64 },
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: u32, got: usize },
    #[error("parameter {t} outside J_{n} = [{}, {n}]", n - 1)]
    ParameterOutOfRange { n: u32, t: Rational },
    #[error("parameter {0} is not dyadic")]
    NotDyadic(Rational),
    #[error("point {0} lies outside the cube")]
    PointOutsideCube(CubePoint),
}

/// A point of `[0, n]^n` with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CubePoint {
    coords: Vec<Rational>,
}

impl CubePoint {
    /// Checks `0 ≤ x_i ≤ n` where `n` is the number of coordinates.
    pub fn new(coords: Vec<Rational>) -> Result<Self, CurveError> {
        let n = Rational::from_integer(coords.len() as i64);
        let p = CubePoint { coords };
        if p.coords.iter().any(|c| c.is_negative() || c > &n) {
            return Err(CurveError::PointOutsideCube(p));
        }
        Ok(p)
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<Rational>) -> Self {
        CubePoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// `max_i |x_i − y_i|`; zero for empty points.
    pub fn sup_distance(&self, other: &CubePoint) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Closed axis-aligned cube `[lower_i, lower_i + side]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CubeBox {
    lower: CubePoint,
    side: Rational,
}

impl CubeBox {
    pub(crate) fn from_parts(lower: CubePoint, side: Rational) -> Self {
        CubeBox { lower, side }
    }

    pub fn lower(&self) -> &CubePoint {
        &self.lower
    }

    pub fn side(&self) -> &Rational {
        &self.side
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn contains(&self, p: &CubePoint) -> bool {
        p.dim() == self.dim()
            && self
                .lower
                .coords()
                .iter()
                .zip(p.coords())
                .all(|(lo, x)| lo <= x && *x <= lo + &self.side)
    }

    pub fn contains_box(&self, other: &CubeBox) -> bool {
        other.dim() == self.dim()
            && self.lower.coords().iter().zip(other.lower.coords()).all(|(a, b)| {
                a <= b && b + &other.side <= a + &self.side
            })
    }
}

impl fmt::Display for CubeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "box lower {} side {}", self.lower, self.side)
    }
}
