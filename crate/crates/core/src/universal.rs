//! The metric on ℝ: per-interval pullback metrics `d_n` on `J_n = [n−1, n]`
//! glued end to end, with the usual metric glued on at 0 for `x ≤ 0`.
//!
//! For `x ≤ y` in `J_m` and `J_n` with `m < n`,
//! `d(x, y) = d_m(x, m) + Σ_{m<k<n} d_k(k−1, k) + d_n(n−1, y)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{DistInterval, Dyadic, Rational};
use crate::spacefilling::{cell_side, curve_point_exact, CurveError, ParameterTrack};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniversalError {
    #[error("negative input {0} to the metric combinator")]
    NegativeInput(Rational),
    #[error("eps must be positive, got {0}")]
    NonPositiveEps(Rational),
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(Rational),
    #[error("{x} is not in J_{n}")]
    OutsideInterval { n: u32, x: Rational },
    #[error("interval index must be at least 1")]
    ZeroInterval,
    #[error("interval index for {0} is too large")]
    IndexTooLarge(Rational),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A point of the carrier ℝ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealParam(Rational);

impl RealParam {
    pub fn new(value: Rational) -> Self {
        RealParam(value)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl From<Rational> for RealParam {
    fn from(v: Rational) -> Self {
        RealParam(v)
    }
}

impl From<&Dyadic> for RealParam {
    fn from(v: &Dyadic) -> Self {
        RealParam(v.to_rational())
    }
}

impl fmt::Display for RealParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for RealParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Index `m ≥ 1` of the unit interval `J_m = [m−1, m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalIndex(u32);

impl IntervalIndex {
    pub fn new(m: u32) -> Result<Self, UniversalError> {
        if m == 0 {
            Err(UniversalError::ZeroInterval)
        } else {
            Ok(IntervalIndex(m))
        }
    }

    /// The interval hosting a non-negative `x`; an integer `x ≥ 1` is
    /// assigned to `J_x` rather than `J_{x+1}`.
    pub fn containing(x: &Rational) -> Option<Result<Self, UniversalError>> {
        if x.is_negative() {
            return None;
        }
        let m = x.ceil().to_u32().map(|m| m.max(1));
        Some(m.map(IntervalIndex).ok_or_else(|| UniversalError::IndexTooLarge(x.clone())))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn contains(self, x: &Rational) -> bool {
        let hi = Rational::from_integer(i64::from(self.0));
        let lo = &hi - &Rational::one();
        &lo <= x && x <= &hi
    }
}

/// `max(min(d, eps), big_d)`: the metric built from a source distance `d`
/// and a target distance `big_d`.
pub fn d_eps_combine(minuend: &Rational, eps: &Rational, big_d: &Rational) -> Result<Rational, UniversalError> {
    if minuend.is_negative() {
        return Err(UniversalError::NegativeInput(minuend.clone()));
    }
    if big_d.is_negative() {
        return Err(UniversalError::NegativeInput(big_d.clone()));
    }
    if !eps.is_positive() {
        return Err(UniversalError::NonPositiveEps(eps.clone()));
    }
    Ok(Rational::max_of(&Rational::min_of(minuend, eps), big_d))
}

fn check_tol(tol: &Rational) -> Result<(), UniversalError> {
    if tol.is_positive() {
        Ok(())
    } else {
        Err(UniversalError::NonPositiveTolerance(tol.clone()))
    }
}

fn check_member(n: u32, x: &Rational) -> Result<(), UniversalError> {
    if IntervalIndex::new(n)?.contains(x) {
        Ok(())
    } else {
        Err(UniversalError::OutsideInterval { n, x: x.clone() })
    }
}

/// Whether [`interval_metric`] answers with a zero-width interval without
/// refining curve boxes.
fn resolves_exactly(n: u32, x: &Rational, y: &Rational) -> bool {
    n == 1 || x == y || (x.dyadic_exponent().is_some() && y.dyadic_exponent().is_some())
}

/// Certified enclosure of `d_n(x, y) = max(min(|x−y|, 1/n), D(f_n(x), f_n(y)))`
/// of width at most `tol`.
pub fn interval_metric(n: u32, x: &RealParam, y: &RealParam, tol: &Rational) -> Result<DistInterval, UniversalError> {
    check_tol(tol)?;
    check_member(n, x.value())?;
    check_member(n, y.value())?;
    let (a, b) = if x <= y { (x.value(), y.value()) } else { (y.value(), x.value()) };
    if a == b {
        return Ok(DistInterval::exact(Rational::zero()));
    }
    let gap = b - a;
    if n == 1 {
        // f_1 is the identity, so d_1 is the usual metric.
        return Ok(DistInterval::exact(gap));
    }
    let eps = Rational::from_integer(i64::from(n)).recip();
    let near = Rational::min_of(&gap, &eps);

    if let (Some(da), Some(db)) = (Dyadic::from_rational(a), Dyadic::from_rational(b)) {
        let big_d = curve_point_exact(n, &da)?.sup_distance(&curve_point_exact(n, &db)?);
        return Ok(DistInterval::exact(Rational::max_of(&near, &big_d)));
    }

    let mut ta = ParameterTrack::new(n, a)?;
    let mut tb = ParameterTrack::new(n, b)?;
    loop {
        ta.advance();
        tb.advance();
        let spread = max_coord_gap(ta.coords(), tb.coords());
        let side = cell_side(n, ta.depth());
        let d_lo = if spread == BigUint::ZERO {
            Rational::zero()
        } else {
            &Rational::from(&spread - 1u32) * &side
        };
        let d_hi = &Rational::from(spread + 1u32) * &side;
        if near >= d_hi {
            return Ok(DistInterval::exact(near));
        }
        let lo = Rational::max_of(&near, &d_lo);
        if &(&d_hi - &lo) <= tol {
            return Ok(DistInterval::new(lo, d_hi).expect("lo <= hi"));
        }
    }
}

fn max_coord_gap(p: &[BigUint], q: &[BigUint]) -> BigUint {
    p.iter()
        .zip(q)
        .map(|(a, b)| if a >= b { a - b } else { b - a })
        .max()
        .unwrap_or_default()
}

/// `d_k(k−1, k)`, the cost of crossing `J_k` end to end, evaluated from the
/// curve's end points.
pub fn bridge_cost(k: u32) -> Result<Rational, UniversalError> {
    IntervalIndex::new(k)?;
    let start = curve_point_exact(k, &Dyadic::from_integer(k - 1))?;
    let end = curve_point_exact(k, &Dyadic::from_integer(k))?;
    let eps = Rational::from_integer(i64::from(k)).recip();
    d_eps_combine(&Rational::one(), &eps, &start.sup_distance(&end))
}

/// Certified enclosure of `d(x, y)` of width at most `tol`.
pub fn universal_dist(x: &RealParam, y: &RealParam, tol: &Rational) -> Result<DistInterval, UniversalError> {
    check_tol(tol)?;
    let (a, b) = if x <= y { (x.value(), y.value()) } else { (y.value(), x.value()) };
    if !b.is_positive() {
        return Ok(DistInterval::exact(b - a));
    }
    if a.is_negative() {
        let from_origin = nonnegative_dist(&Rational::zero(), None, b, tol)?;
        return Ok(from_origin.shift(&-a));
    }
    nonnegative_dist(a, None, b, tol)
}

/// [`universal_dist`] with `x` explicitly assigned to `J_via`. For an
/// integer `x = m ≥ 1` both `J_m` and `J_{m+1}` are valid and give the same
/// enclosure. Requires `0 ≤ x ≤ y`.
pub fn universal_dist_via(x: &RealParam, via: u32, y: &RealParam, tol: &Rational) -> Result<DistInterval, UniversalError> {
    check_tol(tol)?;
    check_member(via, x.value())?;
    if y < x {
        return Err(UniversalError::OutsideInterval { n: via, x: y.value().clone() });
    }
    nonnegative_dist(x.value(), Some(via), y.value(), tol)
}

fn nonnegative_dist(a: &Rational, via: Option<u32>, b: &Rational, tol: &Rational) -> Result<DistInterval, UniversalError> {
    let host = |v: &Rational| IntervalIndex::containing(v).expect("non-negative").map(IntervalIndex::get);
    let m = match via {
        Some(m) => m,
        None => host(a)?,
    };
    let n = host(b)?;
    if m >= n {
        // b ≥ a lies in J_n, and a ∈ J_m with m ≥ n forces both into J_n.
        return interval_metric(n, &a.clone().into(), &b.clone().into(), tol);
    }
    let left_end = Rational::from_integer(i64::from(m));
    let right_start = Rational::from_integer(i64::from(n) - 1);
    let left_exact = resolves_exactly(m, a, &left_end);
    let right_exact = resolves_exactly(n, &right_start, b);
    let (left_tol, right_tol) = match (left_exact, right_exact) {
        (false, false) => {
            let half = tol / &Rational::from_integer(2);
            (half.clone(), half)
        }
        _ => (tol.clone(), tol.clone()),
    };
    let left = interval_metric(m, &a.clone().into(), &left_end.into(), &left_tol)?;
    let right = interval_metric(n, &right_start.into(), &b.clone().into(), &right_tol)?;
    let mut bridges = Rational::zero();
    for k in m + 1..n {
        bridges += &bridge_cost(k)?;
    }
    Ok(left.add(&right).shift(&bridges))
}
