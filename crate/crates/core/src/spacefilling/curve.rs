use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::word::{Orientation, Word};
use super::{CubeBox, CubePoint, CurveError};
use crate::numerics::{Dyadic, Rational};

macro_rules! by_width {
    ($n:expr, $func:ident($($arg:expr),*)) => {
        if $n <= 64 {
            $func::<u64>($($arg),*)
        } else {
            $func::<BigUint>($($arg),*)
        }
    };
}

/// A depth-`k` cell of the curve over `[0, n]^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCell {
    pub dim: u32,
    pub depth: u64,
    pub index: BigUint,
    pub cell_coords: Vec<BigUint>,
    pub entry: CubePoint,
    pub exit: CubePoint,
}

impl CurveCell {
    /// Side length `n · 2^(-depth)`.
    pub fn side(&self) -> Rational {
        cell_side(self.dim, self.depth)
    }

    pub fn cell_box(&self) -> CubeBox {
        cell_box(self.dim, self.depth, &self.cell_coords)
    }
}

pub(crate) fn cell_side(n: u32, depth: u64) -> Rational {
    Rational::scaled_pow2(n, depth)
}

fn cell_box(n: u32, depth: u64, coords: &[BigUint]) -> CubeBox {
    let side = cell_side(n, depth);
    let lower = coords.iter().map(|c| &Rational::from(c.clone()) * &side).collect();
    CubeBox::from_parts(CubePoint::from_coords_unchecked(lower), side)
}

fn corner<W: Word>(n: u32, depth: u64, coords: &[BigUint], bits: &W) -> CubePoint {
    let side = cell_side(n, depth);
    let pts = coords
        .iter()
        .enumerate()
        .map(|(c, x)| {
            let mut v = x.clone();
            if bits.bit(n - 1 - c as u32) {
                v += 1u32;
            }
            &Rational::from(v) * &side
        })
        .collect();
    CubePoint::from_coords_unchecked(pts)
}

/// Root-to-cell walk that keeps the integer grid position, index and
/// orientation of the current cell.
#[derive(Clone, Debug)]
struct Descent<W> {
    n: u32,
    depth: u64,
    orientation: Orientation<W>,
    coords: Vec<BigUint>,
    index: BigUint,
}

impl<W: Word> Descent<W> {
    fn root(n: u32) -> Self {
        Descent {
            n,
            depth: 0,
            orientation: Orientation::root(n),
            coords: vec![BigUint::zero(); n as usize],
            index: BigUint::zero(),
        }
    }

    fn step(&mut self, w: &W) {
        let n = self.n;
        let pos = self.orientation.child_position(w, n);
        for (c, x) in self.coords.iter_mut().enumerate() {
            *x <<= 1u32;
            if pos.bit(n - 1 - c as u32) {
                *x += 1u32;
            }
        }
        self.index <<= n;
        self.index += w.to_biguint();
        self.orientation = self.orientation.child(w, n);
        self.depth += 1;
    }

    fn cell(&self) -> CurveCell {
        CurveCell {
            dim: self.n,
            depth: self.depth,
            index: self.index.clone(),
            cell_coords: self.coords.clone(),
            entry: corner(self.n, self.depth, &self.coords, &self.orientation.entry),
            exit: corner(self.n, self.depth, &self.coords, &self.orientation.exit()),
        }
    }
}

fn check_dim(n: u32) -> Result<(), CurveError> {
    if n == 0 {
        Err(CurveError::ZeroDimension)
    } else {
        Ok(())
    }
}

fn index_bits(n: u32, k: u64) -> u64 {
    u64::from(n) * k
}

/// The `i`-th cell of the depth-`k` traversal of `[0, n]^n`.
pub fn cell_of_index(n: u32, k: u64, i: &BigUint) -> Result<CurveCell, CurveError> {
    check_dim(n)?;
    if i.bits() > index_bits(n, k) {
        return Err(CurveError::IndexOutOfRange { n, depth: k, index: i.clone() });
    }
    Ok(by_width!(n, cell_of_index_in(n, k, i)))
}

fn cell_of_index_in<W: Word>(n: u32, k: u64, i: &BigUint) -> CurveCell {
    let mut descent = Descent::<W>::root(n);
    let digit_mask = (BigUint::one() << n) - 1u32;
    for level in (0..k).rev() {
        let digit = (i >> (u64::from(n) * level)) & &digit_mask;
        descent.step(&W::from_biguint(&digit));
    }
    descent.cell()
}

/// Position along the depth-`k` traversal of the cell at `cell_coords`.
pub fn index_of_cell(n: u32, k: u64, cell_coords: &[BigUint]) -> Result<BigUint, CurveError> {
    check_dim(n)?;
    if cell_coords.len() != n as usize {
        return Err(CurveError::DimensionMismatch { expected: n, got: cell_coords.len() });
    }
    if let Some((axis, c)) = cell_coords.iter().enumerate().find(|(_, c)| c.bits() > k) {
        return Err(CurveError::CoordinateOutOfRange { axis, value: c.clone(), depth: k });
    }
    Ok(by_width!(n, index_of_cell_in(n, k, cell_coords)))
}

fn index_of_cell_in<W: Word>(n: u32, k: u64, cell_coords: &[BigUint]) -> BigUint {
    let mut orientation = Orientation::<W>::root(n);
    let mut index = BigUint::zero();
    for level in (0..k).rev() {
        let mut pos = W::zero_word();
        for (c, x) in cell_coords.iter().enumerate() {
            if x.bit(level) {
                pos.set_bit(n - 1 - c as u32);
            }
        }
        let w = orientation.child_rank(&pos, n);
        index <<= n;
        index += w.to_biguint();
        orientation = orientation.child(&w, n);
    }
    index
}

fn check_param(n: u32, t: &Rational) -> Result<Rational, CurveError> {
    check_dim(n)?;
    let s = t - &Rational::from_integer(i64::from(n) - 1);
    if s.is_negative() || s > Rational::one() {
        return Err(CurveError::ParameterOutOfRange { n, t: t.clone() });
    }
    Ok(s)
}

/// Exact curve value `f_n(t)` at a dyadic parameter `t ∈ [n−1, n]`.
pub fn curve_point_exact(n: u32, t: &Dyadic) -> Result<CubePoint, CurveError> {
    let s = check_param(n, &t.to_rational())?;
    let e = s.dyadic_exponent().expect("difference of dyadics is dyadic");
    let k = e.div_ceil(u64::from(n));
    let i = s.numer().magnitude() << (index_bits(n, k) - e);
    if i.bits() > index_bits(n, k) {
        // s = 1: the exit corner of the whole cube.
        return Ok(CubePoint::from_coords_unchecked(
            (0..n)
                .map(|c| if c == 0 { Rational::from_integer(i64::from(n)) } else { Rational::zero() })
                .collect(),
        ));
    }
    Ok(cell_of_index(n, k, &i)?.entry)
}

/// [`curve_point_exact`] for rational input, rejecting non-dyadic parameters.
pub fn curve_point_exact_rational(n: u32, t: &Rational) -> Result<CubePoint, CurveError> {
    let d = Dyadic::from_rational(t).ok_or_else(|| CurveError::NotDyadic(t.clone()))?;
    curve_point_exact(n, &d)
}

/// Box of side `n·2^(-k)` containing `f_n(t)`: the depth-`k` cell whose
/// parameter interval contains `t`, taking the lower index on shared
/// endpoints.
pub fn curve_point(n: u32, t: &Rational, k: u64) -> Result<CubeBox, CurveError> {
    let mut track = ParameterTrack::new(n, t)?;
    track.advance_to(k);
    Ok(track.cell_box())
}

/// Dyadic `t ∈ [n−1, n]` whose curve value is within `n·2^(-k)` of `y` in
/// the sup metric. Descends `k` levels, each time taking the lowest-index
/// child whose closed box contains `y`, and returns the start of the final
/// parameter interval.
pub fn preimage(n: u32, y: &CubePoint, k: u64) -> Result<Dyadic, CurveError> {
    check_dim(n)?;
    if y.dim() != n as usize {
        return Err(CurveError::DimensionMismatch { expected: n, got: y.dim() });
    }
    let top = Rational::from_integer(i64::from(n));
    if y.coords().iter().any(|c| c.is_negative() || c > &top) {
        return Err(CurveError::PointOutsideCube(y.clone()));
    }
    Ok(by_width!(n, preimage_in(n, y, k)))
}

fn preimage_in<W: Word>(n: u32, y: &CubePoint, k: u64) -> Dyadic {
    let index = preimage_descent::<W>(n, y, k);
    let mut numerator = num_bigint::BigInt::from(n - 1);
    numerator <<= index_bits(n, k);
    numerator += num_bigint::BigInt::from(index);
    Dyadic::new(numerator, index_bits(n, k))
}

fn preimage_descent<W: Word>(n: u32, y: &CubePoint, k: u64) -> BigUint {
    let n_rat = Rational::from_integer(i64::from(n));
    // y_c / n scaled by 2^(depth+1) at each level, compared with 2·cell + 1.
    let mut scaled: Vec<Rational> = y.coords().iter().map(|c| c / &n_rat).collect();
    let two = Rational::from_integer(2);
    let mut descent = Descent::<W>::root(n);
    for _ in 0..k {
        // Per axis: Some(bit) if forced, None if y sits on the midplane.
        let mut forced = W::zero_word();
        let mut free = W::zero_word();
        for (c, v) in scaled.iter_mut().enumerate() {
            *v = &*v * &two;
            let mid = Rational::from(descent.coords[c].clone() * 2u32 + 1u32);
            let bit = n - 1 - c as u32;
            match (*v).cmp(&mid) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Greater => forced.set_bit(bit),
                std::cmp::Ordering::Equal => free.set_bit(bit),
            }
        }
        let w = lowest_rank_child(&descent.orientation, &forced, &free, n);
        descent.step(&w);
    }
    descent.index
}

/// Smallest child rank `w` whose position agrees with `forced` on every
/// axis outside `free`.
fn lowest_rank_child<W: Word>(o: &Orientation<W>, forced: &W, free: &W, n: u32) -> W {
    // position = rotl(gray(w), dir+1) ^ entry, so gray(w) = rotr(position ^ entry, dir+1).
    let gray_fixed = forced.xor(&o.entry).rotr(o.dir + 1, n);
    let gray_free = free.rotr(o.dir + 1, n);
    let mut w = W::zero_word();
    let mut prev = false;
    for j in (0..n).rev() {
        let g = if gray_free.bit(j) { prev } else { gray_fixed.bit(j) };
        let bit = g ^ prev;
        if bit {
            w.set_bit(j);
        }
        prev = bit;
    }
    w
}

#[derive(Clone, Debug)]
struct Track<W> {
    descent: Descent<W>,
    /// Remaining parameter `rem / den` within the current cell, in `(0, 1]`,
    /// or zero when tracking the curve start.
    rem: BigUint,
    den: BigUint,
}

impl<W: Word> Track<W> {
    fn advance(&mut self) {
        let n = self.descent.n;
        let w = if self.rem.is_zero() {
            W::zero_word()
        } else {
            let x = &self.rem << n;
            let digit = (&x - 1u32) / &self.den;
            self.rem = x - &digit * &self.den;
            W::from_biguint(&digit)
        };
        self.descent.step(&w);
    }
}

#[derive(Clone, Debug)]
enum TrackInner {
    Small(Track<u64>),
    Large(Track<BigUint>),
}

/// Follows the nested cells containing a fixed parameter `t ∈ [n−1, n]`,
/// one depth at a time. At a shared endpoint the lower-index cell is kept.
#[derive(Clone, Debug)]
pub struct ParameterTrack {
    n: u32,
    inner: TrackInner,
}

impl ParameterTrack {
    pub fn new(n: u32, t: &Rational) -> Result<Self, CurveError> {
        let s = check_param(n, t)?;
        let rem = s.numer().magnitude().clone();
        let den = s.denom().magnitude().clone();
        let inner = if n <= 64 {
            TrackInner::Small(Track { descent: Descent::root(n), rem, den })
        } else {
            TrackInner::Large(Track { descent: Descent::root(n), rem, den })
        };
        Ok(ParameterTrack { n, inner })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn depth(&self) -> u64 {
        match &self.inner {
            TrackInner::Small(t) => t.descent.depth,
            TrackInner::Large(t) => t.descent.depth,
        }
    }

    pub fn advance(&mut self) {
        match &mut self.inner {
            TrackInner::Small(t) => t.advance(),
            TrackInner::Large(t) => t.advance(),
        }
    }

    pub fn advance_to(&mut self, depth: u64) {
        while self.depth() < depth {
            self.advance();
        }
    }

    /// Integer grid position of the current cell.
    pub fn coords(&self) -> &[BigUint] {
        match &self.inner {
            TrackInner::Small(t) => &t.descent.coords,
            TrackInner::Large(t) => &t.descent.coords,
        }
    }

    pub fn cell(&self) -> CurveCell {
        match &self.inner {
            TrackInner::Small(t) => t.descent.cell(),
            TrackInner::Large(t) => t.descent.cell(),
        }
    }

    pub fn cell_box(&self) -> CubeBox {
        cell_box(self.n, self.depth(), self.coords())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn coords_of(cell: &CurveCell) -> Vec<u64> {
        cell.cell_coords.iter().map(|c| u64::try_from(c).unwrap()).collect()
    }

    fn pt(v: &[(i64, i64)]) -> CubePoint {
        CubePoint::from_coords_unchecked(v.iter().map(|&(p, q)| Rational::frac(p, q)).collect())
    }

    #[test]
    fn two_dim_first_level_order() {
        let seq: Vec<_> = (0..4).map(|i| coords_of(&cell_of_index(2, 1, &big(i)).unwrap())).collect();
        assert_eq!(seq, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn one_dim_is_identity() {
        let cell = cell_of_index(1, 2, &big(2)).unwrap();
        assert_eq!(coords_of(&cell), vec![2]);
        let b = cell.cell_box();
        assert_eq!(b.lower().coords()[0], Rational::frac(1, 2));
        assert_eq!(b.side(), &Rational::frac(1, 4));
        assert_eq!(index_of_cell(1, 3, &[big(5)]).unwrap(), big(5));
    }

    #[test]
    fn three_dim_first_level_is_gray() {
        let cells: Vec<_> = (0..8).map(|i| coords_of(&cell_of_index(3, 1, &big(i)).unwrap())).collect();
        for pair in cells.windows(2) {
            let diff: u64 = pair[0].iter().zip(&pair[1]).map(|(a, b)| a.abs_diff(*b)).sum();
            assert_eq!(diff, 1, "{pair:?}");
        }
        assert_eq!(cells[0], vec![0, 0, 0]);
        assert_eq!(cells[7], vec![1, 0, 0]);
    }

    #[test]
    fn index_of_cell_examples() {
        assert_eq!(index_of_cell(2, 1, &[big(0), big(0)]).unwrap(), big(0));
        assert_eq!(index_of_cell(2, 1, &[big(1), big(0)]).unwrap(), big(3));
    }

    #[test]
    fn out_of_range_inputs() {
        assert!(matches!(cell_of_index(2, 1, &big(4)), Err(CurveError::IndexOutOfRange { .. })));
        assert!(matches!(
            index_of_cell(2, 1, &[big(2), big(0)]),
            Err(CurveError::CoordinateOutOfRange { axis: 0, .. })
        ));
        assert!(matches!(index_of_cell(2, 1, &[big(0)]), Err(CurveError::DimensionMismatch { .. })));
        assert!(matches!(cell_of_index(0, 1, &big(0)), Err(CurveError::ZeroDimension)));
    }

    #[test]
    fn exact_values_at_ends() {
        assert_eq!(curve_point_exact(2, &Dyadic::from_integer(1)).unwrap(), pt(&[(0, 1), (0, 1)]));
        assert_eq!(curve_point_exact(2, &Dyadic::from_integer(2)).unwrap(), pt(&[(2, 1), (0, 1)]));
        assert_eq!(curve_point_exact(1, &Dyadic::new(1, 2)).unwrap(), pt(&[(1, 4)]));
        assert!(matches!(
            curve_point_exact_rational(1, &Rational::frac(3, 10)),
            Err(CurveError::NotDyadic(_))
        ));
        assert!(matches!(
            curve_point_exact(2, &Dyadic::new(1, 1)),
            Err(CurveError::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn exact_value_matches_cell_entry() {
        // t = 1 + 2/4 is the start of depth-1 cell 2, i.e. the cell at (1,1).
        assert_eq!(curve_point_exact(2, &Dyadic::new(3, 1)).unwrap(), pt(&[(1, 1), (1, 1)]));
    }

    #[test]
    fn enclosure_examples() {
        let b = curve_point(1, &Rational::frac(1, 3), 4).unwrap();
        assert_eq!(b.lower().coords()[0], Rational::frac(5, 16));
        assert_eq!(b.side(), &Rational::frac(1, 16));
        assert!(b.contains(&pt(&[(1, 3)])));

        let b = curve_point(2, &Rational::one(), 3).unwrap();
        assert_eq!(b.lower(), &pt(&[(0, 1), (0, 1)]));
        assert_eq!(b.side(), &Rational::frac(1, 4));

        // s = 1/2 is the boundary between parameter cells 1 and 2; the lower one wins.
        let mut track = ParameterTrack::new(2, &Rational::frac(3, 2)).unwrap();
        track.advance_to(1);
        assert_eq!(track.cell().index, big(1));
        assert!(track.cell_box().contains(&curve_point_exact(2, &Dyadic::new(3, 1)).unwrap()));
    }

    #[test]
    fn preimage_examples() {
        let t = preimage(2, &pt(&[(0, 1), (0, 1)]), 6).unwrap();
        assert_eq!(t, Dyadic::from_integer(1));

        let y = pt(&[(3, 10)]);
        let t = preimage(1, &y, 5).unwrap();
        let diff = (t.to_rational() - Rational::frac(3, 10)).abs();
        assert!(diff < Rational::pow2_neg(5));
        let residual = curve_point_exact(1, &t).unwrap().sup_distance(&y);
        assert!(residual <= Rational::pow2_neg(5));

        let y = pt(&[(2, 1), (0, 1)]);
        let t = preimage(2, &y, 8).unwrap();
        assert!(t.to_rational() >= Rational::from_integer(2) - Rational::pow2_neg(16));
        assert!(t.to_rational() <= Rational::from_integer(2));
        let residual = curve_point_exact(2, &t).unwrap().sup_distance(&y);
        assert!(residual <= Rational::from_integer(2) * Rational::pow2_neg(8));
    }

    #[test]
    fn preimage_rejects_outside_points() {
        assert!(matches!(preimage(2, &pt(&[(5, 2), (0, 1)]), 3), Err(CurveError::PointOutsideCube(_))));
        assert!(matches!(preimage(2, &pt(&[(1, 2)]), 3), Err(CurveError::DimensionMismatch { .. })));
    }

    #[test]
    fn greedy_child_choice_matches_brute_force() {
        // Oracle: scan all ranks in order and keep the first whose position fits.
        for n in 1..=5u32 {
            let full = (1u64 << n) - 1;
            for entry in 0..=full {
                for dir in 0..n {
                    let o = Orientation::<u64> { entry, dir };
                    for free in 0..=full {
                        for forced in 0..=full {
                            let forced = forced & !free;
                            let expect = (0..=full)
                                .find(|w| (o.child_position(w, n) ^ forced) & !free == 0)
                                .unwrap();
                            assert_eq!(lowest_rank_child(&o, &forced, &free, n), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wide_dimension_uses_big_words() {
        let n = 70;
        let last = (BigUint::one() << n) - 1u32;
        let first = cell_of_index(n, 1, &BigUint::zero()).unwrap();
        let end = cell_of_index(n, 1, &last).unwrap();
        assert!(first.cell_coords.iter().all(Zero::is_zero));
        assert_eq!(end.exit.coords()[0], Rational::from_integer(70));
        assert!(end.exit.coords()[1..].iter().all(Rational::is_zero));
        let mid = cell_of_index(n, 1, &(BigUint::one() << 40)).unwrap();
        assert_eq!(index_of_cell(n, 1, &mid.cell_coords).unwrap(), BigUint::one() << 40);
    }
}
