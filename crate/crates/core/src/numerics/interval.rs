use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NumberError, Rational};

/// A certified enclosure `[lo, hi]` of a distance value.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DistInterval {
    lo: Rational,
    hi: Rational,
}

impl DistInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, NumberError> {
        if lo > hi {
            return Err(NumberError::InvertedInterval { lo, hi });
        }
        Ok(DistInterval { lo, hi })
    }

    pub fn exact(value: Rational) -> Self {
        DistInterval { lo: value.clone(), hi: value }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &DistInterval) -> DistInterval {
        DistInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn max(&self, other: &DistInterval) -> DistInterval {
        DistInterval {
            lo: Rational::max_of(&self.lo, &other.lo),
            hi: Rational::max_of(&self.hi, &other.hi),
        }
    }

    pub fn min(&self, other: &DistInterval) -> DistInterval {
        DistInterval {
            lo: Rational::min_of(&self.lo, &other.lo),
            hi: Rational::min_of(&self.hi, &other.hi),
        }
    }

    /// Adds an exactly known offset to both endpoints.
    pub fn shift(&self, offset: &Rational) -> DistInterval {
        DistInterval { lo: &self.lo + offset, hi: &self.hi + offset }
    }
}

impl fmt::Display for DistInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for DistInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> DistInterval {
        DistInterval::new(Rational::frac(lo.0, lo.1), Rational::frac(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn endpoint_arithmetic() {
        assert_eq!(iv((1, 4), (5, 16)).add(&iv((0, 1), (1, 16))), iv((1, 4), (3, 8)));
        assert_eq!(iv((0, 1), (1, 1)).max(&iv((1, 2), (1, 2))), iv((1, 2), (1, 1)));
        assert_eq!(iv((0, 1), (1, 1)).min(&iv((2, 1), (3, 1))), iv((0, 1), (1, 1)));
    }

    #[test]
    fn rejects_inverted() {
        assert!(DistInterval::new(Rational::one(), Rational::zero()).is_err());
        assert!(DistInterval::exact(Rational::frac(2, 3)).is_exact());
    }
}
