use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;

/// A rational of the form `mantissa · 2^(-exponent)`, kept canonical: the
/// mantissa is odd unless the exponent is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(mantissa: impl Into<BigInt>, exponent: u64) -> Self {
        let mut mantissa = mantissa.into();
        let mut exponent = exponent;
        if mantissa.is_zero() {
            exponent = 0;
        } else {
            let tz = mantissa.trailing_zeros().unwrap_or(0).min(exponent);
            mantissa >>= tz;
            exponent -= tz;
        }
        Dyadic { mantissa, exponent }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Dyadic::new(value, 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn to_rational(&self) -> Rational {
        Rational::scaled_pow2(self.mantissa.clone(), self.exponent)
    }

    /// Exact conversion; `None` unless the denominator is a power of two.
    pub fn from_rational(x: &Rational) -> Option<Self> {
        let e = x.dyadic_exponent()?;
        Some(Dyadic::new(x.numer().clone(), e))
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }
}

/// Largest dyadic with exponent at most `depth` that does not exceed `x`.
pub fn to_dyadic_within(x: &Rational, depth: u64) -> Dyadic {
    let scaled = x * &Rational::from_integer(BigInt::one() << depth);
    Dyadic::new(scaled.floor(), depth)
}

impl From<&Dyadic> for Rational {
    fn from(d: &Dyadic) -> Rational {
        d.to_rational()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_rational(), f)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rational().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = Rational::deserialize(deserializer)?;
        Dyadic::from_rational(&r)
            .ok_or_else(|| serde::de::Error::custom(format!("{r} is not a dyadic rational")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(12, 4);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        let z = Dyadic::new(0, 9);
        assert_eq!(z.exponent(), 0);
        let i = Dyadic::new(8, 0);
        assert_eq!(i.mantissa(), &BigInt::from(8));
    }

    #[test]
    fn dyadic_floor_examples() {
        assert_eq!(to_dyadic_within(&Rational::frac(1, 3), 2).to_rational(), Rational::frac(1, 4));
        assert_eq!(to_dyadic_within(&Rational::frac(1, 2), 5).to_rational(), Rational::frac(1, 2));
        assert_eq!(to_dyadic_within(&Rational::zero(), 7).to_rational(), Rational::zero());
        assert_eq!(to_dyadic_within(&Rational::frac(-1, 3), 1).to_rational(), Rational::frac(-1, 2));
    }

    #[test]
    fn rational_conversion() {
        assert_eq!(Dyadic::from_rational(&Rational::frac(5, 8)), Some(Dyadic::new(5, 3)));
        assert_eq!(Dyadic::from_rational(&Rational::frac(1, 6)), None);
        assert_eq!(Dyadic::new(5, 3).to_string(), "5/8");
    }
}
