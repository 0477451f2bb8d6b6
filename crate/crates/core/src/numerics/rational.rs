use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::NumberError;

/// An exact rational number in lowest terms with a positive denominator.
///
/// Serialized as a decimal integer string when the denominator is one and as
/// `"p/q"` otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self, NumberError> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(NumberError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numerator.into(), den)))
    }

    /// Panics on a zero denominator; intended for literals in code and tests.
    pub fn frac(numerator: i64, denominator: i64) -> Self {
        Self::new(numerator, denominator).expect("nonzero denominator")
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `2^(-exponent)`.
    pub fn pow2_neg(exponent: u64) -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::one() << exponent))
    }

    /// `value * 2^(-exponent)`.
    pub fn scaled_pow2(value: impl Into<BigInt>, exponent: u64) -> Self {
        Rational(BigRational::new(value.into(), BigInt::one() << exponent))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// Exponent `e` with `denom = 2^e`, if the value is dyadic.
    pub fn dyadic_exponent(&self) -> Option<u64> {
        let den = self.0.denom();
        let e = den.trailing_zeros().unwrap_or(0);
        if (den >> e).is_one() {
            Some(e)
        } else {
            None
        }
    }

    pub fn min_of(a: &Rational, b: &Rational) -> Rational {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &Rational, b: &Rational) -> Rational {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Lossy conversion for human-facing summaries only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest `k ≥ 0` with `2^(-k) ≤ self`. Requires `self > 0`.
    pub fn log2_ceil_recip(&self) -> u64 {
        assert!(self.is_positive());
        // 2^-k <= p/q  <=>  q <= p * 2^k
        let p = self.numer().magnitude().clone();
        let q = self.denom().magnitude().clone();
        let mut k = 0u64;
        if q > p {
            let qb = q.bits();
            let pb = p.bits();
            k = qb.saturating_sub(pb).saturating_sub(1);
            while (&p << k) < q {
                k += 1;
            }
        }
        k
    }
}

/// Reads an exact rational from a decimal literal (`"2.5"`, `"1e-9"`), an
/// integer (`"3"`) or a fraction (`"p/q"`).
pub fn parse_number(text: &str) -> Result<Rational, NumberError> {
    let malformed = || NumberError::Malformed(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(malformed());
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());

    let value = if let Some((p, q)) = body.split_once('/') {
        if !digits(p) || !digits(q) {
            return Err(malformed());
        }
        let p: BigInt = p.parse().map_err(|_| malformed())?;
        let q: BigInt = q.parse().map_err(|_| malformed())?;
        Rational::new(p, q)?
    } else {
        let (mantissa, exp) = match body.find(['e', 'E']) {
            Some(pos) => {
                let e = &body[pos + 1..];
                let (eneg, edigits) = match e.as_bytes().first() {
                    Some(b'-') => (true, &e[1..]),
                    Some(b'+') => (false, &e[1..]),
                    _ => (false, e),
                };
                if !digits(edigits) {
                    return Err(malformed());
                }
                let mag: i64 = edigits.parse().map_err(|_| malformed())?;
                (&body[..pos], if eneg { -mag } else { mag })
            }
            None => (body, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => {
                if !digits(f) {
                    return Err(malformed());
                }
                (i, f)
            }
            None => (mantissa, ""),
        };
        if !digits(int_part) {
            return Err(malformed());
        }
        let all: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| malformed())?;
        let scale = exp - frac_part.len() as i64;
        let ten = BigInt::from(10u32);
        if scale >= 0 {
            Rational::from_integer(all * num_traits::pow(ten, scale as usize))
        } else {
            Rational::new(all, num_traits::pow(ten, (-scale) as usize))?
        }
    };
    Ok(if negative { -value } else { value })
}

impl FromStr for Rational {
    type Err = NumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_number(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl de::Visitor<'_> for Visitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational number string or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                parse_number(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }

            fn visit_f64<E: de::Error>(self, _: f64) -> Result<Rational, E> {
                Err(E::custom(
                    "floating-point literals are not accepted; quote the number as a string",
                ))
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigUint> for Rational {
    fn from(v: BigUint) -> Self {
        Rational::from_integer(BigInt::from_biguint(Sign::Plus, v))
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_number(s).unwrap()
    }

    #[test]
    fn parses_literals_exactly() {
        assert_eq!(q("0.3"), Rational::frac(3, 10));
        assert_eq!(q("1/3"), Rational::frac(1, 3));
        assert_eq!(q("2"), Rational::from_integer(2));
        assert_eq!(q("-2.50"), Rational::frac(-5, 2));
        assert_eq!(q("1e-9"), Rational::new(1, 1_000_000_000).unwrap());
        assert_eq!(q("2.5E2"), Rational::from_integer(250));
        assert_eq!(q("6/4"), Rational::frac(3, 2));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "abc", "1/", "/2", "1.", ".5", "1e", "1/-2", "--1", "1.2.3", "0x10", "1 /2"] {
            assert!(
                matches!(parse_number(bad), Err(NumberError::Malformed(_))),
                "{bad:?} should be malformed"
            );
        }
        assert_eq!(parse_number("3/0"), Err(NumberError::ZeroDenominator));
    }

    #[test]
    fn display_uses_canonical_form() {
        assert_eq!(Rational::frac(6, 4).to_string(), "3/2");
        assert_eq!(Rational::frac(-4, 2).to_string(), "-2");
        assert_eq!(Rational::frac(1, -3).to_string(), "-1/3");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(Rational::frac(7, 2).floor(), BigInt::from(3));
        assert_eq!(Rational::frac(7, 2).ceil(), BigInt::from(4));
        assert_eq!(Rational::frac(-7, 2).floor(), BigInt::from(-4));
        assert_eq!(Rational::frac(-7, 2).ceil(), BigInt::from(-3));
        assert_eq!(Rational::from_integer(5).ceil(), BigInt::from(5));
    }

    #[test]
    fn log2_of_reciprocal() {
        assert_eq!(Rational::one().log2_ceil_recip(), 0);
        assert_eq!(Rational::from_integer(7).log2_ceil_recip(), 0);
        assert_eq!(Rational::frac(1, 2).log2_ceil_recip(), 1);
        assert_eq!(Rational::frac(1, 3).log2_ceil_recip(), 2);
        assert_eq!(Rational::frac(1, 4).log2_ceil_recip(), 2);
        assert_eq!(q("1e-9").log2_ceil_recip(), 30);
    }

    #[test]
    fn dyadic_exponent_detection() {
        assert_eq!(Rational::frac(3, 8).dyadic_exponent(), Some(3));
        assert_eq!(Rational::from_integer(3).dyadic_exponent(), Some(0));
        assert_eq!(Rational::frac(1, 3).dyadic_exponent(), None);
        assert_eq!(Rational::frac(1, 12).dyadic_exponent(), None);
    }

    #[test]
    fn serde_round_trip() {
        let v = vec![Rational::frac(3, 7), Rational::from_integer(-2)];
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["3/7","-2"]"#);
        let back: Vec<Rational> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        let ints: Vec<Rational> = serde_json::from_str("[1, 0]").unwrap();
        assert_eq!(ints, vec![Rational::one(), Rational::zero()]);
        assert!(serde_json::from_str::<Vec<Rational>>("[0.5]").is_err());
    }
}
