//! Exact nonnegative rationals used for every distance, radius and label.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {text:?} as a nonnegative rational: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: &'static str,
}

/// A nonnegative rational number in lowest terms.
///
/// Ordering and equality are exact. Accepted textual forms are unsigned
/// integers (`"3"`), unsigned decimals (`"0.25"`) and fractions (`"1/4"`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`. Panics when `denom` is zero.
    pub fn from_ratio(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar(&self.0 * &other.0)
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        Scalar(&self.0 + &other.0)
    }

    /// Always `p/q`, even for integers (`"3/1"`). Used where a single
    /// unambiguous rendering is needed, e.g. canonical codes.
    pub fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Digits after the point when the value has a terminating decimal
    /// expansion, i.e. the reduced denominator is `2^a * 5^b`.
    fn decimal_places(&self) -> Option<usize> {
        let mut d = self.0.denom().clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        let two = BigInt::from(2u32);
        let five = BigInt::from(5u32);
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        d.is_one().then_some(twos.max(fives))
    }
}

impl fmt::Display for Scalar {
    /// Decimal when the expansion terminates, `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decimal_places() {
            Some(0) => write!(f, "{}", self.0.numer()),
            Some(k) => {
                let scale = num_traits::pow(BigInt::from(10u32), k);
                let scaled = self.0.numer() * (scale / self.0.denom());
                let digits = format!("{:0>width$}", scaled.to_string(), width = k + 1);
                let (int, frac) = digits.split_at(digits.len() - k);
                write!(f, "{int}.{frac}")
            }
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let fail = |reason| ParseScalarError {
            text: text.to_string(),
            reason,
        };
        let s = text.trim();
        if let Some((p, q)) = s.split_once('/') {
            if !digits(p) || !digits(q) {
                return Err(fail("expected digits on both sides of '/'"));
            }
            let q: BigInt = q.parse().map_err(|_| fail("bad denominator"))?;
            if q.is_zero() {
                return Err(fail("zero denominator"));
            }
            let p: BigInt = p.parse().map_err(|_| fail("bad numerator"))?;
            return Ok(Scalar(BigRational::new(p, q)));
        }
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if !digits(int) || (s.contains('.') && !digits(frac)) {
            return Err(fail("expected an unsigned integer, decimal or p/q"));
        }
        let numer: BigInt = format!("{int}{frac}").parse().map_err(|_| fail("bad digits"))?;
        let denom = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = BigRational::new(numer, denom);
        debug_assert!(!value.is_negative());
        Ok(Scalar(value))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn decimal_and_fraction_agree() {
        assert_eq!(s("0.5"), s("1/2"));
        assert_eq!(s("2.50"), s("5/2"));
        assert_eq!(s("10/4"), s("2.5"));
        assert_eq!(s("0"), Scalar::zero());
        assert_eq!(s(" 7 "), Scalar::from_integer(7));
    }

    #[test]
    fn rejects_malformed_and_negative() {
        for bad in ["", "-1", "1/0", "a", "1.", ".5", "1/2/3", "1e3", "+2", "0x1"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn display_prefers_decimal_when_it_terminates() {
        assert_eq!(s("3").to_string(), "3");
        assert_eq!(s("0.3").to_string(), "0.3");
        assert_eq!(s("1/100").to_string(), "0.01");
        assert_eq!(s("12.05").to_string(), "12.05");
        assert_eq!(s("1/2").to_string(), "0.5");
        assert_eq!(s("3/8").to_string(), "0.375");
        assert_eq!(s("1/3").to_string(), "1/3");
        assert_eq!(s("4/6").to_string(), "2/3");
        assert_eq!(s("3").to_ratio_string(), "3/1");
    }

    #[test]
    fn ordering_is_exact() {
        assert!(s("1/3") < s("0.3334"));
        assert!(s("1/3") > s("0.3333"));
    }
}
