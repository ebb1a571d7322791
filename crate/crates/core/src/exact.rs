//! Exact decimal and rational numbers for instance data.
//!
//! Values are stored as arbitrary-precision rationals. The string form is a
//! plain decimal (`"12"`, `"0.375"`, `"1e-9"`) whenever the value has a
//! terminating decimal expansion, and `"p/q"` otherwise (`"1/24"`).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decimal(BigRational);

impl Decimal {
    pub fn zero() -> Self {
        Decimal(BigRational::zero())
    }

    pub fn one() -> Self {
        Decimal(BigRational::one())
    }

    pub fn from_integer<T: Into<BigInt>>(v: T) -> Self {
        Decimal(BigRational::from_integer(v.into()))
    }

    pub fn from_ratio<T: Into<BigInt>>(numer: T, denom: T) -> Self {
        Decimal(BigRational::new(numer.into(), denom.into()))
    }

    /// `10^-digits`.
    pub fn pow10_neg(digits: u32) -> Self {
        Decimal(BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Decimal(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest integer not above the value.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer not below the value.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Number of fractional decimal digits when the expansion terminates,
    /// otherwise the number of decimal digits of the reduced denominator.
    pub fn precision_digits(&self) -> u32 {
        match terminating_digits(self.0.denom()) {
            Some(k) => k,
            None => self.0.denom().to_string().len() as u32,
        }
    }

    /// Whether the decimal expansion terminates.
    pub fn is_terminating(&self) -> bool {
        terminating_digits(self.0.denom()).is_some()
    }
}

/// If `denom = 2^a 5^b`, returns `max(a, b)`.
fn terminating_digits(denom: &BigInt) -> Option<u32> {
    let mut d = denom.clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut a, mut b) = (0u32, 0u32);
    while d.is_even() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if d.is_one() {
        Some(a.max(b))
    } else {
        None
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.0;
        match terminating_digits(r.denom()) {
            Some(0) => write!(f, "{}", r.numer()),
            Some(k) => {
                let scaled = r * BigRational::from_integer(BigInt::from(10u32).pow(k));
                let int = scaled.to_integer();
                let neg = int.sign() == Sign::Minus;
                let digits = int.abs().to_string();
                let k = k as usize;
                let padded = if digits.len() <= k {
                    format!("{}{}", "0".repeat(k + 1 - digits.len()), digits)
                } else {
                    digits
                };
                let (ip, fp) = padded.split_at(padded.len() - k);
                write!(f, "{}{}.{}", if neg { "-" } else { "" }, ip, fp)
            }
            None => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a decimal or rational: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Decimal(BigRational::new(p, q)));
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        let (neg, body) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if ip.is_empty() && fp.is_empty() {
            return Err(bad());
        }
        if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if exp.unsigned_abs() > 10_000 {
            return Err(bad());
        }
        let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
        let shift = exp - fp.len() as i64;
        let ten = BigInt::from(10u32);
        let mut r = if shift >= 0 {
            BigRational::from_integer(digits * ten.pow(shift as u32))
        } else {
            BigRational::new(digits, ten.pow((-shift) as u32))
        };
        if neg {
            r = -r;
        }
        Ok(Decimal(r))
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
            Float(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(i) => Ok(Decimal::from_integer(i)),
            // shortest round-trip rendering, so 0.1 reads as 1/10
            Repr::Float(f) if f.is_finite() => format!("{f:?}").parse().map_err(serde::de::Error::custom),
            Repr::Float(f) => Err(serde::de::Error::custom(format!("non-finite number {f}"))),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Decimal {
            type Output = Decimal;
            fn $m(self, rhs: Decimal) -> Decimal {
                Decimal(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Decimal> for &'a Decimal {
            type Output = Decimal;
            fn $m(self, rhs: &'a Decimal) -> Decimal {
                Decimal((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Decimal {
    type Output = Decimal;
    fn neg(self) -> Decimal {
        Decimal(-self.0)
    }
}

impl Sum for Decimal {
    fn sum<I: Iterator<Item = Decimal>>(iter: I) -> Self {
        iter.fold(Decimal::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Decimal> for Decimal {
    fn sum<I: Iterator<Item = &'a Decimal>>(iter: I) -> Self {
        iter.fold(Decimal::zero(), |a, b| &a + b)
    }
}

impl From<u64> for Decimal {
    fn from(v: u64) -> Self {
        Decimal::from_integer(v)
    }
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Decimal>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `value * scale` as an integer; `scale` must clear the denominator.
pub fn scale_to_integer(value: &Decimal, scale: &BigInt) -> BigInt {
    let r = &value.0 * BigRational::from_integer(scale.clone());
    debug_assert!(r.is_integer());
    r.to_integer()
}
