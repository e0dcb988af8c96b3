//! Exact rational numbers and their text forms.
//!
//! Game payoffs are carried as [`Rational`] end to end. Text input accepts
//! integers, `p/q` fractions and plain decimals (`"2.5"`, `"-0.125"`); output
//! is either the exact `p/q` form or a fixed four-place decimal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Places used by [`NumberFormat::Decimal`].
pub const DECIMAL_PLACES: u32 = 4;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse(text: &str) -> Result<Rational> {
    let err = || Error::ParseRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    if (whole.is_empty() && fraction.is_empty())
        || !whole.bytes().all(|b| b.is_ascii_digit())
        || !fraction.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{whole}{fraction}");
    let mut num: BigInt = digits.parse().map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), fraction.len());
    Ok(Rational::new(num, den))
}

/// Rounds to `places` decimal places, half away from zero.
pub fn to_decimal(value: &Rational, places: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), places as usize);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + frac(1, 2)).floor().to_integer();
    let (whole, rem) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{rem:0>width$}", width = places as usize)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// How rationals are rendered in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberFormat {
    /// `p/q`, or a bare integer when the denominator is one.
    #[default]
    Exact,
    /// Fixed [`DECIMAL_PLACES`]-place decimal.
    Decimal,
}

impl NumberFormat {
    pub fn render(self, value: &Rational) -> String {
        match self {
            NumberFormat::Exact => value.to_string(),
            NumberFormat::Decimal => to_decimal(value, DECIMAL_PLACES),
        }
    }
}

/// Serde adapter: rationals as strings, accepting JSON integers on input.
pub mod serde_str {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Text(t) => super::parse(&t).map_err(de::Error::custom),
            Raw::Int(v) => Ok(super::int(v)),
        }
    }

    pub mod vec {
        use super::{Rational, Raw};
        use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<Raw>::deserialize(d)?
                .into_iter()
                .map(|raw| match raw {
                    Raw::Text(t) => super::super::parse(&t).map_err(de::Error::custom),
                    Raw::Int(v) => Ok(super::super::int(v)),
                })
                .collect()
        }
    }
}
