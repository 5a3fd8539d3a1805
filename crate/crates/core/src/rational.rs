//! Exact rational helpers on top of [`BigRational`].
//!
//! Every exact scalar in the crate is a [`Rational`]. Values are kept in
//! lowest terms with a positive denominator by `num-rational`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    frac(1, 2)
}

/// Parses `"7/2"`, `"-3"`, `"2.74118"` or `"1.5e-3"` exactly.
///
/// Decimal literals are read digit by digit, so `"0.779643"` becomes
/// `779643/1000000` rather than the nearest binary float.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let err = || Error::Parse(text.to_string());
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => {
            let exp: i32 = text[i + 1..].parse().map_err(|_| err())?;
            (&text[..i], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fractional) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fractional.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(fractional.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{fractional}");
    let numer = if all.is_empty() { BigInt::zero() } else { BigInt::from_str(&all).map_err(|_| err())? };
    let scale = exponent - fractional.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Canonical `"numerator/denominator"` rendering; integers print without a
/// denominator.
pub fn to_exact_string(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    // `ToPrimitive` for `Ratio<BigInt>` rounds correctly even when numerator
    // and denominator overflow f64 individually.
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite float.
pub fn from_f64_exact(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or(Error::NonFinite(x))
}

pub fn floor_int(value: &Rational) -> BigInt {
    value.numer().div_floor(value.denom())
}

pub fn pow2(k: u32) -> Rational {
    Rational::from_integer(BigInt::one() << k as usize)
}

/// Serde adapter that writes a rational as `{"exact": "71/67", "float": 1.0597...}`.
pub mod serde_exact {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{parse, to_exact_string, to_f64, Rational};

    #[derive(Serialize, Deserialize)]
    pub(crate) struct Repr {
        exact: String,
        float: f64,
    }

    impl From<&Rational> for Repr {
        fn from(value: &Rational) -> Self {
            Repr {
                exact: to_exact_string(value),
                float: to_f64(value),
            }
        }
    }

    impl Repr {
        pub(crate) fn into_rational<E: serde::de::Error>(self) -> Result<Rational, E> {
            parse(&self.exact).map_err(E::custom)
        }
    }

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        Repr::from(value).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let repr = Repr::deserialize(de)?;
        let exact = repr.exact.clone();
        let value = repr.into_rational::<D::Error>()?;
        if to_exact_string(&value) != exact.trim() {
            return Err(D::Error::custom(format!("{exact:?} is not in lowest terms")));
        }
        Ok(value)
    }

    pub mod vec {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        use super::{Rational, Repr};

        pub fn serialize<S: Serializer>(values: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
            values.iter().map(Repr::from).collect::<Vec<_>>().serialize(ser)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<Repr>::deserialize(de)?
                .into_iter()
                .map(|r| r.into_rational::<D::Error>())
                .collect()
        }
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        use super::{Rational, Repr};

        pub fn serialize<S: Serializer>(value: &Option<Rational>, ser: S) -> Result<S::Ok, S::Error> {
            value.as_ref().map(Repr::from).serialize(ser)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Rational>, D::Error> {
            Option::<Repr>::deserialize(de)?
                .map(|r| r.into_rational::<D::Error>())
                .transpose()
        }
    }
}
