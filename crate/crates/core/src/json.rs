//! Serde helpers that write big integers as bare JSON number tokens.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::scalar::Rational;

pub mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(v.to_string()).map_err(S::Error::custom)?;
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw: &RawValue = <&RawValue>::deserialize(d)?;
        raw.get()
            .trim()
            .parse::<BigInt>()
            .map_err(|_| D::Error::custom(format!("expected an integer, found {}", raw.get())))
    }
}

/// `{"num": int, "den": int}` with arbitrary-size integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    #[serde(with = "big_int")]
    pub num: BigInt,
    #[serde(with = "big_int")]
    pub den: BigInt,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        Self {
            num: q.numer().clone(),
            den: q.denom().clone(),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Option<Rational> {
        if self.den == BigInt::from(0) {
            None
        } else {
            Some(Rational::new(self.num.clone(), self.den.clone()))
        }
    }
}
