//! Exact arithmetic in `Q(√3)`: numbers `a + b√3` with rational `a`, `b`.
//!
//! Signs, comparisons and floors are decided exactly; decimal expansions
//! come from integer square roots, so any number of digits is available.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::json::RationalJson;
use crate::scalar::{Rational, Scalar};

/// Digits used for decimal output unless `TOOL_PRECISION_DIGITS` is set.
pub const DEFAULT_DIGITS: usize = 50;

/// Digits for decimal output; at least [`DEFAULT_DIGITS`].
pub fn precision_digits() -> usize {
    std::env::var("TOOL_PRECISION_DIGITS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(DEFAULT_DIGITS, |d| d.max(DEFAULT_DIGITS))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Self::new(a, Rational::zero())
    }

    pub fn sqrt3() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    /// `a - b√3`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - 3 b^2`, the field norm.
    pub fn field_norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(3.into()) * &self.b * &self.b
    }

    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: whichever of a^2 and 3 b^2 dominates wins
        match sign_of(&self.field_norm()) {
            1 => sa,
            -1 => sb,
            _ => unreachable!("a^2 = 3 b^2 has no rational solution with b != 0"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.field_norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(Self::new(c.a / &n, c.b / n))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        // x = (A + B√3) / D with integer A, B and D > 0
        let d = self.a.denom().lcm(self.b.denom());
        let big_a = self.a.numer() * (&d / self.a.denom());
        let big_b = self.b.numer() * (&d / self.b.denom());
        if big_b.is_zero() {
            return big_a.div_floor(&d);
        }
        // s < |B|√3 < s + 1
        let s = (&big_b * &big_b * 3u32).sqrt();
        let lower = if big_b.is_positive() {
            big_a + s
        } else {
            big_a - s - 1u32
        };
        lower.div_floor(&d)
    }

    /// Rounded to `digits` places after the decimal point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = Rational::from_integer(BigInt::from(10u32).pow(digits as u32));
        let half = Rational::new(1.into(), 2.into());
        let scaled = Self::new(&self.a * &scale + half, &self.b * &scale);
        let k = scaled.floor();
        let negative = k.sign() == Sign::Minus;
        let mut s = k.abs().to_string();
        if s.len() <= digits {
            s = "0".repeat(digits + 1 - s.len()) + &s;
        }
        let (int_part, frac) = s.split_at(s.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    pub fn to_json(&self) -> QSqrt3Json {
        QSqrt3Json {
            rational: (&self.a).into(),
            sqrt3_coeff: (&self.b).into(),
        }
    }
}

fn sign_of(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for QSqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(3)", self.a, self.b)
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let three = Rational::from_integer(3.into());
        Self::new(
            &self.a * &o.a + three * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Scalar for QSqrt3 {
    fn from_i64(v: i64) -> Self {
        Self::rational(Rational::from_i64(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(Rational::from_ratio(num, den))
    }

    fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * 3f64.sqrt()
    }

    fn div(&self, other: &Self) -> Self {
        self.clone() * other.inverse().expect("division by zero in Q(sqrt 3)")
    }
}

/// `{"rational": {num, den}, "sqrt3_coeff": {num, den}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QSqrt3Json {
    pub rational: RationalJson,
    pub sqrt3_coeff: RationalJson,
}
