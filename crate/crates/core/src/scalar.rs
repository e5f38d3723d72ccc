//! Coefficient field abstraction shared by the exact and floating paths.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Rational numbers with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// A field element usable as a polynomial or quaternion coefficient.
///
/// Implemented for [`Rational`] (exact identities) and `f64` (evaluation and
/// the inequality sweeps).
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn div(&self, other: &Self) -> Self;
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Converts a big rational to the nearest-ish `f64` without overflowing
/// when numerator and denominator are individually huge.
pub fn ratio_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both into range, keeping 64 significant bits of each.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (q.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powi((shift_n - shift_d) as i32)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

pub fn int(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// Parses "3", "-3/4" or a finite decimal like "0.25" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole_v: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().ok()?
        };
        let frac_v: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut v = Rational::new(whole_v * &scale + frac_v, scale);
        if negative {
            v = -v;
        }
        return Some(v);
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Best rational approximation of a finite double, exact for dyadic values.
pub fn f64_to_rational(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}
