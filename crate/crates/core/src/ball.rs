//! Exact integration over balls `B_r`, the `L2(B_r)` inner product
//! `<f, g> = int Sc(conj(f) g) dV`, and the maximum modulus `M(f, r)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::big_int;
use crate::poly::{APoly, Exponent, ExactAPoly, FloatAPoly, RealTriPoly, TriPoly};
use crate::scalar::{ratio_to_f64, Rational, Scalar};
use crate::sphere::{self, Point, SphereSampling};

/// `coefficient * pi^pi_power * r^r_power`.
///
/// Zero is stored as a zero coefficient with both powers zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactBallScalar {
    pub coefficient: Rational,
    pub pi_power: u8,
    pub r_power: u32,
}

impl ExactBallScalar {
    pub fn zero() -> Self {
        Self {
            coefficient: Rational::zero(),
            pi_power: 0,
            r_power: 0,
        }
    }

    pub fn new(coefficient: Rational, pi_power: u8, r_power: u32) -> Self {
        if coefficient.is_zero() {
            Self::zero()
        } else {
            Self {
                coefficient,
                pi_power,
                r_power,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    /// Sum of two values; `None` when the symbolic powers differ.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        (self.pi_power == other.pi_power && self.r_power == other.r_power).then(|| {
            Self::new(
                &self.coefficient + &other.coefficient,
                self.pi_power,
                self.r_power,
            )
        })
    }

    /// Substitutes a concrete radius, leaving only the power of `pi`.
    pub fn at_radius(&self, r: &Rational) -> Self {
        let mut c = self.coefficient.clone();
        for _ in 0..self.r_power {
            c *= r;
        }
        Self::new(c, self.pi_power, 0)
    }

    pub fn value_f64(&self, r: f64) -> f64 {
        ratio_to_f64(&self.coefficient)
            * std::f64::consts::PI.powi(self.pi_power as i32)
            * r.powi(self.r_power as i32)
    }

    pub fn to_json(&self) -> ExactBallScalarJson {
        ExactBallScalarJson {
            num: self.coefficient.numer().clone(),
            den: self.coefficient.denom().clone(),
            pi_power: self.pi_power,
            r_power: self.r_power,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactBallScalarJson {
    #[serde(with = "big_int")]
    pub num: BigInt,
    #[serde(with = "big_int")]
    pub den: BigInt,
    pub pi_power: u8,
    pub r_power: u32,
}

fn odd_double_factorial(k: u32) -> BigInt {
    // (2k-1)!! with (-1)!! = 1
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(2 * j - 1))
}

/// Rational factor `q` of `int_{B_r} x0^a x1^b x2^c dV = q pi r^{a+b+c+3}`
/// for even exponents, i.e.
/// `4 (a-1)!! (b-1)!! (c-1)!! / ((s+1)!! (s+3))` with `s = a+b+c`.
fn even_moment(e: &Exponent) -> Rational {
    let half = [e[0] / 2, e[1] / 2, e[2] / 2];
    let s = half[0] + half[1] + half[2];
    let num = odd_double_factorial(half[0])
        * odd_double_factorial(half[1])
        * odd_double_factorial(half[2])
        * BigInt::from(4);
    let den = odd_double_factorial(s + 1) * BigInt::from(2 * s + 3);
    Rational::new(num, den)
}

fn all_even(e: &Exponent) -> bool {
    e.iter().all(|k| k % 2 == 0)
}

/// Exact `int_{B_r} x0^a x1^b x2^c dV`, with `r` kept symbolic.
pub fn monomial_ball_integral(e: Exponent) -> ExactBallScalar {
    if !all_even(&e) {
        return ExactBallScalar::zero();
    }
    ExactBallScalar::new(even_moment(&e), 1, e[0] + e[1] + e[2] + 3)
}

/// Integer coefficients after clearing denominators: `p = terms / den`.
struct IntegerForm {
    terms: Vec<(Exponent, BigInt)>,
    den: BigInt,
}

fn integer_form(p: &RealTriPoly) -> IntegerForm {
    let den = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let terms = p
        .terms()
        .map(|(e, c)| (*e, c.numer() * (&den / c.denom())))
        .collect();
    IntegerForm { terms, den }
}

/// Exact `int_{B_r} p q dV` grouped by total power of `r`.
fn real_product_integral(p: &RealTriPoly, q: &RealTriPoly, out: &mut BTreeMap<u32, Rational>) {
    if p.is_zero() || q.is_zero() {
        return;
    }
    let pf = integer_form(p);
    let qf = integer_form(q);
    let mut sums: BTreeMap<Exponent, BigInt> = BTreeMap::new();
    for (ea, ca) in &pf.terms {
        for (eb, cb) in &qf.terms {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            if !all_even(&e) {
                continue;
            }
            *sums.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    let scale = Rational::new(BigInt::one(), &pf.den * &qf.den);
    for (e, s) in sums {
        if s.is_zero() {
            continue;
        }
        let r_power = e[0] + e[1] + e[2] + 3;
        let v = even_moment(&e) * Rational::from_integer(s) * &scale;
        *out.entry(r_power).or_insert_with(Rational::zero) += v;
    }
}

/// Exact `L2(B_r)` inner product.
///
/// When every contributing term carries the same power of `r` (always the
/// case for homogeneous arguments) the radius stays symbolic; otherwise the
/// given `r` is substituted and `r_power` is 0.
pub fn inner_product(f: &ExactAPoly, g: &ExactAPoly, r: &Rational) -> ExactBallScalar {
    let mut by_power: BTreeMap<u32, Rational> = BTreeMap::new();
    // Sc(conj(f) g) = f0 g0 + f1 g1 + f2 g2 for A-valued f, g.
    for k in 0..3 {
        real_product_integral(&f.c[k], &g.c[k], &mut by_power);
    }
    by_power.retain(|_, v| !v.is_zero());
    match by_power.len() {
        0 => ExactBallScalar::zero(),
        1 => {
            let (p, v) = by_power.into_iter().next().expect("one entry");
            ExactBallScalar::new(v, 1, p)
        }
        _ => {
            let folded = by_power.into_iter().fold(Rational::zero(), |acc, (p, v)| {
                let mut t = v;
                for _ in 0..p {
                    t *= r;
                }
                acc + t
            });
            ExactBallScalar::new(folded, 1, 0)
        }
    }
}

fn float_moment(e: &Exponent, r: f64) -> f64 {
    ratio_to_f64(&even_moment(e)) * std::f64::consts::PI * r.powi((e[0] + e[1] + e[2] + 3) as i32)
}

fn float_product_integral(p: &TriPoly<f64>, q: &TriPoly<f64>, r: f64, cache: &mut BTreeMap<Exponent, f64>) -> f64 {
    let mut total = 0.0;
    for (ea, ca) in p.terms() {
        for (eb, cb) in q.terms() {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            if !all_even(&e) {
                continue;
            }
            let m = *cache.entry(e).or_insert_with(|| float_moment(&e, r));
            total += ca * cb * m;
        }
    }
    total
}

/// Double-precision `L2(B_r)` inner product via the exact monomial moments.
pub fn inner_product_f64(f: &FloatAPoly, g: &FloatAPoly, r: f64) -> f64 {
    let mut cache = BTreeMap::new();
    (0..3)
        .map(|k| float_product_integral(&f.c[k], &g.c[k], r, &mut cache))
        .sum()
}

/// Result of a maximum-modulus search.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxModulus {
    /// Best value on the initial lattice.
    pub coarse: f64,
    /// Best value after refinement; never below `coarse` and never above
    /// the true maximum, since every value is an actual evaluation.
    pub value: f64,
    pub argmax: Point,
}

/// Evaluates `|f|` at the point `r * p`.
fn modulus_at<C: Scalar>(f: &APoly<C>, x: Point) -> f64 {
    f.eval_f64(x).norm()
}

/// `M(f, r) = max_{|x| <= r} |f(x)|`, searched on the sphere `|x| = r`.
///
/// The components of a monogenic `f` are harmonic, so `|f|^2` is
/// subharmonic and the maximum over the closed ball sits on the boundary.
pub fn max_modulus<C: Scalar>(f: &APoly<C>, r: f64, s: &SphereSampling) -> Result<MaxModulus> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    max_modulus_on_sphere(|p| modulus_at(f, sphere::scale(&p, r)), s)
}

/// Maximum of `value(p)` over unit vectors `p`, by lattice sweep plus
/// shrinking local patches around the best candidates.
pub fn max_modulus_on_sphere(value: impl Fn(Point) -> f64, s: &SphereSampling) -> Result<MaxModulus> {
    let mut scored: Vec<(f64, Point)> = Vec::with_capacity(s.count);
    for p in s.points() {
        let v = value(p);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("|f| at {p:?} is {v}")));
        }
        scored.push((v, p));
    }
    let keep = s.candidates.max(1);
    let mut best = top_k(scored, keep);
    let coarse = best.first().map(|b| b.0).unwrap_or(0.0);
    let mut step = s.spacing();
    for _ in 0..s.refinement_rounds {
        step *= 0.25;
        let mut pool = best.clone();
        for (_, c) in &best {
            for p in sphere::local_patch(c, step, 3) {
                let v = value(p);
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("|f| at {p:?} is {v}")));
                }
                pool.push((v, p));
            }
        }
        best = top_k(pool, keep);
    }
    let (value, argmax) = best.first().copied().unwrap_or((0.0, [1.0, 0.0, 0.0]));
    Ok(MaxModulus {
        coarse,
        value: value.max(coarse),
        argmax,
    })
}

fn top_k(mut v: Vec<(f64, Point)>, k: usize) -> Vec<(f64, Point)> {
    v.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal)));
    v.truncate(k);
    v
}

/// Full-ball sampling on `shells` concentric spheres; validates the
/// boundary-only search.
pub fn max_modulus_full_ball<C: Scalar>(f: &APoly<C>, r: f64, shells: usize, s: &SphereSampling) -> Result<f64> {
    let dirs = s.points();
    let mut best = modulus_at(f, [0.0; 3]);
    for k in 1..=shells {
        let rho = r * k as f64 / shells as f64;
        for p in &dirs {
            let v = modulus_at(f, sphere::scale(p, rho));
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("|f| at radius {rho} is {v}")));
            }
            best = best.max(v);
        }
    }
    Ok(best)
}

/// Whether an exact ball scalar is strictly positive.
pub fn is_positive(v: &ExactBallScalar) -> bool {
    v.coefficient.is_positive()
}
