//! Sparse trivariate polynomials in `(x0, x1, x2)` and their `A`- and
//! `H`-valued combinations, together with the Cauchy-Riemann type operators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::big_int;
use crate::quaternion::{basis_product, Quaternion, ReducedQuaternion};
use crate::scalar::{Rational, Scalar};

/// Exponent triple `(a, b, c)` of the monomial `x0^a x1^b x2^c`.
pub type Exponent = [u32; 3];

/// Sparse polynomial; zero coefficients are never stored, and terms are
/// ordered lexicographically by exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct TriPoly<C> {
    terms: BTreeMap<Exponent, C>,
}

pub type RealTriPoly = TriPoly<Rational>;

impl<C: Scalar> Default for TriPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> TriPoly<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: Exponent, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// The coordinate `x_k`.
    pub fn var(k: usize) -> Self {
        let mut e = [0; 3];
        e[k] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                let v = slot.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the `-inf` degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn is_homogeneous(&self, n: u32) -> bool {
        self.terms.keys().all(|e| e[0] + e[1] + e[2] == n)
    }

    /// Terms of total degree exactly `n`.
    pub fn homogeneous_part(&self, n: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[0] + e[1] + e[2] == n)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(
                    [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]],
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(C::one()), |acc, _| acc.mul(self))
    }

    fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// `d/dx_k`.
    pub fn partial(&self, k: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[k] > 0).map(|(e, c)| {
            let mut d = *e;
            d[k] -= 1;
            (d, c.clone() * C::from_i64(e[k] as i64))
        }))
    }

    pub fn laplacian(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, k| acc.add(&self.partial(k).partial(k)))
    }

    /// `p(x0, x1, -x2)`.
    pub fn reflect_x2(&self) -> Self {
        self.map_terms(|e, c| {
            if e[2] % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            }
        })
    }

    /// `p(lambda x)`, i.e. each term scaled by `lambda^deg`.
    pub fn dilate(&self, lambda: &C) -> Self {
        self.map_terms(|e, c| {
            let d = e[0] + e[1] + e[2];
            (0..d).fold(c.clone(), |acc, _| acc * lambda.clone())
        })
    }

    fn map_terms(&self, f: impl Fn(&Exponent, &C) -> C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, f(e, c))))
    }

    /// `p(x + shift)` by binomial expansion of every monomial.
    pub fn translate(&self, shift: &[C; 3]) -> Self {
        let lin: Vec<Self> = (0..3)
            .map(|k| Self::var(k).add(&Self::constant(shift[k].clone())))
            .collect();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mono = lin[0].pow(e[0]).mul(&lin[1].pow(e[1])).mul(&lin[2].pow(e[2]));
            out = out.add(&mono.scale(c));
        }
        out
    }

    pub fn eval(&self, x: &[C; 3]) -> C {
        let deg = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<C>> = x.iter().map(|v| power_table(v, deg)).collect();
        self.terms.iter().fold(C::zero(), |acc, (e, c)| {
            acc + c.clone()
                * powers[0][e[0] as usize].clone()
                * powers[1][e[1] as usize].clone()
                * powers[2][e[2] as usize].clone()
        })
    }

    /// Double-precision evaluation with per-variable power tables.
    pub fn eval_f64(&self, x: [f64; 3]) -> f64 {
        let deg = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<f64>> = x.iter().map(|v| power_table(v, deg)).collect();
        self.eval_with_powers(&powers)
    }

    fn eval_with_powers(&self, powers: &[Vec<f64>]) -> f64 {
        self.terms.iter().fold(0.0, |acc, (e, c)| {
            acc + c.to_f64()
                * powers[0][e[0] as usize]
                * powers[1][e[1] as usize]
                * powers[2][e[2] as usize]
        })
    }

    pub fn to_f64(&self) -> TriPoly<f64> {
        TriPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, c.to_f64())))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

fn power_table<C: Scalar>(v: &C, deg: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(deg + 1);
    out.push(C::one());
    for k in 1..=deg {
        out.push(out[k - 1].clone() * v.clone());
    }
    out
}

/// Quaternion-valued polynomial with components along `1, i, j, k`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoly<C> {
    pub c: [TriPoly<C>; 4],
}

/// `A`-valued polynomial `[f]_0 + [f]_1 i + [f]_2 j`.
#[derive(Clone, Debug, PartialEq)]
pub struct APoly<C> {
    pub c: [TriPoly<C>; 3],
}

pub type ExactAPoly = APoly<Rational>;
pub type FloatAPoly = APoly<f64>;

impl<C: Scalar> HPoly<C> {
    pub fn zero() -> Self {
        Self {
            c: std::array::from_fn(|_| TriPoly::zero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(TriPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].add(&other.c[k])),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].sub(&other.c[k])),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].scale(s)),
        }
    }

    pub fn partial(&self, k: usize) -> Self {
        Self {
            c: std::array::from_fn(|u| self.c[u].partial(k)),
        }
    }

    /// `unit * self`, with `unit` one of `1, i, j, k` by index.
    pub fn left_unit(&self, unit: usize) -> Self {
        let mut out = Self::zero();
        for (b, comp) in self.c.iter().enumerate() {
            let (sign, u) = basis_product(unit, b);
            out.c[u] = if sign > 0 { out.c[u].add(comp) } else { out.c[u].sub(comp) };
        }
        out
    }

    /// `self * unit`.
    pub fn right_unit(&self, unit: usize) -> Self {
        let mut out = Self::zero();
        for (a, comp) in self.c.iter().enumerate() {
            let (sign, u) = basis_product(a, unit);
            out.c[u] = if sign > 0 { out.c[u].add(comp) } else { out.c[u].sub(comp) };
        }
        out
    }

    /// `D h = d0 h + i d1 h + j d2 h`.
    pub fn d_left(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, k| acc.add(&self.partial(k).left_unit(k)))
    }

    /// `Dbar h = d0 h - i d1 h - j d2 h`.
    pub fn dbar_left(&self) -> Self {
        let base = self.partial(0);
        (1..3).fold(base, |acc, k| acc.sub(&self.partial(k).left_unit(k)))
    }

    /// `h D = d0 h + (d1 h) i + (d2 h) j`.
    pub fn d_right(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, k| acc.add(&self.partial(k).right_unit(k)))
    }

    /// The `A`-valued polynomial, if the `k` component vanishes.
    pub fn to_apoly(&self) -> Option<APoly<C>> {
        self.c[3].is_zero().then(|| APoly {
            c: [self.c[0].clone(), self.c[1].clone(), self.c[2].clone()],
        })
    }

    pub fn eval_f64(&self, x: [f64; 3]) -> Quaternion<f64> {
        Quaternion::new(
            self.c[0].eval_f64(x),
            self.c[1].eval_f64(x),
            self.c[2].eval_f64(x),
            self.c[3].eval_f64(x),
        )
    }
}

impl<C: Scalar> APoly<C> {
    pub fn zero() -> Self {
        Self {
            c: std::array::from_fn(|_| TriPoly::zero()),
        }
    }

    pub fn new(c0: TriPoly<C>, c1: TriPoly<C>, c2: TriPoly<C>) -> Self {
        Self { c: [c0, c1, c2] }
    }

    /// A real polynomial placed in the scalar component.
    pub fn scalar(p: TriPoly<C>) -> Self {
        Self::new(p, TriPoly::zero(), TriPoly::zero())
    }

    pub fn constant(q: ReducedQuaternion<C>) -> Self {
        Self::new(
            TriPoly::constant(q.x0),
            TriPoly::constant(q.x1),
            TriPoly::constant(q.x2),
        )
    }

    pub fn to_hpoly(&self) -> HPoly<C> {
        HPoly {
            c: [
                self.c[0].clone(),
                self.c[1].clone(),
                self.c[2].clone(),
                TriPoly::zero(),
            ],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(TriPoly::is_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.c.iter().filter_map(TriPoly::degree).max()
    }

    pub fn is_homogeneous(&self, n: u32) -> bool {
        self.c.iter().all(|p| p.is_homogeneous(n))
    }

    pub fn homogeneous_part(&self, n: u32) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].homogeneous_part(n)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].add(&other.c[k])),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].sub(&other.c[k])),
        }
    }

    /// Multiplication by a real scalar (which commutes with everything).
    pub fn scale(&self, s: &C) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].scale(s)),
        }
    }

    pub fn translate(&self, shift: &[C; 3]) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].translate(shift)),
        }
    }

    pub fn reflect_x2(&self) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k].reflect_x2()),
        }
    }

    /// Generalized Cauchy-Riemann operator `D = d0 + i d1 + j d2`, acting
    /// from the left.
    pub fn apply_d(&self) -> HPoly<C> {
        self.to_hpoly().d_left()
    }

    /// `f D`, the operator acting from the right.
    pub fn apply_d_right(&self) -> HPoly<C> {
        self.to_hpoly().d_right()
    }

    /// Hypercomplex derivative `(1/2) Dbar f`.
    pub fn apply_half_dbar(&self) -> HPoly<C> {
        self.to_hpoly().dbar_left().scale(&C::from_ratio(1, 2))
    }

    /// Exact kernel test for `D`.
    pub fn is_monogenic(&self) -> bool {
        self.apply_d().is_zero()
    }

    /// Residuals of the first-order system equivalent to `Df = 0`:
    /// `d0 f0 - d1 f1 - d2 f2`, `d0 f1 + d1 f0`, `d0 f2 + d2 f0` and
    /// `d1 f2 - d2 f1`.
    pub fn riesz_residual(&self) -> RieszResidual<C> {
        let d = |comp: usize, var: usize| self.c[comp].partial(var);
        RieszResidual {
            divergence: d(0, 0).sub(&d(1, 1)).sub(&d(2, 2)),
            mixed_01: d(1, 0).add(&d(0, 1)),
            mixed_02: d(2, 0).add(&d(0, 2)),
            mixed_12: d(2, 1).sub(&d(1, 2)),
        }
    }

    pub fn eval(&self, x: &[C; 3]) -> ReducedQuaternion<C> {
        ReducedQuaternion::new(self.c[0].eval(x), self.c[1].eval(x), self.c[2].eval(x))
    }

    pub fn eval_f64(&self, x: [f64; 3]) -> ReducedQuaternion<f64> {
        let deg = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<f64>> = x.iter().map(|v| power_table(v, deg)).collect();
        ReducedQuaternion::new(
            self.c[0].eval_with_powers(&powers),
            self.c[1].eval_with_powers(&powers),
            self.c[2].eval_with_powers(&powers),
        )
    }

    pub fn to_f64(&self) -> APoly<f64> {
        APoly {
            c: std::array::from_fn(|k| self.c[k].to_f64()),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c.iter().map(TriPoly::max_abs_coeff).fold(0.0, f64::max)
    }
}

/// Output of [`APoly::riesz_residual`].
#[derive(Clone, Debug, PartialEq)]
pub struct RieszResidual<C> {
    pub divergence: TriPoly<C>,
    pub mixed_01: TriPoly<C>,
    pub mixed_02: TriPoly<C>,
    pub mixed_12: TriPoly<C>,
}

impl<C: Scalar> RieszResidual<C> {
    pub fn all_zero(&self) -> bool {
        self.divergence.is_zero()
            && self.mixed_01.is_zero()
            && self.mixed_02.is_zero()
            && self.mixed_12.is_zero()
    }
}

impl FloatAPoly {
    /// Approximate monogenicity: every coefficient of `Df` is below
    /// `rel_tol` times the largest coefficient of `f`.
    pub fn is_monogenic_approx(&self, rel_tol: f64) -> bool {
        let scale = self.max_abs_coeff().max(1.0);
        self.apply_d()
            .c
            .iter()
            .all(|p| p.max_abs_coeff() <= rel_tol * scale)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Exponent,
    #[serde(with = "big_int")]
    pub num: BigInt,
    #[serde(with = "big_int")]
    pub den: BigInt,
}

/// One real component of an `A`-valued polynomial, in the interchange form
/// `{"component": k, "terms": [{"e": [a,b,c], "num": n, "den": d}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub component: u8,
    pub terms: Vec<TermJson>,
}

impl RealTriPoly {
    pub fn to_json(&self, component: u8) -> ComponentJson {
        ComponentJson {
            component,
            terms: self
                .terms()
                .map(|(e, c)| TermJson {
                    e: *e,
                    num: c.numer().clone(),
                    den: c.denom().clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ComponentJson) -> Result<Self> {
        let mut p = Self::zero();
        for t in &json.terms {
            if t.den.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "zero denominator in component {} term {:?}",
                    json.component, t.e
                )));
            }
            p.add_term(t.e, Rational::new(t.num.clone(), t.den.clone()));
        }
        Ok(p)
    }
}

impl ExactAPoly {
    pub fn to_json(&self) -> Vec<ComponentJson> {
        (0..3).map(|k| self.c[k].to_json(k as u8)).collect()
    }

    /// Components may arrive in any order; missing ones are zero.
    pub fn from_json(parts: &[ComponentJson]) -> Result<Self> {
        let mut out = Self::zero();
        let mut seen = [false; 3];
        for part in parts {
            let k = part.component as usize;
            if k > 2 {
                return Err(Error::InvalidInput(format!(
                    "component index {} out of range 0..=2",
                    part.component
                )));
            }
            if seen[k] {
                return Err(Error::InvalidInput(format!("duplicate component {k}")));
            }
            seen[k] = true;
            out.c[k] = RealTriPoly::from_json(part)?;
        }
        Ok(out)
    }
}
