//! Legendre polynomials and the solid spherical harmonics
//! `r^l P_l^m(cos θ) cos(mφ)` and `r^l P_l^m(cos θ) sin(mφ)` as exact
//! polynomials in `(x0, x1, x2)`, with `x0 = r cos θ`,
//! `x1 = r sin θ cos φ`, `x2 = r sin θ sin φ`.
//!
//! Associated Legendre functions carry no Condon-Shortley phase:
//! `P_l^m(t) = (1 - t^2)^{m/2} d^m P_l / dt^m`.

use num_integer::binomial;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::RealTriPoly;
use crate::scalar::{int, rat, Rational};
use crate::univariate::UniPoly;

/// Legendre polynomial `P_n` from Bonnet's recurrence
/// `(n+1) P_{n+1} = (2n+1) t P_n - n P_{n-1}`.
pub fn legendre(n: i64) -> Result<UniPoly<Rational>> {
    if n < 0 {
        return Err(Error::InvalidIndex(format!("Legendre degree {n} < 0")));
    }
    let mut prev = UniPoly::constant(int(1));
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = UniPoly::t();
    for k in 1..n {
        let next = UniPoly::t()
            .mul(&cur)
            .scale(&int(2 * k + 1))
            .sub(&prev.scale(&int(k)))
            .scale(&rat(1, k + 1));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HarmonicKind {
    /// `cos(mφ)` family.
    U,
    /// `sin(mφ)` family, `m >= 1`.
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolidHarmonicIndex {
    l: u32,
    kind: HarmonicKind,
    m: u32,
}

impl SolidHarmonicIndex {
    pub fn new(l: i64, kind: HarmonicKind, m: i64) -> Result<Self> {
        if l < 0 || m < 0 || m > l {
            return Err(Error::InvalidIndex(format!(
                "solid harmonic (l={l}, m={m}) needs 0 <= m <= l"
            )));
        }
        if kind == HarmonicKind::V && m == 0 {
            return Err(Error::InvalidIndex(
                "solid harmonic of kind V needs m >= 1".into(),
            ));
        }
        Ok(Self {
            l: l as u32,
            kind,
            m: m as u32,
        })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn kind(&self) -> HarmonicKind {
        self.kind
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// Real and imaginary parts of `(x1 + i x2)^m`.
fn planar_power(m: u32) -> (RealTriPoly, RealTriPoly) {
    let mut re = RealTriPoly::zero();
    let mut im = RealTriPoly::zero();
    for j in 0..=m {
        let c: i64 = binomial(m as i64, j as i64);
        let e = [0, m - j, j];
        // i^j
        let (target, sign) = match j % 4 {
            0 => (&mut re, 1),
            1 => (&mut im, 1),
            2 => (&mut re, -1),
            _ => (&mut im, -1),
        };
        target.add_term(e, int(sign * c));
    }
    (re, im)
}

/// Homogeneous harmonic polynomial of degree `l` for the given index.
pub fn solid_harmonic(idx: SolidHarmonicIndex) -> RealTriPoly {
    let (l, m) = (idx.l, idx.m);
    let dmp = legendre(l as i64)
        .expect("l >= 0 by construction")
        .nth_derivative(m as usize);
    let r2 = (0..3).fold(RealTriPoly::zero(), |acc, k| {
        acc.add(&RealTriPoly::var(k).pow(2))
    });
    // r^{l-m} d^mP_l(x0/r) = sum_k c_k x0^k (r^2)^{(l-m-k)/2}; only even gaps occur.
    let mut radial = RealTriPoly::zero();
    for (k, c) in dmp.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let gap = l - m - k as u32;
        debug_assert!(gap % 2 == 0, "parity of d^m P_l");
        let term = RealTriPoly::monomial([k as u32, 0, 0], c.clone()).mul(&r2.pow(gap / 2));
        radial = radial.add(&term);
    }
    let (re, im) = planar_power(m);
    match idx.kind {
        HarmonicKind::U => radial.mul(&re),
        HarmonicKind::V => radial.mul(&im),
    }
}

pub fn check_harmonicity(idx: SolidHarmonicIndex) -> bool {
    solid_harmonic(idx).laplacian().is_zero()
}

/// `P_l^m(t)` evaluated in double precision, for cross-checks.
pub fn associated_legendre_f64(l: u32, m: u32, t: f64) -> f64 {
    let dmp = legendre(l as i64).expect("l >= 0").nth_derivative(m as usize);
    (1.0 - t * t).max(0.0).powf(m as f64 / 2.0) * dmp.eval_f64(t)
}
