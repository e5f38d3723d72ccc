//! Solid spherical monogenics `X_n^{m,†}` and `Y_n^{m,†}`, built as the
//! hypercomplex derivative `(1/2) Dbar` of the solid harmonics of degree
//! `n + 1`, and exact checks of their structural properties.
//!
//! Elements with `m = n + 1` are the hyperholomorphic constants of degree
//! `n`. No normalization happens here: norms contain `sqrt(pi)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ball::{inner_product, ExactBallScalar};
use crate::error::{Error, Result};
use crate::harmonic::{solid_harmonic, HarmonicKind, SolidHarmonicIndex};
use crate::json::RationalJson;
use crate::poly::{ComponentJson, ExactAPoly};
use crate::scalar::{int, Rational};
use crate::sphere::Point;

pub const DEFAULT_DEGREE_CAP: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    X,
    Y,
}

impl Family {
    fn harmonic_kind(self) -> HarmonicKind {
        match self {
            Family::X => HarmonicKind::U,
            Family::Y => HarmonicKind::V,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::X => "X",
            Family::Y => "Y",
        })
    }
}

/// `(n, family, m)` labelling `X_n^{m,†}` or `Y_n^{m,†}`.
///
/// Ordered by degree first, so iteration over a `BTreeMap` walks the basis
/// degree by degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    n: u32,
    family: Family,
    m: u32,
}

impl BasisIndex {
    pub fn new(n: i64, family: Family, m: i64) -> Result<Self> {
        let lower = match family {
            Family::X => 0,
            Family::Y => 1,
        };
        if n < 0 || m < lower || m > n + 1 {
            return Err(Error::InvalidIndex(format!(
                "({n}, {family}, {m}) needs n >= 0 and {lower} <= m <= n + 1"
            )));
        }
        Ok(Self {
            n: n as u32,
            family,
            m: m as u32,
        })
    }

    pub fn x(n: u32, m: u32) -> Self {
        Self::new(n as i64, Family::X, m as i64).expect("valid X index")
    }

    pub fn y(n: u32, m: u32) -> Self {
        Self::new(n as i64, Family::Y, m as i64).expect("valid Y index")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `m = n + 1`: the element has vanishing hypercomplex derivative.
    pub fn is_hyperholomorphic_constant(&self) -> bool {
        self.m == self.n + 1
    }

    /// The same family and order one degree lower, if it exists.
    pub fn lowered(&self) -> Option<Self> {
        (self.n >= 1 && self.m <= self.n).then(|| Self {
            n: self.n - 1,
            ..*self
        })
    }

    pub fn raised(&self) -> Self {
        Self {
            n: self.n + 1,
            ..*self
        }
    }

    /// All `2n + 3` indices of degree `n`, in canonical order.
    pub fn of_degree(n: u32) -> Vec<Self> {
        let mut out = vec![Self::x(n, 0)];
        for m in 1..=n + 1 {
            out.push(Self::x(n, m));
            out.push(Self::y(n, m));
        }
        out.sort();
        out
    }

    pub fn up_to_degree(max_n: u32) -> Vec<Self> {
        (0..=max_n).flat_map(Self::of_degree).collect()
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.family, self.m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub index: BasisIndex,
    pub poly: ExactAPoly,
    /// Squared `L2(B_r)` norm with `r` symbolic (`r_power = 2n + 3`).
    pub norm_sq: ExactBallScalar,
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Closed-form squared norm over `B_r`:
/// `pi (n+1) r^{2n+3} / (2n+3)` for `m = 0`, and
/// `(pi/2) (n+1) (n+1+m)!/(n+1-m)! r^{2n+3} / (2n+3)` otherwise.
pub fn basis_norm_sq(idx: BasisIndex) -> ExactBallScalar {
    let n = idx.n;
    let base = Rational::new(BigInt::from(n + 1), BigInt::from(2 * n + 3));
    let coefficient = if idx.m == 0 {
        base
    } else {
        base * Rational::new(factorial(n + 1 + idx.m), factorial(n + 1 - idx.m) * BigInt::from(2))
    };
    ExactBallScalar::new(coefficient, 1, 2 * n + 3)
}

/// Builds `(1/2) Dbar` of the solid harmonic of degree `n + 1`.
pub fn build_basis_element(idx: BasisIndex) -> BasisElement {
    let h = SolidHarmonicIndex::new(
        (idx.n + 1) as i64,
        idx.family.harmonic_kind(),
        idx.m as i64,
    )
    .expect("basis index maps to a valid harmonic index");
    let poly = crate::poly::APoly::scalar(solid_harmonic(h))
        .apply_half_dbar()
        .to_apoly()
        .expect("(1/2) Dbar of a real function stays in A");
    BasisElement {
        index: idx,
        poly,
        norm_sq: basis_norm_sq(idx),
    }
}

/// Squared norm by exact integration of the constructed polynomial.
pub fn quadrature_norm_sq(e: &BasisElement) -> ExactBallScalar {
    inner_product(&e.poly, &e.poly, &Rational::one())
}

/// Memoized basis up to a degree cap, built once and then read-only.
#[derive(Debug)]
pub struct BasisTable {
    max_degree: u32,
    elements: BTreeMap<BasisIndex, BasisElement>,
}

impl BasisTable {
    pub fn new(max_degree: u32) -> Self {
        let elements = BasisIndex::up_to_degree(max_degree)
            .into_iter()
            .map(|i| (i, build_basis_element(i)))
            .collect();
        Self {
            max_degree,
            elements,
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn get(&self, idx: &BasisIndex) -> Result<&BasisElement> {
        self.elements.get(idx).ok_or_else(|| {
            Error::InvalidIndex(format!(
                "{idx} exceeds the basis degree cap {}",
                self.max_degree
            ))
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisElement> {
        self.elements.values()
    }
}

/// The shared table with the default degree cap.
pub fn default_table() -> &'static BasisTable {
    static TABLE: OnceLock<BasisTable> = OnceLock::new();
    TABLE.get_or_init(|| BasisTable::new(DEFAULT_DEGREE_CAP))
}

/// Exact check of `(1/2) Dbar X_n^{m,†} = (n+m+1) X_{n-1}^{m,†}` (likewise
/// for `Y`). Requires `n >= 1` and `m <= n`.
pub fn check_derivative_relation(idx: BasisIndex) -> Result<bool> {
    let lower = idx.lowered().ok_or_else(|| {
        Error::Precondition(format!("{idx}: derivative relation needs n >= 1 and m <= n"))
    })?;
    let derivative = build_basis_element(idx).poly.apply_half_dbar();
    let expected = build_basis_element(lower)
        .poly
        .scale(&int((idx.n + idx.m + 1) as i64))
        .to_hpoly();
    Ok(derivative == expected)
}

/// `(1/2) Dbar` of the element vanishes identically.
pub fn has_zero_derivative(idx: BasisIndex) -> bool {
    build_basis_element(idx).poly.apply_half_dbar().is_zero()
}

/// Index and factor of the primitive: `P(X_n^{m,†}) = X_{n+1}^{m,†} / (n+m+2)`.
pub fn primitive_of_basis(idx: BasisIndex) -> (BasisIndex, Rational) {
    (
        idx.raised(),
        Rational::new(BigInt::one(), BigInt::from(idx.n + idx.m + 2)),
    )
}

/// Checks `(1/2) Dbar (factor * target) = element` exactly.
pub fn check_primitive(idx: BasisIndex) -> bool {
    let (target, factor) = primitive_of_basis(idx);
    let prim = build_basis_element(target).poly.scale(&factor);
    prim.is_monogenic() && prim.apply_half_dbar() == build_basis_element(idx).poly.to_hpoly()
}

/// `(1/2) (n+1) sqrt((n+1+m)!/(n+1-m)!)`, the pointwise growth constant.
pub fn pointwise_bound_constant(idx: BasisIndex) -> f64 {
    let n = idx.n as f64;
    let ratio: f64 = (idx.n + 1 - idx.m + 1..=idx.n + 1 + idx.m)
        .map(|k| k as f64)
        .product();
    0.5 * (n + 1.0) * ratio.sqrt()
}

/// Smallest `bound(x) - |X(x)|` over the samples, with
/// `bound(x) = pointwise_bound_constant * |x|^n`.
pub fn check_pointwise_bound(e: &BasisElement, samples: &[Point]) -> f64 {
    let c = pointwise_bound_constant(e.index);
    let f = e.poly.to_f64();
    samples
        .iter()
        .map(|x| {
            let r = crate::sphere::norm(x);
            c * r.powi(e.index.n as i32) - f.eval_f64(*x).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Rank over `Q` of a set of `A`-valued polynomials, by exact elimination.
pub fn exact_rank(polys: &[&ExactAPoly]) -> usize {
    let mut keys = BTreeMap::new();
    for p in polys {
        for (k, comp) in p.c.iter().enumerate() {
            for (e, _) in comp.terms() {
                let next = keys.len();
                keys.entry((k, *e)).or_insert(next);
            }
        }
    }
    let mut rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![Rational::zero(); keys.len()];
            for (k, comp) in p.c.iter().enumerate() {
                for (e, c) in comp.terms() {
                    row[keys[&(k, *e)]] = c.clone();
                }
            }
            row
        })
        .collect();
    let cols = keys.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pivot_row[col];
                for c in col..cols {
                    let delta = &factor * &pivot_row[c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The `2n + 3` elements of degree `n` are linearly independent.
pub fn dimension_check(n: u32) -> bool {
    let elems: Vec<BasisElement> = BasisIndex::of_degree(n)
        .into_iter()
        .map(build_basis_element)
        .collect();
    let refs: Vec<&ExactAPoly> = elems.iter().map(|e| &e.poly).collect();
    elems.len() == (2 * n + 3) as usize && exact_rank(&refs) == elems.len()
}

/// Dump format of one basis element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisElementJson {
    pub n: u32,
    pub family: Family,
    pub m: u32,
    pub norm_sq_pi_rational: RationalJson,
    pub radius_power: u32,
    pub components: Vec<ComponentJson>,
}

impl BasisElement {
    pub fn to_json(&self) -> BasisElementJson {
        BasisElementJson {
            n: self.index.n,
            family: self.index.family,
            m: self.index.m,
            norm_sq_pi_rational: RationalJson::from(&self.norm_sq.coefficient),
            radius_power: self.norm_sq.r_power,
            components: self.poly.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{APoly, RealTriPoly as P};
    use crate::quaternion::ReducedQuaternion;
    use crate::scalar::rat;

    #[test]
    fn index_validation() {
        assert!(BasisIndex::new(0, Family::Y, 0).is_err());
        assert!(BasisIndex::new(1, Family::X, 3).is_err());
        assert!(BasisIndex::new(-1, Family::X, 0).is_err());
        assert!(BasisIndex::new(1, Family::Y, 2).unwrap().is_hyperholomorphic_constant());
        for n in 0..6 {
            assert_eq!(BasisIndex::of_degree(n).len(), (2 * n + 3) as usize);
        }
    }

    #[test]
    fn element_examples() {
        assert_eq!(
            build_basis_element(BasisIndex::x(0, 0)).poly,
            APoly::constant(ReducedQuaternion::real(rat(1, 2)))
        );
        assert_eq!(
            build_basis_element(BasisIndex::x(1, 0)).poly,
            APoly::new(P::var(0), P::var(1).scale(&rat(1, 2)), P::var(2).scale(&rat(1, 2)))
        );
        assert_eq!(
            build_basis_element(BasisIndex::x(1, 2)).poly,
            APoly::new(P::zero(), P::var(1).scale(&int(-3)), P::var(2).scale(&int(3)))
        );
        assert_eq!(
            build_basis_element(BasisIndex::x(0, 1)).poly,
            APoly::constant(ReducedQuaternion::new(int(0), rat(-1, 2), int(0)))
        );
        assert_eq!(
            build_basis_element(BasisIndex::y(0, 1)).poly,
            APoly::constant(ReducedQuaternion::new(int(0), int(0), rat(-1, 2)))
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(basis_norm_sq(BasisIndex::x(0, 0)), ExactBallScalar::new(rat(1, 3), 1, 3));
        assert_eq!(basis_norm_sq(BasisIndex::x(1, 0)), ExactBallScalar::new(rat(2, 5), 1, 5));
        assert_eq!(basis_norm_sq(BasisIndex::x(1, 1)), ExactBallScalar::new(rat(6, 5), 1, 5));
        for idx in BasisIndex::up_to_degree(3) {
            let e = build_basis_element(idx);
            assert_eq!(quadrature_norm_sq(&e), e.norm_sq, "{idx}");
        }
    }

    #[test]
    fn derivative_relation_examples() {
        assert!(check_derivative_relation(BasisIndex::x(1, 0)).unwrap());
        assert_eq!(
            build_basis_element(BasisIndex::x(1, 0)).poly.apply_half_dbar().to_apoly().unwrap(),
            APoly::constant(ReducedQuaternion::real(int(1)))
        );
        assert!(check_derivative_relation(BasisIndex::y(2, 1)).unwrap());
        assert!(check_derivative_relation(BasisIndex::x(1, 2)).is_err());
        assert!(has_zero_derivative(BasisIndex::x(1, 2)));
        assert!(check_derivative_relation(BasisIndex::x(0, 0)).is_err());
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_of_basis(BasisIndex::x(1, 0)), (BasisIndex::x(2, 0), rat(1, 3)));
        assert_eq!(primitive_of_basis(BasisIndex::y(1, 1)), (BasisIndex::y(2, 1), rat(1, 4)));
        assert_eq!(primitive_of_basis(BasisIndex::x(0, 0)), (BasisIndex::x(1, 0), rat(1, 2)));
        for idx in BasisIndex::up_to_degree(4) {
            assert!(check_primitive(idx), "{idx}");
        }
    }

    #[test]
    fn pointwise_bound_examples() {
        let samples = crate::sphere::SphereSampling { count: 1000, ..Default::default() }.points();
        let e00 = build_basis_element(BasisIndex::x(0, 0));
        assert_eq!(check_pointwise_bound(&e00, &samples), 0.0);
        let e10 = build_basis_element(BasisIndex::x(1, 0));
        assert!((pointwise_bound_constant(e10.index) - 1.0).abs() < 1e-15);
        assert!(check_pointwise_bound(&e10, &samples) >= 0.0);
        let e21 = build_basis_element(BasisIndex::x(2, 1));
        assert!(check_pointwise_bound(&e21, &samples) >= 0.0);
    }

    #[test]
    fn dimension_examples() {
        assert!(dimension_check(0));
        assert!(dimension_check(1));
        assert!(dimension_check(4));
    }

    #[test]
    fn two_sided_monogenicity_on_basis() {
        for idx in BasisIndex::up_to_degree(5) {
            let p = build_basis_element(idx).poly;
            assert!(p.is_monogenic());
            assert!(p.apply_d_right().is_zero(), "{idx}");
            assert!(p.riesz_residual().all_zero());
        }
        // off the kernel, left and right operators disagree but vanish together
        let f = APoly::new(P::var(1), P::var(0), P::zero());
        assert!(!f.is_monogenic() && !f.apply_d_right().is_zero());
    }

    #[test]
    fn json_dump_shape() {
        let e = build_basis_element(BasisIndex::x(1, 1));
        let v = serde_json::to_value(e.to_json()).unwrap();
        assert_eq!(v["family"], "X");
        assert_eq!(v["radius_power"], 5);
        assert_eq!(v["norm_sq_pi_rational"]["num"], 6);
        assert_eq!(v["norm_sq_pi_rational"]["den"], 5);
        assert_eq!(v["components"].as_array().unwrap().len(), 3);
    }
}
