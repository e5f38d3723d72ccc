//! Fourier expansion of `A`-valued monogenic polynomials in the normalized
//! solid spherical monogenics over `B_r`, with series-level hypercomplex
//! derivative and primitive.
//!
//! A coefficient set stores, for each basis index, the real coefficient
//! against the normalized element `X / ||X||_{L2(B_r)}`. Coefficients are
//! real, so the side they multiply from does not matter; reconstruction
//! puts them on the right.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ball::{inner_product, inner_product_f64};
use crate::basis::{basis_norm_sq, BasisIndex, BasisTable, Family};
use crate::error::{Error, Result};
use crate::poly::{APoly, ComponentJson, ExactAPoly, FloatAPoly};
use crate::quaternion::ReducedQuaternion;
use crate::scalar::{f64_to_rational, ratio_to_f64, Rational, Scalar};

/// `||X||_{L2(B_r)}` in double precision.
pub fn basis_norm(idx: BasisIndex, r: f64) -> f64 {
    basis_norm_sq(idx).value_f64(r).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficientSet {
    pub radius: f64,
    pub entries: BTreeMap<BasisIndex, f64>,
    pub degree_max: u32,
}

impl FourierCoefficientSet {
    pub fn empty(radius: f64, degree_max: u32) -> Self {
        Self {
            radius,
            entries: BTreeMap::new(),
            degree_max,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &BasisIndex) -> f64 {
        self.entries.get(idx).copied().unwrap_or(0.0)
    }

    /// Inserts or accumulates; zero results are dropped.
    pub fn add(&mut self, idx: BasisIndex, v: f64) {
        let e = self.entries.entry(idx).or_insert(0.0);
        *e += v;
        if *e == 0.0 {
            self.entries.remove(&idx);
        }
    }

    /// Coefficients against the unnormalized elements.
    pub fn denormalized(&self) -> BTreeMap<BasisIndex, f64> {
        self.entries
            .iter()
            .map(|(i, c)| (*i, c / basis_norm(*i, self.radius)))
            .collect()
    }

    /// Drops all entries of degree 0, i.e. forces `f(0) = 0`.
    pub fn without_degree_zero(&self) -> Self {
        let mut out = self.clone();
        out.entries.retain(|i, _| i.n() > 0);
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<_> =
            self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }

    /// `sum c^2`, the squared `L2(B_r)` norm of the reconstruction.
    pub fn energy(&self) -> f64 {
        self.entries.values().map(|c| c * c).sum()
    }
}

/// Exact coefficients `<X, f> / ||X||^2` against the unnormalized elements.
pub fn exact_denormalized_coefficients(
    f: &ExactAPoly,
    r: &Rational,
    table: &BasisTable,
) -> Result<BTreeMap<BasisIndex, Rational>> {
    if !f.is_monogenic() {
        return Err(Error::NotMonogenic("expansion needs D f = 0".into()));
    }
    let degree = f.degree().unwrap_or(0);
    if degree > table.max_degree() {
        return Err(Error::Precondition(format!(
            "degree {degree} exceeds the basis cap {}",
            table.max_degree()
        )));
    }
    let mut out = BTreeMap::new();
    if f.is_zero() {
        return Ok(out);
    }
    for idx in BasisIndex::up_to_degree(degree) {
        let e = table.get(&idx)?;
        let ip = inner_product(&e.poly, f, r).at_radius(r);
        if ip.is_zero() {
            continue;
        }
        let norm_sq = e.norm_sq.at_radius(r);
        out.insert(idx, ip.coefficient / norm_sq.coefficient);
    }
    Ok(out)
}

/// Coefficients of a monogenic polynomial against the normalized basis on
/// `B_r`: `<X, f> / ||X||`, from an exact inner product divided by the
/// square root of the exact squared norm at the last step.
pub fn expand(f: &ExactAPoly, r: &Rational, table: &BasisTable) -> Result<FourierCoefficientSet> {
    let rf = ratio_to_f64(r);
    let exact = exact_denormalized_coefficients(f, r, table)?;
    let mut set = FourierCoefficientSet::empty(rf, f.degree().unwrap_or(0));
    for (idx, c) in exact {
        set.entries.insert(idx, ratio_to_f64(&c) * basis_norm(idx, rf));
    }
    Ok(set)
}

/// Expansion of a double-precision polynomial; monogenicity is checked to
/// a relative tolerance on the coefficients of `D f`.
pub fn expand_f64(f: &FloatAPoly, r: f64, table: &BasisTable) -> Result<FourierCoefficientSet> {
    if !f.is_monogenic_approx(1e-9) {
        return Err(Error::NotMonogenic("expansion needs D f = 0".into()));
    }
    let degree = f.degree().unwrap_or(0);
    if degree > table.max_degree() {
        return Err(Error::Precondition(format!(
            "degree {degree} exceeds the basis cap {}",
            table.max_degree()
        )));
    }
    let mut set = FourierCoefficientSet::empty(r, degree);
    for idx in BasisIndex::up_to_degree(degree) {
        let e = table.get(&idx)?;
        let part = f.homogeneous_part(idx.n());
        if part.is_zero() {
            continue;
        }
        let ip = inner_product_f64(&e.poly.to_f64(), &part, r);
        set.add(idx, ip / basis_norm(idx, r));
    }
    Ok(set)
}

/// `sum_idx X_idx * c_idx / ||X_idx||`.
pub fn reconstruct(c: &FourierCoefficientSet, table: &BasisTable) -> Result<FloatAPoly> {
    let mut out = FloatAPoly::zero();
    for (idx, v) in &c.entries {
        let e = table.get(idx)?;
        out = out.add(&e.poly.to_f64().scale(&(v / basis_norm(*idx, c.radius))));
    }
    Ok(out)
}

/// Main part (`m <= n`) and hyperholomorphic-constant part (`m = n + 1`).
pub fn split_main_constant(c: &FourierCoefficientSet) -> (FourierCoefficientSet, FourierCoefficientSet) {
    let mut main = FourierCoefficientSet::empty(c.radius, c.degree_max);
    let mut constant = FourierCoefficientSet::empty(c.radius, c.degree_max);
    for (idx, v) in &c.entries {
        if idx.is_hyperholomorphic_constant() {
            constant.entries.insert(*idx, *v);
        } else {
            main.entries.insert(*idx, *v);
        }
    }
    (main, constant)
}

/// Term-by-term hypercomplex derivative: `(n, fam, m)` with `1 <= n`,
/// `m <= n` maps to `(n-1, fam, m)` scaled by
/// `(n+m+1) ||X_{n-1}|| / ||X_n||`; everything else is annihilated.
pub fn derivative_series(c: &FourierCoefficientSet) -> FourierCoefficientSet {
    let mut out = FourierCoefficientSet::empty(c.radius, c.degree_max.saturating_sub(1));
    for (idx, v) in &c.entries {
        let Some(lower) = idx.lowered() else { continue };
        let factor = (idx.n() + idx.m() + 1) as f64 * basis_norm(lower, c.radius)
            / basis_norm(*idx, c.radius);
        out.add(lower, v * factor);
    }
    out
}

/// Term-by-term primitive without hyperholomorphic constants:
/// `(n, fam, m)` maps to `(n+1, fam, m)` scaled by
/// `||X_{n+1}|| / ((n+m+2) ||X_n||)`.
pub fn primitive_series(c: &FourierCoefficientSet) -> FourierCoefficientSet {
    let mut out = FourierCoefficientSet::empty(c.radius, c.degree_max + 1);
    for (idx, v) in &c.entries {
        let upper = idx.raised();
        let factor = basis_norm(upper, c.radius)
            / ((idx.n() + idx.m() + 2) as f64 * basis_norm(*idx, c.radius));
        out.add(upper, v * factor);
    }
    out
}

/// `f(0) = (1/2) sqrt(3 / (pi r^3)) (a_0^0 - a_0^1 i - b_0^1 j)`.
pub fn value_at_origin(c: &FourierCoefficientSet) -> ReducedQuaternion<f64> {
    let r = c.radius;
    let s = 0.5 * (3.0 / (std::f64::consts::PI * r * r * r)).sqrt();
    let a00 = c.get(&BasisIndex::x(0, 0));
    let a01 = c.get(&BasisIndex::x(0, 1));
    let b01 = c.get(&BasisIndex::y(0, 1));
    ReducedQuaternion::new(s * a00, -s * a01, -s * b01)
}

/// Coefficients drawn uniformly from `[-1, 1]` for every index of degree
/// at most `degree`.
pub fn random_coefficient_set(rng: &mut impl Rng, degree: u32, radius: f64) -> FourierCoefficientSet {
    let mut set = FourierCoefficientSet::empty(radius, degree);
    for idx in BasisIndex::up_to_degree(degree) {
        set.add(idx, rng.gen_range(-1.0..=1.0));
    }
    set
}

/// One term of a function specification: `coeff * X_n^{m,†}` (or `Y`),
/// against the unnormalized element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecTerm {
    pub n: i64,
    pub family: Family,
    pub m: i64,
    pub coeff: f64,
}

/// `{"radius": r, "terms": [...]}`: a finite basis combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub radius: f64,
    pub terms: Vec<SpecTerm>,
}

/// A function given either as a basis combination or as raw polynomial
/// components.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionInput {
    Spec(FunctionSpec),
    Raw(Vec<ComponentJson>),
}

impl FunctionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "radius {} must be positive and finite",
                self.radius
            )));
        }
        for (k, t) in self.terms.iter().enumerate() {
            BasisIndex::new(t.n, t.family, t.m).map_err(|e| {
                Error::InvalidInput(format!(
                    "term {k} (n={}, family={}, m={}): {e}",
                    t.n, t.family, t.m
                ))
            })?;
            if !t.coeff.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "term {k} (n={}, family={}, m={}): coefficient is not finite",
                    t.n, t.family, t.m
                )));
            }
        }
        Ok(())
    }

    /// The exact polynomial; decimal coefficients convert exactly from
    /// their binary representation.
    pub fn to_exact(&self, table: &BasisTable) -> Result<ExactAPoly> {
        self.validate()?;
        let mut out = ExactAPoly::zero();
        for t in &self.terms {
            let idx = BasisIndex::new(t.n, t.family, t.m)?;
            let c = f64_to_rational(t.coeff).ok_or_else(|| {
                Error::InvalidInput(format!("coefficient {} is not finite", t.coeff))
            })?;
            out = out.add(&table.get(&idx)?.poly.scale(&c));
        }
        Ok(out)
    }

    pub fn radius_rational(&self) -> Result<Rational> {
        f64_to_rational(self.radius)
            .ok_or_else(|| Error::InvalidInput(format!("radius {} is not finite", self.radius)))
    }
}

impl FunctionInput {
    /// Parses either form; an object is read as a basis combination, an
    /// array as raw components.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let trimmed = s.trim_start();
        if trimmed.starts_with('[') {
            Ok(FunctionInput::Raw(serde_json::from_str(s)?))
        } else {
            Ok(FunctionInput::Spec(serde_json::from_str(s)?))
        }
    }

    /// Polynomial and radius (raw polynomials default to the unit ball).
    pub fn load(&self, table: &BasisTable) -> Result<(ExactAPoly, Rational)> {
        match self {
            FunctionInput::Spec(spec) => Ok((spec.to_exact(table)?, spec.radius_rational()?)),
            FunctionInput::Raw(parts) => {
                let f = ExactAPoly::from_json(parts)?;
                if !f.is_monogenic() {
                    return Err(Error::NotMonogenic(
                        "raw polynomial input fails D f = 0".into(),
                    ));
                }
                Ok((f, Rational::from_i64(1)))
            }
        }
    }
}

/// Serializable view of a coefficient set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub n: u32,
    pub family: Family,
    pub m: u32,
    pub coeff: f64,
    pub coeff_denormalized: f64,
}

pub fn coefficients_json(c: &FourierCoefficientSet) -> Vec<CoefficientJson> {
    c.entries
        .iter()
        .map(|(i, v)| CoefficientJson {
            n: i.n(),
            family: i.family(),
            m: i.m(),
            coeff: *v,
            coeff_denormalized: v / basis_norm(*i, c.radius),
        })
        .collect()
}

/// The `A`-valued part of `(1/2) Dbar f` for monogenic `f`.
pub fn hypercomplex_derivative<C: Scalar>(f: &APoly<C>) -> APoly<C> {
    let h = f.apply_half_dbar();
    APoly::new(h.c[0].clone(), h.c[1].clone(), h.c[2].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::default_table;
    use crate::scalar::{int, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(n: u32, m: u32) -> BasisIndex {
        BasisIndex::x(n, m)
    }

    fn poly(idx: BasisIndex) -> ExactAPoly {
        default_table().get(&idx).unwrap().poly.clone()
    }

    #[test]
    fn expand_examples() {
        let t = default_table();
        let one = int(1);
        let c = expand(&poly(x(1, 0)), &one, t).unwrap();
        assert_eq!(c.entries.len(), 1);
        let expected = (2.0 * std::f64::consts::PI / 5.0).sqrt();
        assert!((c.get(&x(1, 0)) - expected).abs() < 1e-15);

        assert!(expand(&ExactAPoly::zero(), &one, t).unwrap().is_empty());

        let f = poly(x(1, 0)).scale(&int(2)).add(&poly(x(1, 2)).scale(&int(3)));
        let exact = exact_denormalized_coefficients(&f, &one, t).unwrap();
        assert_eq!(exact.len(), 2);
        assert_eq!(exact[&x(1, 0)], int(2));
        assert_eq!(exact[&x(1, 2)], int(3));

        let not_monogenic = APoly::scalar(crate::poly::RealTriPoly::var(0));
        assert!(matches!(expand(&not_monogenic, &one, t), Err(Error::NotMonogenic(_))));
    }

    #[test]
    fn reconstruct_examples() {
        let t = default_table();
        assert!(reconstruct(&FourierCoefficientSet::empty(1.0, 0), t).unwrap().is_zero());
        let f = poly(BasisIndex::x(2, 1));
        let c = expand(&f, &int(1), t).unwrap();
        let back = expand_f64(&reconstruct(&c, t).unwrap(), 1.0, t).unwrap();
        assert!(c.max_abs_diff(&back) < 1e-12);
    }

    #[test]
    fn split_examples() {
        let t = default_table();
        let f = poly(x(1, 0)).add(&poly(x(1, 2)));
        let (g, h) = split_main_constant(&expand(&f, &int(1), t).unwrap());
        assert_eq!(g.entries.keys().copied().collect::<Vec<_>>(), vec![x(1, 0)]);
        assert_eq!(h.entries.keys().copied().collect::<Vec<_>>(), vec![x(1, 2)]);

        let mut constants = FourierCoefficientSet::empty(1.0, 2);
        constants.add(x(2, 3), 1.0);
        constants.add(BasisIndex::y(0, 1), -2.0);
        let (g, h) = split_main_constant(&constants);
        assert!(g.is_empty());
        assert_eq!(h, constants);
    }

    #[test]
    fn derivative_examples() {
        let mut c = FourierCoefficientSet::empty(1.0, 1);
        c.add(x(1, 0), 1.0);
        let d = derivative_series(&c);
        let expected = 2.0 * basis_norm(x(0, 0), 1.0) / basis_norm(x(1, 0), 1.0);
        assert_eq!(d.entries.len(), 1);
        assert!((d.get(&x(0, 0)) - expected).abs() < 1e-15);

        let mut constants = FourierCoefficientSet::empty(1.0, 3);
        constants.add(x(3, 4), 1.0);
        constants.add(BasisIndex::y(1, 2), 1.0);
        assert!(derivative_series(&constants).is_empty());
    }

    #[test]
    fn primitive_examples() {
        let t = default_table();
        let mut c = FourierCoefficientSet::empty(1.0, 0);
        c.add(x(0, 0), 1.0);
        let p = primitive_series(&c);
        assert_eq!(p.entries.len(), 1);
        // denormalized: X_0 / ||X_0||  ->  X_1 / (2 ||X_0||)
        let den = p.denormalized()[&x(1, 0)];
        assert!((den - 0.5 / basis_norm(x(0, 0), 1.0)).abs() < 1e-15);
        // and the reconstruction differentiates back
        let prim = reconstruct(&p, t).unwrap();
        let d = prim.apply_half_dbar().eval_f64([0.3, -0.2, 0.1]);
        assert!((d.z0 - 1.0 / basis_norm(x(0, 0), 1.0) * 0.5).abs() < 1e-14);

        assert!(primitive_series(&FourierCoefficientSet::empty(1.0, 0)).is_empty());
    }

    #[test]
    fn derivative_primitive_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let c = random_coefficient_set(&mut rng, 5, 1.0);
            let back = derivative_series(&primitive_series(&c));
            assert!(c.max_abs_diff(&back) < 1e-12);
            assert!(primitive_series(&c).entries.keys().all(|i| !i.is_hyperholomorphic_constant()));
        }
    }

    #[test]
    fn derivative_agrees_with_symbolic() {
        let t = default_table();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let c = random_coefficient_set(&mut rng, 5, 1.0);
            let symbolic = hypercomplex_derivative(&reconstruct(&c, t).unwrap());
            let series = reconstruct(&derivative_series(&c), t).unwrap();
            for p in [[0.1, 0.2, -0.3], [0.5, -0.5, 0.1], [0.0, 0.0, 0.9]] {
                let (a, b) = (symbolic.eval_f64(p), series.eval_f64(p));
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn origin_value_examples() {
        let s = 0.5 * (3.0 / std::f64::consts::PI).sqrt();
        let mut c = FourierCoefficientSet::empty(1.0, 0);
        c.add(x(0, 0), 1.0);
        let v = value_at_origin(&c);
        assert!((v.x0 - s).abs() < 1e-15 && v.x1 == 0.0 && v.x2 == 0.0);

        assert_eq!(value_at_origin(&FourierCoefficientSet::empty(1.0, 0)), ReducedQuaternion::zero());

        let mut c = FourierCoefficientSet::empty(1.0, 0);
        c.add(x(0, 1), 1.0);
        let v = value_at_origin(&c);
        assert!((v.x1 + s).abs() < 1e-15 && v.x0 == 0.0);
    }

    #[test]
    fn radius_changes_coefficients() {
        let t = default_table();
        let f = poly(x(2, 1));
        let c1 = expand(&f, &int(1), t).unwrap();
        let c2 = expand(&f, &rat(1, 2), t).unwrap();
        // ||X||_{B_r} scales as r^{n + 3/2}
        let ratio = c2.get(&x(2, 1)) / c1.get(&x(2, 1));
        assert!((ratio - 0.5f64.powf(3.5)).abs() < 1e-14);
    }

    #[test]
    fn function_spec_validation() {
        let t = default_table();
        let spec: FunctionSpec = serde_json::from_str(
            r#"{"radius": 1.0, "terms": [{"n": 1, "family": "X", "m": 0, "coeff": 2.0},
                                          {"n": 2, "family": "Y", "m": 0, "coeff": 1.0}]}"#,
        )
        .unwrap();
        let err = spec.to_exact(t).unwrap_err().to_string();
        assert!(err.contains("term 1"), "{err}");
        assert!(err.contains("family=Y"), "{err}");

        let good = FunctionInput::from_json_str(
            r#"{"radius": 0.5, "terms": [{"n": 1, "family": "X", "m": 0, "coeff": 0.25}]}"#,
        )
        .unwrap();
        let (f, r) = good.load(t).unwrap();
        assert_eq!(r, rat(1, 2));
        assert_eq!(f, poly(x(1, 0)).scale(&rat(1, 4)));

        let raw = FunctionInput::from_json_str(
            r#"[{"component": 0, "terms": [{"e": [1,0,0], "num": 1, "den": 1}]}]"#,
        )
        .unwrap();
        assert!(matches!(raw.load(t), Err(Error::NotMonogenic(_))));
    }
}
