//! Growth estimates for monogenic functions on `B_r`, the auxiliary
//! function `g`, the image-ball bound and the Bloch constants.

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::ball::{max_modulus, max_modulus_on_sphere};
use crate::basis::BasisTable;
use crate::error::{Error, Result};
use crate::fourier::{
    derivative_series, expand_f64, hypercomplex_derivative, primitive_series,
    random_coefficient_set, reconstruct, value_at_origin, FourierCoefficientSet,
};
use crate::poly::FloatAPoly;
use crate::qsqrt3::{precision_digits, QSqrt3, QSqrt3Json};
use crate::quaternion::ReducedQuaternion;
use crate::scalar::{f64_to_rational, int, rat, Rational, Scalar};
use crate::sphere::{self, Point, SphereSampling};
use crate::univariate::UniPoly;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheckRecord {
    pub point: Point,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl BoundCheckRecord {
    pub fn new(point: Point, lhs: f64, rhs: f64) -> Self {
        Self {
            point,
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }

    pub fn passes(&self) -> bool {
        self.slack >= 0.0
    }
}

pub fn worst_slack(records: &[BoundCheckRecord]) -> f64 {
    records.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
}

fn check_inside(x_norm: f64, r: f64) -> Result<()> {
    if !(r > 0.0 && x_norm >= 0.0 && x_norm < r) {
        return Err(Error::Domain(format!("need 0 <= |x| < r, got |x| = {x_norm}, r = {r}")));
    }
    Ok(())
}

/// `(2/√3) x^2 (4x^2 + 9r^2 - 11xr) / (r - x)^3`.
pub fn lemma1_rhs_factor(x_norm: f64, r: f64) -> Result<f64> {
    check_inside(x_norm, r)?;
    let x = x_norm;
    Ok(2.0 / 3f64.sqrt() * x * x * (4.0 * x * x + 9.0 * r * r - 11.0 * x * r) / (r - x).powi(3))
}

/// `6 |x| r / (r - |x|)^2`.
pub fn lemma2_rhs_factor(x_norm: f64, r: f64) -> Result<f64> {
    check_inside(x_norm, r)?;
    Ok(6.0 * x_norm * r / (r - x_norm).powi(2))
}

/// Sample points `rho * p` for every radius and direction.
pub fn shell_points(radii: &[f64], directions: &[Point]) -> Vec<Point> {
    radii
        .iter()
        .flat_map(|&rho| directions.iter().map(move |p| sphere::scale(p, rho)))
        .collect()
}

/// `|F(x)|` against `(2/√3)|x|^2(...)/(r-|x|)^3 M(½D̄f - ½D̄f(0), r)` where
/// `F` is the primitive of `½D̄f - ½D̄f(0)`. Degree-0 coefficients of `f`
/// are dropped first so that `f(0) = 0`.
pub fn verify_lemma1(
    c: &FourierCoefficientSet,
    points: &[Point],
    table: &BasisTable,
    sampling: &SphereSampling,
) -> Result<Vec<BoundCheckRecord>> {
    let r = c.radius;
    let mut diff = derivative_series(&c.without_degree_zero());
    diff.entries.retain(|i, _| i.n() > 0);
    let lhs_poly = reconstruct(&primitive_series(&diff), table)?;
    let m = max_modulus(&reconstruct(&diff, table)?, r, sampling)?.value;
    points
        .iter()
        .map(|&p| {
            let factor = lemma1_rhs_factor(sphere::norm(&p), r)?;
            Ok(BoundCheckRecord::new(p, lhs_poly.eval_f64(p).norm(), factor * m))
        })
        .collect()
}

/// `|½D̄f(x) - ½D̄f(0)| <= 6|x|r/(r-|x|)^2 M(½D̄f, r)`.
pub fn verify_lemma2(
    c: &FourierCoefficientSet,
    points: &[Point],
    table: &BasisTable,
    sampling: &SphereSampling,
) -> Result<Vec<BoundCheckRecord>> {
    let r = c.radius;
    let d = reconstruct(&derivative_series(c), table)?;
    let d0 = d.eval_f64([0.0; 3]);
    let m = max_modulus(&d, r, sampling)?.value;
    points
        .iter()
        .map(|&p| {
            let factor = lemma2_rhs_factor(sphere::norm(&p), r)?;
            let v = d.eval_f64(p);
            let lhs = ReducedQuaternion::new(v.x0 - d0.x0, v.x1 - d0.x1, v.x2 - d0.x2).norm();
            Ok(BoundCheckRecord::new(p, lhs, factor * m))
        })
        .collect()
}

/// A quotient of univariate polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn<C> {
    pub num: UniPoly<C>,
    pub den: UniPoly<C>,
}

impl<C: Scalar> RatFn<C> {
    pub fn derivative(&self) -> Self {
        Self {
            num: self
                .num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            den: self.den.mul(&self.den),
        }
    }

    pub fn eval(&self, x: &C) -> C {
        self.num.eval(x).div(&self.den.eval(x))
    }
}

/// `h(ρ) = ρ^3 r (4ρ^2 + 9r^2 - 11ρr) / (r - ρ)^5`, so that
/// `g(ρ) = ρ/2 - 8√3 h(ρ)`.
pub fn g_tail<C: Scalar>(r: &C) -> RatFn<C> {
    let r2 = r.clone() * r.clone();
    let r3 = r2.clone() * r.clone();
    let num = UniPoly::new(vec![
        C::zero(),
        C::zero(),
        C::zero(),
        C::from_i64(9) * r3,
        C::from_i64(-11) * r2,
        C::from_i64(4) * r.clone(),
    ]);
    let den = UniPoly::new(vec![r.clone(), -C::one()]).pow(5);
    RatFn { num, den }
}

/// `h`, `h'` and `h''`.
pub fn g_tail_derivatives<C: Scalar>(r: &C) -> [RatFn<C>; 3] {
    let h = g_tail(r);
    let h1 = h.derivative();
    let h2 = h1.derivative();
    [h, h1, h2]
}

fn check_rho(rho: f64, r: f64) -> Result<()> {
    if !(r > 0.0 && rho > 0.0 && rho < r) {
        return Err(Error::Domain(format!("need 0 < rho < r, got rho = {rho}, r = {r}")));
    }
    Ok(())
}

/// Double-precision wrappers evaluate exactly at the binary values of
/// their arguments; the expanded denominators cancel badly near `ρ = r`.
fn g_f64(order: usize, rho: f64, r: f64) -> Result<f64> {
    check_rho(rho, r)?;
    let to_q = |v: f64| f64_to_rational(v).ok_or_else(|| Error::NonFinite(format!("{v}")));
    Ok(g_exact(order, &to_q(rho)?, &to_q(r)?)?.to_f64())
}

pub fn g_eval(rho: f64, r: f64) -> Result<f64> {
    g_f64(0, rho, r)
}

pub fn g_prime(rho: f64, r: f64) -> Result<f64> {
    g_f64(1, rho, r)
}

pub fn g_second(rho: f64, r: f64) -> Result<f64> {
    g_f64(2, rho, r)
}

fn check_rho_exact(rho: &Rational, r: &Rational) -> Result<()> {
    use num_traits::Signed;
    if !(r.is_positive() && rho.is_positive() && rho < r) {
        return Err(Error::Domain(format!("need 0 < rho < r, got rho = {rho}, r = {r}")));
    }
    Ok(())
}

/// `g`, `g'` or `g''` (by `order`) at rational arguments, exactly.
pub fn g_exact(order: usize, rho: &Rational, r: &Rational) -> Result<QSqrt3> {
    check_rho_exact(rho, r)?;
    if order > 2 {
        return Err(Error::InvalidInput(format!("derivative order {order} > 2")));
    }
    let h = &g_tail_derivatives(r)[order];
    let tail = h.eval(rho) * int(-8);
    let rational = match order {
        0 => rho * rat(1, 2),
        1 => rat(1, 2),
        _ => int(0),
    };
    Ok(QSqrt3::new(rational, tail))
}

/// `1/60 - (62192/20511149)√3`, the image-ball constant.
pub fn image_ball_constant() -> QSqrt3 {
    QSqrt3::new(rat(1, 60), rat(-62192, 20511149))
}

/// `1/120 - (31096/20511149)√3`, the Bloch radius constant.
pub fn bloch_radius_constant() -> QSqrt3 {
    QSqrt3::new(rat(1, 120), rat(-31096, 20511149))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicRootAnalysis {
    pub coefficients: [i64; 4],
    #[serde(with = "crate::json::big_int")]
    pub discriminant: BigInt,
    pub real_roots: usize,
    /// A bracket `[lo, hi]` around the single real root when there is one.
    pub root_bracket: Option<[f64; 2]>,
    pub root_negative: bool,
}

/// `p(ρ) = 3ρ^3 - 7ρ^2 r + 5ρ r^2 + 9r^3` at `r = 1`; the sign of the
/// discriminant is the same for every `r > 0` by homogeneity.
pub fn cubic_root_analysis() -> CubicRootAnalysis {
    let [a, b, c, d] = [3i64, -7, 5, 9];
    let (a_, b_, c_, d_) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
    let disc = BigInt::from(18) * &a_ * &b_ * &c_ * &d_ - BigInt::from(4) * b_.pow(3) * &d_
        + b_.pow(2) * c_.pow(2)
        - BigInt::from(4) * &a_ * c_.pow(3)
        - BigInt::from(27) * a_.pow(2) * d_.pow(2);
    let p = |x: &Rational| {
        let coeffs = [int(d), int(c), int(b), int(a)];
        coeffs.iter().rev().fold(int(0), |acc, k| acc * x + k)
    };
    let real_roots = if disc < BigInt::from(0) { 1 } else { 3 };
    let mut root_bracket = None;
    let mut root_negative = false;
    if real_roots == 1 {
        // p(0) = 9 > 0 and the leading coefficient is positive
        let mut lo = int(-1);
        while p(&lo) > int(0) {
            lo = lo * int(2);
        }
        let mut hi = int(0);
        for _ in 0..60 {
            let mid = (&lo + &hi) * rat(1, 2);
            if p(&mid) > int(0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        root_negative = hi < int(0);
        root_bracket = Some([lo.to_f64(), hi.to_f64()]);
    }
    CubicRootAnalysis {
        coefficients: [a, b, c, d],
        discriminant: disc,
        real_roots,
        root_bracket,
        root_negative,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GMaximum {
    pub rho_max: f64,
    pub g_max: f64,
}

/// Golden-section search on `(0, r)`, then bisection on `g'` inside the
/// final bracket to resolve `ρ` beyond the flat top of `g`.
pub fn maximize_g(r: f64) -> Result<GMaximum> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    let g = |x: f64| g_eval(x, r).unwrap_or(f64::NEG_INFINITY);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (r * 1e-9, r * (1.0 - 1e-9));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > 1e-9 * r {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    // widen until g' changes sign, then bisect
    let gp = |x: f64| g_prime(x, r).unwrap_or(f64::NAN);
    let mut width = b - a;
    let mut lo = (a - width).max(r * 1e-12);
    let mut hi = (b + width).min(r * (1.0 - 1e-12));
    while !(gp(lo) > 0.0 && gp(hi) < 0.0) {
        width *= 2.0;
        lo = (a - width).max(r * 1e-12);
        hi = (b + width).min(r * (1.0 - 1e-12));
        if width > r {
            return Err(Error::NonFinite("no sign change of g' found".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gp(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    Ok(GMaximum {
        rho_max: rho,
        g_max: g(rho),
    })
}

/// An exact constant with its decimal expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactConstant {
    pub exact: QSqrt3Json,
    pub decimal: String,
}

impl ExactConstant {
    pub fn new(v: &QSqrt3, digits: usize) -> Self {
        Self {
            exact: v.to_json(),
            decimal: v.to_decimal(digits),
        }
    }
}

/// A claimed inequality evaluated exactly but never asserted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InformationalComparison {
    pub claim: String,
    pub constant_decimal: String,
    pub bound_decimal: String,
    pub holds: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlochConstantsReport {
    /// `g(r/30)` at `r = 1`; the value at radius `r` is this times `r`.
    pub g_at_r30: ExactConstant,
    pub g_at_r30_equals_image_ball_constant: bool,
    pub g_at_r30_f64_relative_error: f64,
    pub rho_max: f64,
    pub g_max: f64,
    pub g_max_dominates_g_at_r30: bool,
    pub image_ball_constant: ExactConstant,
    pub bloch_radius_constant: ExactConstant,
    pub halving_identity_exact: bool,
    pub digits: usize,
    pub informational: Vec<InformationalComparison>,
}

impl BlochConstantsReport {
    /// All assertable parts; the informational comparisons are excluded.
    pub fn pass(&self) -> bool {
        self.g_at_r30_equals_image_ball_constant
            && self.g_at_r30_f64_relative_error <= 1e-14
            && self.g_max_dominates_g_at_r30
            && self.halving_identity_exact
    }
}

fn compare_claim(name: &str, v: &QSqrt3, bound: Rational, digits: usize) -> InformationalComparison {
    let b = QSqrt3::rational(bound.clone());
    let holds = *v > b;
    let note = if holds {
        "claim holds".to_string()
    } else {
        format!("the exact constant is below {bound}; the stated lower bound does not hold")
    };
    InformationalComparison {
        claim: format!("{name} > {bound}"),
        constant_decimal: v.to_decimal(digits),
        bound_decimal: b.to_decimal(digits),
        holds,
        note,
    }
}

pub fn bloch_constants() -> Result<BlochConstantsReport> {
    let digits = precision_digits();
    let g30 = g_exact(0, &rat(1, 30), &int(1))?;
    let c52 = image_ball_constant();
    let cb = bloch_radius_constant();
    let g30_f64 = g_eval(1.0 / 30.0, 1.0)?;
    let c52_f64 = c52.to_f64();
    let gm = maximize_g(1.0)?;
    Ok(BlochConstantsReport {
        g_at_r30: ExactConstant::new(&g30, digits),
        g_at_r30_equals_image_ball_constant: g30 == c52,
        g_at_r30_f64_relative_error: ((g30_f64 - c52_f64) / c52_f64).abs(),
        rho_max: gm.rho_max,
        g_max: gm.g_max,
        g_max_dominates_g_at_r30: gm.g_max >= g30_f64,
        image_ball_constant: ExactConstant::new(&c52, digits),
        bloch_radius_constant: ExactConstant::new(&cb, digits),
        halving_identity_exact: cb.clone() * QSqrt3::from_i64(2) == c52,
        digits,
        informational: vec![
            compare_claim("image_ball_constant", &c52, rat(1, 75), digits),
            compare_claim("bloch_radius_constant", &cb, rat(1, 150), digits),
        ],
    })
}

/// Partial sum of `sum_{n>=2} (n+1)^2 t^n` to convergence, and the closed
/// form `t^2 (9 - 11t + 4t^2) / (1 - t)^3`.
pub fn series_closed_form_check(t: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("series diverges or is undefined for t = {t}")));
    }
    let closed = t * t * (9.0 - 11.0 * t + 4.0 * t * t) / (1.0 - t).powi(3);
    let mut sum = 0.0;
    let mut pow = t * t;
    let mut n = 2u64;
    loop {
        let term = ((n + 1) * (n + 1)) as f64 * pow;
        sum += term;
        if term <= f64::EPSILON * 1e-3 * sum || pow == 0.0 {
            break;
        }
        pow *= t;
        n += 1;
    }
    Ok((sum, closed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    /// `½D̄f` vanishes identically.
    Degenerate,
    /// `M(½D̄f, B_t(q)) > 2 |½D̄f(q)|` at the sampled `q`.
    HypothesisNotMet,
    Checked,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    pub status: ProbeStatus,
    pub q: Point,
    pub t: f64,
    pub derivative_at_q: f64,
    /// `|½D̄f(q)|` recovered from the expansion recentred at `q`.
    pub derivative_at_q_recentred: f64,
    pub local_max_derivative: f64,
    pub radius: f64,
    pub min_boundary_gap: f64,
    /// `x - q` at the smallest sampled gap.
    pub boundary_argmin: Point,
    pub slack: f64,
    pub pass: bool,
}

impl ProbeResult {
    fn degenerate() -> Self {
        Self {
            status: ProbeStatus::Degenerate,
            q: [0.0; 3],
            t: 0.5,
            derivative_at_q: 0.0,
            derivative_at_q_recentred: 0.0,
            local_max_derivative: 0.0,
            radius: 0.0,
            min_boundary_gap: 0.0,
            boundary_argmin: [0.0; 3],
            slack: 0.0,
            pass: true,
        }
    }
}

/// Search effort for [`probe_image_ball`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeSettings {
    pub shells: usize,
    pub directions: usize,
    pub boundary: SphereSampling,
    pub local: SphereSampling,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            shells: 32,
            directions: 512,
            boundary: SphereSampling {
                count: 1000,
                ..SphereSampling::default()
            },
            local: SphereSampling {
                count: 1024,
                ..SphereSampling::default()
            },
        }
    }
}

/// Maximizes `w(x) = |½D̄f(x)| (1 - |x|)` over the unit ball by a shell
/// sweep followed by compass search from the best candidates.
fn weighted_derivative_argmax(d: &FloatAPoly, settings: &ProbeSettings) -> (Point, f64) {
    let w = |x: Point| {
        let n = sphere::norm(&x);
        if n >= 1.0 {
            return 0.0;
        }
        d.eval_f64(x).norm() * (1.0 - n)
    };
    let dirs = SphereSampling {
        count: settings.directions,
        ..settings.local
    }
    .points();
    let mut scored = vec![(w([0.0; 3]), [0.0; 3])];
    for k in 1..settings.shells {
        let rho = k as f64 / settings.shells as f64;
        scored.extend(dirs.iter().map(|p| {
            let x = sphere::scale(p, rho);
            (w(x), x)
        }));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.truncate(8);
    let mut best = scored[0];
    for (v0, x0) in scored {
        let (mut v, mut x) = (v0, x0);
        let mut step = 1.0 / settings.shells as f64;
        while step > 1e-12 {
            let mut moved = false;
            for axis in 0..3 {
                for sign in [-1.0, 1.0] {
                    let mut y = x;
                    y[axis] += sign * step;
                    let vy = w(y);
                    if vy > v {
                        v = vy;
                        x = y;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if v > best.0 {
            best = (v, x);
        }
    }
    (best.1, best.0)
}

/// Locates `q` maximizing `|½D̄f(x)|(1-|x|)` on the unit ball, sets
/// `t = (1-|q|)/2`, checks `M(½D̄f, B_t(q)) <= 2|½D̄f(q)|` on the
/// recentred polynomial, and compares `min_{|x-q| = t/30} |f(x) - f(q)|`
/// with `R = (1/60 - 62192√3/20511149) t |½D̄f(q)|`.
pub fn probe_image_ball(f: &FloatAPoly, table: &BasisTable, settings: &ProbeSettings) -> Result<ProbeResult> {
    let d = hypercomplex_derivative(f);
    if d.max_abs_coeff() <= 1e-13 * f.max_abs_coeff().max(1.0) {
        return Ok(ProbeResult::degenerate());
    }
    let (q, _) = weighted_derivative_argmax(&d, settings);
    let t = (1.0 - sphere::norm(&q)) / 2.0;
    let dq = d.eval_f64(q).norm();

    let fq = f.translate(&q);
    let recentred = expand_f64(&fq, t, table)?;
    let dq_series = value_at_origin(&derivative_series(&recentred)).norm();
    let local_max = max_modulus(&hypercomplex_derivative(&fq), t, &settings.local)?.value;

    let radius = image_ball_constant().to_f64() * t * dq;
    let f0 = fq.eval_f64([0.0; 3]);
    let s = t / 30.0;
    let neg_gap = max_modulus_on_sphere(
        |p| {
            let v = fq.eval_f64(sphere::scale(&p, s));
            -ReducedQuaternion::new(v.x0 - f0.x0, v.x1 - f0.x1, v.x2 - f0.x2).norm()
        },
        &settings.boundary,
    )?;
    let gap = -neg_gap.value;
    let status = if local_max > 2.0 * dq * (1.0 + 1e-12) {
        ProbeStatus::HypothesisNotMet
    } else {
        ProbeStatus::Checked
    };
    Ok(ProbeResult {
        status,
        q,
        t,
        derivative_at_q: dq,
        derivative_at_q_recentred: dq_series,
        local_max_derivative: local_max,
        radius,
        min_boundary_gap: gap,
        boundary_argmin: sphere::scale(&neg_gap.argmax, s),
        slack: gap - radius,
        pass: status != ProbeStatus::Checked || gap >= radius,
    })
}

/// A random monogenic polynomial on the unit ball with normalized-basis
/// coefficients uniform in `[-1, 1]`, scaled so that `|½D̄f(0)| = 1`.
pub fn random_normalized_function(rng: &mut impl Rng, degree: u32, table: &BasisTable) -> Result<FloatAPoly> {
    loop {
        let c = random_coefficient_set(rng, degree, 1.0);
        let d0 = value_at_origin(&derivative_series(&c)).norm();
        if d0 > 1e-6 {
            return Ok(reconstruct(&c, table)?.scale(&(1.0 / d0)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{default_table, BasisIndex};
    use crate::fourier::expand;
    use crate::poly::{APoly, ExactAPoly, RealTriPoly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lemma1_factor_examples() {
        assert_eq!(lemma1_rhs_factor(0.0, 1.0).unwrap(), 0.0);
        assert!((lemma1_rhs_factor(0.5, 1.0).unwrap() - 6.0 * 3f64.sqrt()).abs() < 1e-13);
        assert!(lemma1_rhs_factor(1.0, 1.0).is_err());
        assert!(lemma1_rhs_factor(-0.1, 1.0).is_err());
        // times 12 x r / (r-x)^2 this is the tail 8√3 x^3 r (...) / (r-x)^5 of g
        let x = 1.0 / 30.0;
        let chain = lemma1_rhs_factor(x, 1.0).unwrap() * 12.0 * x / (1.0 - x).powi(2);
        let tail = 8.0 * 3f64.sqrt() * g_tail(&1.0).eval(&x);
        assert!((chain - tail).abs() < 1e-15);
    }

    #[test]
    fn g_closed_form_at_r30() {
        let g30 = g_exact(0, &rat(1, 30), &int(1)).unwrap();
        assert_eq!(g30, image_ball_constant());
        let rel = (g_eval(1.0 / 30.0, 1.0).unwrap() / image_ball_constant().to_f64() - 1.0).abs();
        assert!(rel < 1e-14, "{rel}");
        assert_eq!(
            image_ball_constant().to_decimal(8),
            "0.01141490"
        );
        assert_eq!(bloch_radius_constant().to_decimal(8), "0.00570745");
        // g(r/30, r) = r g(1/30, 1)
        let r = rat(7, 3);
        let scaled = g_exact(0, &(r.clone() * rat(1, 30)), &r).unwrap();
        assert_eq!(scaled, image_ball_constant() * QSqrt3::rational(r));
    }

    #[test]
    fn derivative_signs_exact() {
        let one = int(1);
        assert!(g_exact(1, &rat(1, 30), &one).unwrap().is_positive());
        assert!(!g_exact(1, &rat(1, 20), &one).unwrap().is_positive());
        for k in 1..1000 {
            let v = g_exact(2, &rat(k, 1000), &one).unwrap();
            assert_eq!(v.signum(), -1, "g'' at {k}/1000");
        }
        assert!(g_prime(1.0 / 30.0, 1.0).unwrap() > 0.0);
        assert!(g_prime(1.0 / 20.0, 1.0).unwrap() < 0.0);
        assert!(g_second(0.5, 1.0).unwrap() < 0.0);
        assert!(g_eval(0.0, 1.0).is_err());
    }

    #[test]
    fn second_derivative_matches_factored_form() {
        // h'' = 6 ρ r^2 (3ρ^3 - 7ρ^2 r + 5ρ r^2 + 9 r^3) / (r - ρ)^7
        for r in [int(1), rat(7, 3)] {
            let h2 = &g_tail_derivatives(&r)[2];
            let r2 = &r * &r;
            let p = UniPoly::new(vec![
                int(9) * &r2 * &r,
                int(5) * &r2,
                int(-7) * &r,
                int(3),
            ]);
            let num = UniPoly::new(vec![int(0), int(6) * &r2]).mul(&p);
            let den = UniPoly::new(vec![r.clone(), int(-1)]).pow(7);
            assert_eq!(h2.num.mul(&den), num.mul(&h2.den));
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for rho in [0.01, 0.04, 0.3, 0.6] {
            let h = 1e-6;
            let fd1 = (g_eval(rho + h, 1.0).unwrap() - g_eval(rho - h, 1.0).unwrap()) / (2.0 * h);
            let fd2 = (g_prime(rho + h, 1.0).unwrap() - g_prime(rho - h, 1.0).unwrap()) / (2.0 * h);
            let (d1, d2) = (g_prime(rho, 1.0).unwrap(), g_second(rho, 1.0).unwrap());
            assert!((fd1 - d1).abs() < 1e-6 * (1.0 + d1.abs()), "{rho} {fd1} {d1}");
            assert!((fd2 - d2).abs() < 1e-5 * (1.0 + d2.abs()), "{rho} {fd2} {d2}");
        }
    }

    #[test]
    fn cubic_has_one_negative_root() {
        let a = cubic_root_analysis();
        assert_eq!(a.discriminant, BigInt::from(-24620));
        assert_eq!(a.real_roots, 1);
        assert!(a.root_negative);
        let [lo, hi] = a.root_bracket.unwrap();
        assert!(-1.0 <= lo && hi < 0.0);
    }

    #[test]
    fn maximum_of_g() {
        let m = maximize_g(1.0).unwrap();
        assert!(m.rho_max > 1.0 / 30.0 && m.rho_max < 1.0 / 20.0);
        assert!(m.g_max >= g_eval(1.0 / 30.0, 1.0).unwrap());
        assert!(g_prime(m.rho_max, 1.0).unwrap().abs() < 1e-12);
        for r in [0.25, 3.0] {
            let s = maximize_g(r).unwrap();
            assert!((s.rho_max / (r * m.rho_max) - 1.0).abs() < 1e-12);
            assert!((s.g_max / (r * m.g_max) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn g_is_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let lambda: f64 = rng.gen_range(0.1..10.0);
            let rho: f64 = rng.gen_range(0.001..0.999);
            let a = g_eval(lambda * rho, lambda).unwrap();
            let b = lambda * g_eval(rho, 1.0).unwrap();
            assert!(((a - b) / b).abs() < 1e-12 || (a - b).abs() < 1e-12, "{lambda} {rho} {a} {b}");
        }
    }

    #[test]
    fn constants_report() {
        let rep = bloch_constants().unwrap();
        assert!(rep.pass());
        assert!(rep.halving_identity_exact);
        assert!(rep.image_ball_constant.decimal.starts_with("0.01141490"));
        assert!(rep.bloch_radius_constant.decimal.starts_with("0.0057074"));
        assert!(rep.image_ball_constant.decimal.len() >= 52);
        assert!(rep.informational.iter().all(|c| !c.holds));
    }

    #[test]
    fn series_identity() {
        assert_eq!(series_closed_form_check(0.0).unwrap(), (0.0, 0.0));
        for t in [0.1, 0.5, 0.9] {
            let (s, c) = series_closed_form_check(t).unwrap();
            assert!(((s - c) / c).abs() < 1e-12, "{t}: {s} vs {c}");
        }
        // t = 1/2: (1/4)(9 - 11/2 + 1)/(1/8) = 9
        assert!((series_closed_form_check(0.5).unwrap().1 - 9.0).abs() < 1e-14);
        assert!(series_closed_form_check(1.0).is_err());
    }

    fn exact_poly(idx: BasisIndex) -> ExactAPoly {
        default_table().get(&idx).unwrap().poly.clone()
    }

    fn radial_points() -> Vec<Point> {
        let dirs = sphere::fibonacci_sphere(8);
        let radii: Vec<f64> = (1..=50).map(|k| 0.8 * k as f64 / 50.0).collect();
        shell_points(&radii, &dirs)
    }

    #[test]
    fn lemma_examples() {
        let t = default_table();
        let s = SphereSampling::default();
        let c = expand(&exact_poly(BasisIndex::x(2, 0)), &int(1), t).unwrap();
        let pts = radial_points();
        assert!(verify_lemma1(&c, &pts, t, &s).unwrap().iter().all(|r| r.passes()));
        assert!(verify_lemma2(&c, &pts, t, &s).unwrap().iter().all(|r| r.passes()));

        let lin = expand(&exact_poly(BasisIndex::x(1, 1)), &int(1), t).unwrap();
        for r in verify_lemma1(&lin, &pts, t, &s).unwrap() {
            assert!(r.lhs < 1e-15);
        }
        for r in verify_lemma2(&lin, &pts, t, &s).unwrap() {
            assert!(r.lhs < 1e-15);
        }
    }

    #[test]
    fn probe_linear_function() {
        let t = default_table();
        let f = exact_poly(BasisIndex::x(1, 0)).to_f64();
        let p = probe_image_ball(&f, t, &ProbeSettings::default()).unwrap();
        assert_eq!(p.status, ProbeStatus::Checked);
        assert!(sphere::norm(&p.q) < 1e-9);
        assert!((p.t - 0.5).abs() < 1e-9);
        assert!((p.radius - 0.5 * image_ball_constant().to_f64()).abs() < 1e-9);
        assert!((p.derivative_at_q_recentred - 1.0).abs() < 1e-9);
        assert!(p.pass);

        let plus_constant = exact_poly(BasisIndex::x(1, 0))
            .add(&exact_poly(BasisIndex::x(2, 3)).scale(&rat(1, 20)))
            .to_f64();
        let p = probe_image_ball(&plus_constant, t, &ProbeSettings::default()).unwrap();
        assert!(sphere::norm(&p.q) < 1e-9);
        assert!(p.pass);

        let zero = probe_image_ball(&FloatAPoly::zero(), t, &ProbeSettings::default()).unwrap();
        assert_eq!(zero.status, ProbeStatus::Degenerate);
    }

    #[test]
    fn large_hyperholomorphic_constant_violates_ball_bound() {
        // ½D̄f = 1 everywhere, yet the quadratic constant term dominates on |x| = 1/60
        let f = exact_poly(BasisIndex::x(1, 0)).add(&exact_poly(BasisIndex::x(2, 3)));
        let p = probe_image_ball(&f.to_f64(), default_table(), &ProbeSettings::default()).unwrap();
        assert_eq!(p.status, ProbeStatus::Checked);
        assert!(sphere::norm(&p.q) < 1e-9);
        assert!(p.min_boundary_gap < p.radius);
        assert!(!p.pass);
    }

    #[test]
    fn flat_image_violates_ball_bound() {
        // f = x0 + x2 j is monogenic with ½D̄f = 1, but its image is a plane
        let f = APoly::new(
            RealTriPoly::var(0),
            RealTriPoly::zero(),
            RealTriPoly::var(2),
        );
        assert!(f.is_monogenic());
        let p = probe_image_ball(&f.to_f64(), default_table(), &ProbeSettings::default()).unwrap();
        assert_eq!(p.status, ProbeStatus::Checked);
        assert!((p.derivative_at_q - 1.0).abs() < 1e-12);
        assert!(p.min_boundary_gap < 1e-3 * p.radius);
        assert!(!p.pass);
    }
}
