//! Real quaternions and reduced quaternions (the span of `1, i, j`).
//!
//! Both types are generic over [`Scalar`], so the same code runs on exact
//! rationals and on `f64`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// `z0 + z1 i + z2 j + z3 k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub z0: T,
    pub z1: T,
    pub z2: T,
    pub z3: T,
}

/// `x0 + x1 i + x2 j`; identified with the point `(x0, x1, x2)` of R^3.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedQuaternion<T> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
}

/// Index of a basis unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Unit {
    One = 0,
    I = 1,
    J = 2,
    K = 3,
}

const UNITS: [Unit; 4] = [Unit::One, Unit::I, Unit::J, Unit::K];

/// Product of basis units indexed `0..4` as `1, i, j, k`: returns the sign
/// and the index of the resulting unit.
pub(crate) fn basis_product(a: usize, b: usize) -> (i8, usize) {
    let (sign, u) = unit_product(UNITS[a], UNITS[b]);
    (sign, u as usize)
}

/// Product of two basis units as (sign, unit), straight from the table
/// i^2 = j^2 = k^2 = -1, ij = k = -ji, jk = i = -kj, ki = j = -ik.
fn unit_product(a: Unit, b: Unit) -> (i8, Unit) {
    use Unit::*;
    match (a, b) {
        (One, u) | (u, One) => (1, u),
        (I, I) | (J, J) | (K, K) => (-1, One),
        (I, J) => (1, K),
        (J, I) => (-1, K),
        (J, K) => (1, I),
        (K, J) => (-1, I),
        (K, I) => (1, J),
        (I, K) => (-1, J),
    }
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(z0: T, z1: T, z2: T, z3: T) -> Self {
        Self { z0, z1, z2, z3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn real(v: T) -> Self {
        Self::new(v, T::zero(), T::zero(), T::zero())
    }

    pub fn components(&self) -> [&T; 4] {
        [&self.z0, &self.z1, &self.z2, &self.z3]
    }

    fn component_mut(&mut self, u: Unit) -> &mut T {
        match u {
            Unit::One => &mut self.z0,
            Unit::I => &mut self.z1,
            Unit::J => &mut self.z2,
            Unit::K => &mut self.z3,
        }
    }

    /// Quaternion product, expanded over all sixteen pairs of basis units.
    pub fn mul(&self, other: &Self) -> Self {
        let lhs = self.components();
        let rhs = other.components();
        let mut out = Self::zero();
        for (a, ua) in UNITS.iter().enumerate() {
            if lhs[a].is_zero() {
                continue;
            }
            for (b, ub) in UNITS.iter().enumerate() {
                if rhs[b].is_zero() {
                    continue;
                }
                let (sign, u) = unit_product(*ua, *ub);
                let term = lhs[a].clone() * rhs[b].clone();
                let slot = out.component_mut(u);
                *slot = if sign > 0 {
                    slot.clone() + term
                } else {
                    slot.clone() - term
                };
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.z0.clone(),
            -self.z1.clone(),
            -self.z2.clone(),
            -self.z3.clone(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.z0.clone() * s.clone(),
            self.z1.clone() * s.clone(),
            self.z2.clone() * s.clone(),
            self.z3.clone() * s.clone(),
        )
    }

    /// `z0^2 + z1^2 + z2^2 + z3^2`, exact in the coefficient field.
    pub fn norm_sq(&self) -> T {
        self.components()
            .iter()
            .fold(T::zero(), |acc, c| acc + (*c).clone() * (*c).clone())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().to_f64().sqrt()
    }

    pub fn scalar_part(&self) -> T {
        self.z0.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    /// Returns the reduced quaternion if the `k` component vanishes.
    pub fn to_reduced(&self) -> Option<ReducedQuaternion<T>> {
        self.z3.is_zero().then(|| {
            ReducedQuaternion::new(self.z0.clone(), self.z1.clone(), self.z2.clone())
        })
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::new(
            self.z0.to_f64(),
            self.z1.to_f64(),
            self.z2.to_f64(),
            self.z3.to_f64(),
        )
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.z0 + o.z0, self.z1 + o.z1, self.z2 + o.z2, self.z3 + o.z3)
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.z0 - o.z0, self.z1 - o.z1, self.z2 - o.z2, self.z3 - o.z3)
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.z0, -self.z1, -self.z2, -self.z3)
    }
}

impl<T: Scalar> Mul for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, o: Self) -> Quaternion<T> {
        Quaternion::mul(self, o)
    }
}

impl<T: Scalar> ReducedQuaternion<T> {
    pub fn new(x0: T, x1: T, x2: T) -> Self {
        Self { x0, x1, x2 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn real(v: T) -> Self {
        Self::new(v, T::zero(), T::zero())
    }

    pub fn to_quaternion(&self) -> Quaternion<T> {
        Quaternion::new(self.x0.clone(), self.x1.clone(), self.x2.clone(), T::zero())
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.x0.clone(), -self.x1.clone(), -self.x2.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.x0.clone() * self.x0.clone()
            + self.x1.clone() * self.x1.clone()
            + self.x2.clone() * self.x2.clone()
    }

    /// Euclidean norm of `(x0, x1, x2)`.
    pub fn norm(&self) -> f64 {
        self.norm_sq().to_f64().sqrt()
    }

    /// `(Sc x, Vec x)`; the parts sum back to `x`.
    pub fn scalar_vector_parts(&self) -> (T, Self) {
        (
            self.x0.clone(),
            Self::new(T::zero(), self.x1.clone(), self.x2.clone()),
        )
    }

    /// Product taken in H. The result generally has a `k` component, since
    /// the reduced quaternions do not form a subalgebra.
    pub fn mul(&self, other: &Self) -> Quaternion<T> {
        self.to_quaternion().mul(&other.to_quaternion())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.x0.clone() * s.clone(),
            self.x1.clone() * s.clone(),
            self.x2.clone() * s.clone(),
        )
    }

    pub fn to_f64(&self) -> ReducedQuaternion<f64> {
        ReducedQuaternion::new(self.x0.to_f64(), self.x1.to_f64(), self.x2.to_f64())
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.x0.clone(), self.x1.clone(), self.x2.clone()]
    }
}

impl<T: Scalar> Add for ReducedQuaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl<T: Scalar> Sub for ReducedQuaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl<T: Scalar> Neg for ReducedQuaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2)
    }
}
