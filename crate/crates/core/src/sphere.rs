//! Quasi-uniform point sets on the unit sphere and local refinement
//! patterns used by the maximum-modulus search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quaternion::Quaternion;

pub type Point = [f64; 3];

/// Parameters of a sphere search: lattice size, refinement rounds and the
/// seed of the random rotation applied to the lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereSampling {
    pub count: usize,
    pub refinement_rounds: usize,
    pub candidates: usize,
    pub seed: u64,
}

impl Default for SphereSampling {
    fn default() -> Self {
        Self {
            count: 4096,
            refinement_rounds: 3,
            candidates: 8,
            seed: 42,
        }
    }
}

impl SphereSampling {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Mean spacing between neighbouring lattice points.
    pub fn spacing(&self) -> f64 {
        (4.0 * std::f64::consts::PI / self.count.max(1) as f64).sqrt()
    }

    /// The rotated Fibonacci lattice on the unit sphere.
    pub fn points(&self) -> Vec<Point> {
        let rot = random_rotation(self.seed);
        fibonacci_sphere(self.count)
            .into_iter()
            .map(|p| rotate(&rot, p))
            .collect()
    }
}

pub fn norm(p: &Point) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

pub fn scale(p: &Point, s: f64) -> Point {
    [p[0] * s, p[1] * s, p[2] * s]
}

pub fn add(p: &Point, q: &Point) -> Point {
    [p[0] + q[0], p[1] + q[1], p[2] + q[2]]
}

pub fn normalize(p: &Point) -> Point {
    scale(p, 1.0 / norm(p))
}

/// Golden-angle spiral with `n` points.
pub fn fibonacci_sphere(n: usize) -> Vec<Point> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            normalize(&[z, rho * phi.cos(), rho * phi.sin()])
        })
        .collect()
}

/// Uniformly distributed unit quaternion from the given seed.
fn random_rotation(seed: u64) -> Quaternion<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return q.scale(&(1.0 / n));
        }
    }
}

fn rotate(rot: &Quaternion<f64>, p: Point) -> Point {
    let v = Quaternion::new(0.0, p[0], p[1], p[2]);
    let w = rot.mul(&v).mul(&rot.conj());
    normalize(&[w.z1, w.z2, w.z3])
}

/// `n` independent uniform directions drawn from `rng`.
pub fn random_directions(rng: &mut impl Rng, n: usize) -> Vec<Point> {
    (0..n)
        .map(|_| loop {
            let p = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let r = norm(&p);
            if r > 1e-6 && r <= 1.0 {
                break scale(&p, 1.0 / r);
            }
        })
        .collect()
}

/// Orthonormal pair spanning the tangent plane at the unit vector `p`.
pub fn tangent_frame(p: &Point) -> (Point, Point) {
    let helper = if p[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let u = normalize(&cross(p, &helper));
    let v = cross(p, &u);
    (u, v)
}

fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// A `(2w+1) x (2w+1)` grid of unit vectors around `center`, with
/// tangential step `step`, projected back onto the sphere.
pub fn local_patch(center: &Point, step: f64, w: i32) -> Vec<Point> {
    let (u, v) = tangent_frame(center);
    let mut out = Vec::with_capacity(((2 * w + 1) * (2 * w + 1)) as usize);
    for a in -w..=w {
        for b in -w..=w {
            let p = add(
                center,
                &add(&scale(&u, a as f64 * step), &scale(&v, b as f64 * step)),
            );
            out.push(normalize(&p));
        }
    }
    out
}
