//! Quaternion analysis for the Riesz system in R^3.
//!
//! The crate builds the solid spherical monogenics `X_n^{m,†}`, `Y_n^{m,†}`
//! from solid spherical harmonics with exact rational arithmetic, checks
//! their algebraic properties as exact identities, and provides the Fourier
//! machinery (expansion, hypercomplex derivative and primitive) used to
//! audit the growth estimates and Bloch-type constants for `A`-valued
//! monogenic functions.
//!
//! Exact identities run over [`scalar::Rational`]; inequalities run in
//! `f64`, with the constants themselves evaluated exactly in `Q(sqrt 3)`.

pub mod ball;
pub mod basis;
pub mod bloch;
pub mod error;
pub mod fourier;
pub mod harmonic;
pub mod json;
pub mod poly;
pub mod quaternion;
pub mod qsqrt3;
pub mod report;
pub mod scalar;
pub mod sphere;
pub mod univariate;

pub use error::{Error, Result};
