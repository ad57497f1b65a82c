//! Smooth solutions of the ternary equation `X + Y = Z`.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`arith`] exact factorization, canonical triples and per-triple metrics
//!   (height, radical, smoothness, smoothness exponent, quality);
//! * [`smooth`] prime tables, enumeration and exact counts of y-smooth integers;
//! * [`search`] exhaustive search for smooth solutions below a height bound and
//!   the counting functions built on top of it;
//! * [`asymptotics`] Dickman's function, the saddle point of the smooth-number
//!   Dirichlet series and the binomial heuristic count;
//! * [`series`] the real zeta function, singular integrals and the non-archimedean
//!   singular series as accelerated Euler products;
//! * [`circle`] weighted exponential sums over smooth numbers, local main terms,
//!   partial Euler products and the Farey dissection.
//!
//! All floating point code is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`, which is what the tolerances
//! quoted throughout the documentation assume.

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod asymptotics;
pub mod circle;
mod error;
pub mod quad;
mod real;
pub mod report;
pub mod search;
pub mod series;
pub mod smooth;

pub use error::{Error, Result};
pub use real::Real;

/// Exact rational numbers, used for Farey endpoints.
pub type Rational = num_rational::Ratio<u64>;

pub type Complex64 = num_complex::Complex<f64>;
pub type TripleMetrics64 = arith::TripleMetrics<f64>;
pub type WeightFunction64 = circle::WeightFunction<f64>;
pub type SeriesValue64 = series::SeriesValue<f64>;
pub type SaddlePoint64 = asymptotics::SaddlePoint<f64>;
pub type RhoTable64 = asymptotics::RhoTable<f64>;
