//! Exact special sequences: Bernoulli numbers and polynomials, generalised
//! Euler polynomials, tangent numbers, and weighted power sums.
//!
//! Tables are plain owned values; share them across threads only behind a lock,
//! or give each worker its own.

mod bernoulli;
mod euler;
mod sums;

pub use bernoulli::{bernoulli_number, bernoulli_poly_value, power_sum, tangent_number, BernoulliCache};
pub use euler::{euler_poly_value, euler_poly_window_check, EulerPolyTable};
pub use sums::{
    alt_power_sum, apostol_phi, coprime_weighted_sum, weighted_power_sum_closed,
    weighted_power_sum_direct, Sign,
};
