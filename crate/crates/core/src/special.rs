//! Scalar special functions and angle helpers.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

/// Standard normal distribution function, accurate in both tails.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (TAU).sqrt()
}

/// Wraps an angle into the principal range `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

/// Next power of two that is at least `n`.
pub(crate) fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}
