//! Closed-form constants for sector-deviation bounds.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::measure::check_q;

/// Constant `kappa = sqrt(2) / pi` in the `kappa / sqrt(n)` bound obtained by annihilating
/// coefficients `1..n` (from `|c_m| <= mu / (pi m)` and `sum_{m > n} m^-2 < 1/n`).
pub const KAPPA: f64 = SQRT_2 / PI;

/// `sum_{m > n, q does not divide m} m^-2`, via the closed form
/// `(1 - 1/q^2) pi^2 / 6` minus the finite prefix.
pub fn tail_sum(q: u32, n: u64) -> Result<f64> {
    check_q(q)?;
    let qq = q as f64;
    let full = (1.0 - 1.0 / (qq * qq)) * PI * PI / 6.0;
    let prefix: f64 = (1..=n)
        .filter(|m| m % q as u64 != 0)
        .map(|m| 1.0 / (m as f64 * m as f64))
        .sum();
    Ok(full - prefix)
}

/// Direct summation of `m^-2` over `n < m <= terms`, `q` not dividing `m`, smallest terms first.
pub fn tail_sum_direct(q: u32, n: u64, terms: u64) -> Result<f64> {
    check_q(q)?;
    Ok((n + 1..=terms)
        .rev()
        .filter(|m| m % q as u64 != 0)
        .map(|m| 1.0 / (m as f64 * m as f64))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TailSumCheck {
    pub q: u32,
    pub n: u64,
    pub closed_form: f64,
    pub direct: f64,
    pub terms: u64,
    pub discrepancy: f64,
}

pub const TAIL_CHECK_TERMS: u64 = 10_000_000;
pub const TAIL_CHECK_TOL: f64 = 1e-6;

/// Closed-form tail sum cross-checked against `TAIL_CHECK_TERMS` terms of direct summation.
pub fn tail_sum_checked(q: u32, n: u64) -> Result<TailSumCheck> {
    let closed_form = tail_sum(q, n)?;
    let direct = tail_sum_direct(q, n, TAIL_CHECK_TERMS)?;
    let discrepancy = (closed_form - direct).abs();
    if discrepancy > TAIL_CHECK_TOL {
        return Err(Error::AccuracyFailure {
            what: "tail sum",
            discrepancy,
            limit: TAIL_CHECK_TOL,
        });
    }
    Ok(TailSumCheck {
        q,
        n,
        closed_form,
        direct,
        terms: TAIL_CHECK_TERMS,
        discrepancy,
    })
}

/// `sqrt(1/3 - 2/pi^2 - 1/(3 q^2))`: L2 deviation per unit mass once the first coefficient vanishes.
pub fn l2_first_coefficient_bound(q: u32) -> f64 {
    let qq = q as f64;
    (1.0 / 3.0 - 2.0 / (PI * PI) - 1.0 / (3.0 * qq * qq)).sqrt()
}

/// L2 deviation bound per unit mass after annihilating coefficients `1..n`.
///
/// `n = 1` gives [`l2_first_coefficient_bound`], `n >= 2` gives `KAPPA / sqrt(n)`, and `n = 0`
/// falls back to `sqrt(2 tail(q, 0)) / pi` from the same variation argument.
pub fn l2_bound(q: u32, annihilated: usize) -> f64 {
    match annihilated {
        0 => (2.0 * tail_sum(q, 0).unwrap_or(f64::NAN)).sqrt() / PI,
        1 => l2_first_coefficient_bound(q),
        n => KAPPA / (n as f64).sqrt(),
    }
}

/// `max{1/q, (q - 2)/(2q)}`: the best uniform deviation fraction achievable for every planar mass.
pub fn centerpoint_linf_bound(q: u32) -> f64 {
    let qq = q as f64;
    (1.0 / qq).max((qq - 2.0) / (2.0 * qq))
}

/// Deviation fraction forced at every apex by two far clusters of `n` small disks each.
pub fn adversarial_linf_lower_bound(q: u32, n: usize) -> f64 {
    let qq = q as f64;
    (1.0 / qq - 1.0 / (2.0 * n as f64 * qq)).max((qq - 2.0) / (2.0 * qq))
}
