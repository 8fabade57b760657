//! Fourier data of the sector-measure profile `f(theta) = mu(S_{q, e^{i theta}}(x))`.
//!
//! Profiles are sampled on a uniform grid of `N` angles and transformed with
//! `c_m = (1/N) sum_k f(2 pi k / N) e^{-2 pi i m k / N}` (normalized Haar measure on the
//! circle, so `c_0` is the mean). On the degenerate locus the profile is the indicator of an
//! arc times the total mass and its coefficients are taken in closed form instead, since a
//! sampled jump carries an `O(1/N)` transform error.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::fft;
use crate::measure::{check_q, Configuration, MassSpec};

pub const DEFAULT_GRID: usize = 256;

/// Relative size of the top-band coefficients (`3N/8 < |m| <= N/2`) below which the
/// profile counts as resolved by the grid and spectral differentiation is trusted.
pub const RESOLUTION_TOL: f64 = 1e-10;

/// Allowed disagreement (relative to `total^2`) between the two L2 computations.
pub const PARSEVAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// Samples of the pushforward wedge measures, coefficients by the discrete transform.
    Sampled,
    /// `a = 0`: the profile is `total * 1[theta in I_b]`, coefficients exact.
    DegenerateArc,
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierProfile {
    q: u32,
    x: Configuration,
    grid: usize,
    samples: Vec<f64>,
    /// `c_m` for `m = -N/2 ..= N/2`, stored at index `m + N/2`.
    coeffs: Vec<Complex64>,
    total: f64,
    kind: ProfileKind,
    /// No disk components: the profile is smooth in `theta`.
    smooth_mass: bool,
}

/// Samples `mu(S_{q, e^{i theta}}(x))` at `theta_k = 2 pi k / n` and extracts its coefficients.
pub fn profile(m: &MassSpec, x: &Configuration, q: u32, n: usize) -> Result<FourierProfile> {
    check_q(q)?;
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "grid size must be a power of two >= 8, found {n}"
        )));
    }
    if x.dim() != m.dim() {
        return Err(Error::InvalidArgument(format!(
            "configuration has dim {} but the mass lives on C^{}",
            x.dim(),
            m.dim()
        )));
    }
    let total = m.total_mass();
    let half = (n / 2) as i64;
    let (samples, coeffs, kind) = if x.is_degenerate() {
        let samples = (0..n)
            .map(|k| m.sector_measure(x, q, TAU * k as f64 / n as f64))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = (-half..=half)
            .map(|j| arc_coefficient(total, q, x.b(), j))
            .collect();
        (samples, coeffs, ProfileKind::DegenerateArc)
    } else {
        let samples = m.pushforward_planar(x)?.wedge_profile(q, n)?;
        let bins = fft::real_dft(&samples);
        let coeffs = (-half..=half)
            .map(|j| bins[j.rem_euclid(n as i64) as usize])
            .collect();
        (samples, coeffs, ProfileKind::Sampled)
    };
    Ok(FourierProfile {
        q,
        x: x.clone(),
        grid: n,
        samples,
        coeffs,
        total,
        kind,
        smooth_mass: !m.has_disks(),
    })
}

/// Coefficient of `total * 1[theta in [-pi/q - arg b, pi/q - arg b]]`:
/// `total e^{i m arg b} sin(m pi/q) / (m pi)`.
fn arc_coefficient(total: f64, q: u32, b: Complex64, m: i64) -> Complex64 {
    if m == 0 {
        return Complex64::new(total / q as f64, 0.0);
    }
    let mf = m as f64;
    Complex64::from_polar(total * (mf * PI / q as f64).sin() / (mf * PI), mf * b.arg())
}

impl FourierProfile {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn configuration(&self) -> &Configuration {
        &self.x
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Grid angle of sample `k`.
    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.grid as f64
    }

    /// `c_m` for `|m| <= N/2`.
    pub fn coefficient(&self, m: i64) -> Result<Complex64> {
        let half = self.grid / 2;
        if m.unsigned_abs() as usize > half {
            return Err(Error::CoefficientOutOfRange {
                index: m,
                limit: half,
            });
        }
        Ok(self.coeffs[(m + half as i64) as usize])
    }

    /// Coefficients `c_m`, `m = 0..=N/2`.
    pub fn nonnegative_coefficients(&self) -> &[Complex64] {
        &self.coeffs[self.grid / 2..]
    }

    /// Whether the grid resolves the profile (negligible top-band coefficients).
    pub fn is_resolved(&self) -> bool {
        if self.kind == ProfileKind::DegenerateArc {
            return false;
        }
        let limit = RESOLUTION_TOL * self.total;
        self.nonnegative_coefficients()[3 * self.grid / 8 + 1..]
            .iter()
            .all(|c| c.norm() <= limit)
    }

    /// Spectral derivative of order `order` evaluated on the grid.
    fn spectral_derivative(&self, order: u32) -> Vec<f64> {
        let n = self.grid;
        let half = (n / 2) as i64;
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        for m in (1 - half)..=half {
            let mut c = self.coeffs[(m + half) as usize];
            if m == half && order % 2 == 1 {
                c = Complex64::new(0.0, 0.0);
            }
            let factor = Complex64::new(0.0, m as f64).powu(order);
            bins[m.rem_euclid(n as i64) as usize] = c * factor;
        }
        fft::inverse(&mut bins);
        bins.into_iter().map(|z| z.re).collect()
    }
}

/// `|| f - total/q ||_2` under the normalized circle measure.
///
/// Computed as the trapezoid mean of `(f - total/q)^2` and, independently, as
/// `2 sum_{0<m<N/2} |c_m|^2 + |c_{N/2}|^2 + (c_0 - total/q)^2`; the two must agree within
/// `PARSEVAL_TOL * total^2`. Degenerate profiles use the exact arc value.
pub fn l2_deviation(p: &FourierProfile) -> Result<f64> {
    let mean = p.total / p.q as f64;
    if p.kind == ProfileKind::DegenerateArc {
        let frac = 1.0 / p.q as f64;
        return Ok(p.total * (frac * (1.0 - frac)).sqrt());
    }
    let direct = p.samples.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / p.grid as f64;
    let spectral = parseval_sum(p);
    let discrepancy = (direct - spectral).abs();
    let limit = PARSEVAL_TOL * p.total * p.total;
    if discrepancy > limit {
        return Err(Error::AccuracyFailure {
            what: "Parseval cross-check",
            discrepancy,
            limit,
        });
    }
    Ok(direct.sqrt())
}

/// Spectral side of the Parseval identity for `f - total/q`.
pub fn parseval_sum(p: &FourierProfile) -> f64 {
    let c = p.nonnegative_coefficients();
    let half = p.grid / 2;
    let mean = p.total / p.q as f64;
    (c[0].re - mean).powi(2)
        + c[0].im.powi(2)
        + 2.0 * c[1..half].iter().map(Complex64::norm_sqr).sum::<f64>()
        + c[half].norm_sqr()
}

/// `max_k |f(theta_k) - total/q|`.
pub fn linf_deviation(p: &FourierProfile) -> f64 {
    let mean = p.total / p.q as f64;
    p.samples
        .iter()
        .map(|f| (f - mean).abs())
        .fold(0.0, f64::max)
}

/// `V = (1/2 pi) int |f'|`.
///
/// Resolved profiles use the spectral derivative and the trapezoid rule. Under-resolved ones
/// (near-atoms, disks whose edges the grid cannot follow) would suffer Gibbs overshoot there,
/// so they use the sampled variation `sum |f_{k+1} - f_k| / (2 pi)` instead. Degenerate
/// profiles have two jumps of size `total`, so `V = total / pi`.
pub fn total_variation(p: &FourierProfile) -> f64 {
    match p.kind {
        ProfileKind::DegenerateArc => p.total / PI,
        ProfileKind::Sampled if p.is_resolved() => {
            let d = p.spectral_derivative(1);
            d.iter().map(|v| v.abs()).sum::<f64>() / p.grid as f64
        }
        ProfileKind::Sampled => {
            let n = p.grid;
            (0..n)
                .map(|k| (p.samples[(k + 1) % n] - p.samples[k]).abs())
                .sum::<f64>()
                / TAU
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Acceleration {
    pub value: f64,
    /// False for masses with disk components or profiles the grid does not resolve.
    pub reliable: bool,
}

/// `A = (1/2 pi) int |f''|` by second spectral derivative.
pub fn acceleration(p: &FourierProfile) -> Acceleration {
    let d = p.spectral_derivative(2);
    Acceleration {
        value: d.iter().map(|v| v.abs()).sum::<f64>() / p.grid as f64,
        reliable: p.smooth_mass && p.is_resolved(),
    }
}

/// `|c_m(e^{i phi} x) - e^{i m phi} c_m(x)|`.
pub fn equivariance_residual(
    m: &MassSpec,
    x: &Configuration,
    q: u32,
    m_exp: i64,
    phase: f64,
    grid: usize,
) -> Result<f64> {
    if x.is_degenerate() {
        return Err(Error::DegenerateConfiguration { norm_a: x.norm_a() });
    }
    if phase == 0.0 {
        return Ok(0.0);
    }
    let base = profile(m, x, q, grid)?.coefficient(m_exp)?;
    let turned = profile(m, &x.rotated(phase), q, grid)?.coefficient(m_exp)?;
    Ok((turned - Complex64::from_polar(1.0, m_exp as f64 * phase) * base).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationReport {
    pub l2: f64,
    pub linf: f64,
    pub variation: f64,
    pub acceleration: f64,
    pub acceleration_reliable: bool,
    /// Coefficients `1..=annihilated` assumed (near) zero when forming the bounds.
    pub annihilated: usize,
    pub bound_l2: f64,
    /// `2 A tail(q, annihilated)`.
    pub bound_linf: f64,
}

pub fn deviation_report(p: &FourierProfile, annihilated: usize) -> Result<DeviationReport> {
    let acc = acceleration(p);
    Ok(DeviationReport {
        l2: l2_deviation(p)?,
        linf: linf_deviation(p),
        variation: total_variation(p),
        acceleration: acc.value,
        acceleration_reliable: acc.reliable,
        annihilated,
        bound_l2: bounds::l2_bound(p.q, annihilated) * p.total,
        bound_linf: 2.0 * acc.value * bounds::tail_sum(p.q, annihilated as u64)?,
    })
}
