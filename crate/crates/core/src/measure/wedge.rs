//! Planar wedge measures with apex at the origin.
//!
//! For a Gaussian with mean `rho e^{i psi}` and standard deviation `sigma`, the mass on the
//! ray at angle `psi + s` integrates in closed form along the radius:
//!
//! ```text
//! g(s) = exp(-k^2/2) / (2 pi) + c Phi(c) exp(-k^2 sin^2 s / 2) / sqrt(2 pi),
//! k = rho / sigma,  c = k cos s
//! ```
//!
//! so a wedge measure is a one-dimensional angular integral of `g`. Disks are handled exactly:
//! by Green's theorem the area of `disk ∩ wedge` is the area swept from the origin by the arcs
//! of the circle that lie inside the wedge (the wedge edges are radial and contribute nothing).

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::quad::{self, QuadOptions};
use crate::special::{next_pow2, normal_cdf, wrap_angle};

const FRAC_1_SQRT_TAU: f64 = 0.398_942_280_401_432_7;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Closed sector membership: `v = z e^{-i theta}` satisfies `v = 0` or `|arg v| <= pi/q`.
pub(crate) fn in_wedge(z: Complex64, q: u32, theta: f64) -> bool {
    let v = z * Complex64::from_polar(1.0, -theta);
    v == Complex64::new(0.0, 0.0) || v.arg().abs() <= PI / q as f64
}

/// Angular density `g(s)` of a unit Gaussian at normalized distance `kappa = rho / sigma`
/// from the origin, `s` measured from the direction of the mean.
pub fn gaussian_angular_density(kappa: f64, s: f64) -> f64 {
    let (sin, cos) = s.sin_cos();
    let c = kappa * cos;
    let base = (-0.5 * kappa * kappa).exp() / TAU;
    base + c * normal_cdf(c) * (-0.5 * (kappa * sin).powi(2)).exp() * FRAC_1_SQRT_TAU
}

const WEDGE_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-13,
    rel_tol: 1e-12,
    max_panels: 4000,
};

/// Fraction of a Gaussian's mass inside the wedge of half-angle `pi/q` bisected by `theta`.
pub fn gaussian_wedge_fraction(mean: Complex64, sigma: f64, q: u32, theta: f64) -> f64 {
    let kappa = mean.norm() / sigma;
    let alpha = PI / q as f64;
    if kappa < 1e-14 {
        return 1.0 / q as f64;
    }
    // Integrate over s = phi - psi, centering the interval in (-pi, pi].
    let center = wrap_angle(theta - mean.arg());
    let (lo, hi) = (center - alpha, center + alpha);
    let mut breaks = Vec::new();
    let width = 1.0 / kappa;
    for peak in [-TAU, 0.0, TAU] {
        breaks.push(peak);
        if width < 0.5 {
            for k in [1.0, 3.0, 10.0, 30.0] {
                breaks.push(peak - k * width);
                breaks.push(peak + k * width);
            }
        }
    }
    let r = quad::integrate(
        |s| gaussian_angular_density(kappa, s),
        lo,
        hi,
        &breaks,
        WEDGE_QUAD,
    );
    r.value.clamp(0.0, 1.0)
}

/// Fraction of a uniform disk's area inside the wedge of half-angle `pi/q` bisected by `theta`.
pub fn disk_wedge_fraction(center: Complex64, radius: f64, q: u32, theta: f64) -> f64 {
    let alpha = PI / q as f64;
    let mut crossings: Vec<f64> = Vec::with_capacity(4);
    for edge in [theta - alpha, theta + alpha] {
        let u = Complex64::from_polar(1.0, edge);
        // |s u - c|^2 = R^2, s >= 0
        let proj = (center.conj() * u).re;
        let disc = proj * proj - (center.norm_sqr() - radius * radius);
        if disc <= 0.0 {
            continue;
        }
        let root = disc.sqrt();
        for s in [proj - root, proj + root] {
            if s >= 0.0 {
                crossings.push((s * u - center).arg().rem_euclid(TAU));
            }
        }
    }
    if crossings.is_empty() {
        return if in_wedge(center, q, theta) { 1.0 } else { 0.0 };
    }
    crossings.sort_by(f64::total_cmp);
    let point = |beta: f64| center + Complex64::from_polar(radius, beta);
    let mut area = 0.0;
    for i in 0..crossings.len() {
        let start = crossings[i];
        let mut end = crossings[(i + 1) % crossings.len()];
        if end <= start {
            end += TAU;
        }
        if in_wedge(point(0.5 * (start + end)), q, theta) {
            area += swept_area(center, radius, start, end);
        }
    }
    (area / (PI * radius * radius)).clamp(0.0, 1.0)
}

/// Signed area swept from the origin by the circle arc `beta in [b1, b2]`.
fn swept_area(center: Complex64, radius: f64, b1: f64, b2: f64) -> f64 {
    let chord = Complex64::from_polar(1.0, b2) - Complex64::from_polar(1.0, b1);
    0.5 * (radius * radius * (b2 - b1) + radius * (center.conj() * chord).im)
}

const MAX_SPECTRAL_GRID: usize = 1 << 22;

/// `gaussian_wedge_fraction(mean, sigma, q, 2 pi k / n)` for all `k`.
///
/// The angular density is sampled on a uniform grid of `M` points (trapezoid rule, spectrally
/// accurate for the periodic analytic `g`), transformed, multiplied by the transform of the
/// wedge indicator `sin(m pi/q) / (m pi)`, folded onto `n` bins and transformed back. `M` is
/// doubled until the density's spectrum has decayed below 1e-15 in its upper half; if that
/// would exceed `2^22` points the per-angle quadrature is used instead.
pub(crate) fn gaussian_wedge_profile(mean: Complex64, sigma: f64, q: u32, n: usize) -> Vec<f64> {
    let kappa = mean.norm() / sigma;
    if kappa < 1e-14 {
        return vec![1.0 / q as f64; n];
    }
    let psi = mean.arg();
    let alpha = PI / q as f64;

    let mut m_grid = next_pow2((16.0 * kappa).ceil() as usize + 64);
    let spectrum = loop {
        if m_grid > MAX_SPECTRAL_GRID {
            return (0..n)
                .map(|k| gaussian_wedge_fraction(mean, sigma, q, TAU * k as f64 / n as f64))
                .collect();
        }
        let mut buf: Vec<Complex64> = (0..m_grid)
            .map(|j| {
                let s = TAU * j as f64 / m_grid as f64;
                Complex64::new(
                    gaussian_angular_density(kappa, s) * TAU / m_grid as f64,
                    0.0,
                )
            })
            .collect();
        PLANNER.with(|p| p.borrow_mut().plan_fft_forward(m_grid).process(&mut buf));
        let tail = buf[m_grid / 4..=m_grid / 2]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if tail < 1e-15 {
            break buf;
        }
        m_grid *= 2;
    };

    // f has coefficients c_m = e^{-i m psi} G_m sin(m alpha) / (m pi), G the density spectrum.
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    let half = (m_grid / 2) as i64;
    for m in (1 - half)..half {
        let g = spectrum[m.rem_euclid(m_grid as i64) as usize];
        let kernel = if m == 0 {
            alpha / PI
        } else {
            (m as f64 * alpha).sin() / (m as f64 * PI)
        };
        let coeff = g * kernel * Complex64::from_polar(1.0, -(m as f64) * psi);
        bins[m.rem_euclid(n as i64) as usize] += coeff;
    }
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut bins));
    bins.into_iter().map(|z| z.re.clamp(0.0, 1.0)).collect()
}
