//! Independent oracles and seeded suites shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use qfan::measure::{Component, MassSpec, PlanarComponent, PlanarMassSpec};
use qfan::random::{gaussian_mixture, MixtureRanges};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `e^{-x} I_0(x)` and `e^{-x} I_1(x)` by the Abramowitz-Stegun polynomial fits
/// (relative error below 2e-7).
fn ive01(x: f64) -> (f64, f64) {
    if x <= 3.75 {
        let t = (x / 3.75).powi(2);
        let i0 = 1.0
            + t * (3.515_622_9
                + t * (3.089_942_4
                    + t * (1.206_749_2 + t * (0.265_973_2 + t * (0.036_076_8 + t * 0.004_581_3)))));
        let i1 = x
            * (0.5
                + t * (0.878_905_94
                    + t * (0.514_988_69
                        + t * (0.150_849_34
                            + t * (0.026_587_33 + t * (0.003_015_32 + t * 0.000_324_11))))));
        ((-x).exp() * i0, (-x).exp() * i1)
    } else {
        let u = 3.75 / x;
        let p0 = 0.398_942_28
            + u * (0.013_285_92
                + u * (0.002_253_19
                    + u * (-0.001_575_65
                        + u * (0.009_162_81
                            + u * (-0.020_577_06
                                + u * (0.026_355_37 + u * (-0.016_476_33 + u * 0.003_923_77)))))));
        let p1 = 0.398_942_28
            + u * (-0.039_880_24
                + u * (-0.003_620_18
                    + u * (0.001_638_01
                        + u * (-0.010_315_55
                            + u * (0.022_829_67
                                + u * (-0.028_953_12 + u * (0.017_876_54 - u * 0.004_200_59)))))));
        (p0 / x.sqrt(), p1 / x.sqrt())
    }
}

/// `e^{-x} I_{1/2}(x)` and `e^{-x} I_{3/2}(x)` in closed form.
fn ive_half(x: f64) -> (f64, f64) {
    if x < 1e-3 {
        // leading series terms
        let c = (2.0 / PI).sqrt() * (-x).exp();
        let h = c * x.sqrt() * (1.0 + x * x / 6.0);
        let t = c * x.sqrt() * x / 3.0 * (1.0 + x * x / 10.0);
        return (h, t);
    }
    let f = (2.0 / (PI * x)).sqrt();
    let e = (-2.0 * x).exp();
    let sinh = 0.5 * (1.0 - e);
    let cosh = 0.5 * (1.0 + e);
    (f * sinh, f * (cosh - sinh / x))
}

/// `E[e^{-i m arg Z}]` for a planar Gaussian `Z` with mean `w` and per-coordinate
/// standard deviation `sigma` (Rice phase distribution), `m` in `{1, 2}`.
pub fn gaussian_phase_moment(w: Complex64, sigma: f64, m: i64) -> Complex64 {
    let k = w.norm() / sigma;
    let x = k * k / 4.0;
    let (lo, hi) = match m {
        1 => ive01(x),
        2 => ive_half(x),
        _ => panic!("phase moment oracle covers m = 1, 2"),
    };
    let modulus = PI.sqrt() / 2.0 * k / 2f64.sqrt() * (lo + hi);
    Complex64::from_polar(modulus, -(m as f64) * w.arg())
}

/// `c_m` at apex `p` for a planar all-Gaussian mass: the angular law of the mass around `p`
/// convolved with the wedge indicator, `c_m = g^(m) sin(m pi/q) / (m pi)`.
pub fn oracle_coefficient(mass: &PlanarMassSpec, apex: Complex64, q: u32, m: i64) -> Complex64 {
    let g: Complex64 = mass
        .components()
        .iter()
        .map(|c| match *c {
            PlanarComponent::Gaussian {
                mean,
                sigma,
                weight,
            } => weight * gaussian_phase_moment(mean - apex, sigma, m),
            PlanarComponent::Disk { .. } => panic!("oracle covers Gaussian masses only"),
        })
        .sum();
    let mf = m as f64;
    g * (mf * PI / q as f64).sin() / (mf * PI)
}

pub struct GridOracle {
    pub argmin: Complex64,
    pub value: f64,
    /// Spacing of the finest grid searched.
    pub resolution: f64,
}

fn grid_argmin(
    f: &impl Fn(Complex64) -> f64,
    lo: Complex64,
    hi: Complex64,
    side: usize,
) -> (Complex64, f64, f64) {
    let step = (hi.re - lo.re) / (side - 1) as f64;
    let mut best = (lo, f64::INFINITY);
    for i in 0..side {
        for j in 0..side {
            let p = Complex64::new(lo.re + step * i as f64, lo.im + step * j as f64);
            let v = f(p);
            if v < best.1 {
                best = (p, v);
            }
        }
    }
    (best.0, best.1, step)
}

/// Brute-force minimizer of `|c_m(apex)|` over a `side x side` square window, followed by a
/// second `side x side` pass over the 5 x 5 coarse cells around the coarse minimizer.
pub fn dense_grid_oracle(
    mass: &PlanarMassSpec,
    q: u32,
    m: i64,
    window: (Complex64, Complex64),
    side: usize,
) -> GridOracle {
    let f = |p: Complex64| oracle_coefficient(mass, p, q, m).norm();
    let (coarse, _, step) = grid_argmin(&f, window.0, window.1, side);
    let pad = Complex64::new(2.5 * step, 2.5 * step);
    let (argmin, value, resolution) = grid_argmin(&f, coarse - pad, coarse + pad, side);
    GridOracle {
        argmin,
        value,
        resolution,
    }
}

/// Square window covering the means with a margin of three of the largest sigmas.
pub fn mean_window(mass: &PlanarMassSpec) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    let mut reach: f64 = 0.0;
    for c in mass.components() {
        if let PlanarComponent::Gaussian { mean, sigma, .. } = *c {
            lo = Complex64::new(lo.re.min(mean.re), lo.im.min(mean.im));
            hi = Complex64::new(hi.re.max(mean.re), hi.im.max(mean.im));
            reach = reach.max(3.0 * sigma);
        }
    }
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi.re - lo.re).max(hi.im - lo.im) + reach;
    (
        mid - Complex64::new(half, half),
        mid + Complex64::new(half, half),
    )
}

/// Gaussian mixtures on `C^dim` with `dim + 1 ..= dim + 3` components, so that generically
/// no hyperplane passes through all the means.
pub fn random_mixtures(seed: u64, count: usize, dim: usize) -> Vec<MassSpec> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let k = r.gen_range(dim + 1..=dim + 3);
            gaussian_mixture(&mut r, dim, k, &MixtureRanges::default()).unwrap()
        })
        .collect()
}

/// Planar masses mixing Gaussians and disks.
pub fn random_disk_mixtures(seed: u64, count: usize) -> Vec<MassSpec> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let k = r.gen_range(1..=4);
            let components = (0..k)
                .map(|i| {
                    let center = Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
                    let weight = r.gen_range(0.5..2.0);
                    if i % 2 == 0 {
                        Component::Disk {
                            center,
                            radius: r.gen_range(0.3..2.0),
                            weight,
                        }
                    } else {
                        Component::Gaussian {
                            mean: vec![center],
                            sigma: r.gen_range(0.3..1.5),
                            weight,
                        }
                    }
                })
                .collect();
            MassSpec::new(1, components).unwrap()
        })
        .collect()
}

/// `(1/2 pi) int_0^{2 pi} f(theta) e^{-i m theta} dtheta` for a piecewise-constant `f`
/// given only as a black box: jumps are located by a `scan`-point sweep plus bisection to
/// rounding level and every piece is integrated exactly with the value at its midpoint.
pub fn piecewise_constant_coefficient(f: impl Fn(f64) -> f64, m: i64, scan: usize) -> Complex64 {
    let grid: Vec<f64> = (0..=scan).map(|k| TAU * k as f64 / scan as f64).collect();
    let mut cuts = vec![0.0];
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let f_lo = f(lo);
        if f(hi) == f_lo {
            continue;
        }
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) == f_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cuts.push(0.5 * (lo + hi));
    }
    cuts.push(TAU);
    let mf = m as f64;
    let antiderivative =
        |t: f64| Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -mf * t) / mf;
    cuts.windows(2)
        .map(|w| f(0.5 * (w[0] + w[1])) * (antiderivative(w[1]) - antiderivative(w[0])))
        .sum::<Complex64>()
        / TAU
}

/// Condition number of the real 2x2 Jacobian of `apex -> c_m(apex)` (oracle, central differences).
///
/// The grid argmin of `|c_m|` lies within `cond * h / sqrt(2)` of a simple zero to first
/// order, `h` being the grid spacing.
pub fn oracle_condition(mass: &PlanarMassSpec, apex: Complex64, q: u32, m: i64) -> f64 {
    let h = 1e-6;
    let f = |z: Complex64| oracle_coefficient(mass, z, q, m);
    let jx = (f(apex + h) - f(apex - h)) / (2.0 * h);
    let i = Complex64::new(0.0, h);
    let jy = (f(apex + i) - f(apex - i)) / (2.0 * h);
    let (a, b, c, d) = (jx.re, jy.re, jx.im, jy.im);
    let fro = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).abs();
    let disc = (fro * fro - 4.0 * det * det).max(0.0).sqrt();
    ((fro + disc) / (fro - disc).max(f64::MIN_POSITIVE)).sqrt()
}
