//! Planar constructions: bisecting lines, the regular 6-fan whose three lines all bisect a
//! mass, the sector-deviation certificate at its center, and the two-cluster disk masses
//! that force a large deviation at every apex.

use std::f64::consts::{FRAC_PI_3, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::measure::{check_q, PlanarComponent, PlanarMassSpec};
use crate::special::normal_cdf;

pub const DEFAULT_SCAN_POINTS: usize = 720;
pub const ANGLE_TOL: f64 = 1e-10;
/// Slack added to the certified deviation bound.
pub const CERTIFICATE_SLACK: f64 = 1e-6;

/// Measure of `{u : Re(u e^{-i theta}) <= t}`.
pub fn halfplane_measure(p: &PlanarMassSpec, direction: f64, t: f64) -> f64 {
    let normal = Complex64::from_polar(1.0, -direction);
    p.components()
        .iter()
        .map(|c| match *c {
            PlanarComponent::Gaussian {
                mean,
                sigma,
                weight,
            } => weight * normal_cdf((t - (mean * normal).re) / sigma),
            PlanarComponent::Disk {
                center,
                radius,
                weight,
            } => weight * disk_below((t - (center * normal).re) / radius),
        })
        .sum()
}

/// Area fraction of the unit disk with first coordinate `<= h`.
fn disk_below(h: f64) -> f64 {
    let h = h.clamp(-1.0, 1.0);
    0.5 + (h * (1.0 - h * h).sqrt() + h.asin()) / PI
}

/// Offset `t` with `halfplane_measure(p, direction, t) = total / 2`.
///
/// Where the measure is flat at one half (a gap between components) the midpoint of the
/// flat stretch is returned, so `t(theta + pi) = -t(theta)` holds exactly up to rounding.
pub fn bisecting_line(p: &PlanarMassSpec, direction: f64) -> f64 {
    let half = 0.5 * p.total_mass();
    let band = 1e-12 * p.total_mass();
    let (lo, hi) = projection_range(p, direction);
    let below = bisect(lo, hi, |t| halfplane_measure(p, direction, t) < half - band);
    let above = bisect(lo, hi, |t| {
        halfplane_measure(p, direction, t) <= half + band
    });
    0.5 * (below + above)
}

/// Boundary of a predicate that holds on `[lo, s)` and fails on `[s, hi]`.
fn bisect(mut lo: f64, mut hi: f64, holds: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Interval of `Re(u e^{-i theta})` containing the support (Gaussians cut at 40 sigma).
fn projection_range(p: &PlanarMassSpec, direction: f64) -> (f64, f64) {
    let normal = Complex64::from_polar(1.0, -direction);
    p.components()
        .iter()
        .map(|c| match *c {
            PlanarComponent::Gaussian { mean, sigma, .. } => ((mean * normal).re, 40.0 * sigma),
            PlanarComponent::Disk { center, radius, .. } => ((center * normal).re, radius),
        })
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (c, r)| {
            (lo.min(c - r), hi.max(c + r))
        })
}

fn length_scale(p: &PlanarMassSpec) -> f64 {
    let (lo, hi) = p.bounding_box();
    (hi - lo).norm().max(lo.norm()).max(hi.norm()).max(1.0)
}

/// The line `{u : Re(u e^{-i direction}) = offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanLine {
    pub direction: f64,
    pub offset: f64,
}

impl FanLine {
    /// Signed distance of `u` from the line.
    pub fn signed_distance(&self, u: Complex64) -> f64 {
        (u * Complex64::from_polar(1.0, -self.direction)).re - self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SixFan {
    pub center: Complex64,
    pub base_angle: f64,
    pub lines: [FanLine; 3],
    /// `|halfplane_measure - total/2|` per line.
    pub bisection_errors: [f64; 3],
    /// Largest distance from `center` to one of the lines.
    pub concurrency_error: f64,
}

fn bisecting_lines(p: &PlanarMassSpec, base: f64) -> [FanLine; 3] {
    std::array::from_fn(|k| {
        let direction = base + k as f64 * FRAC_PI_3;
        FanLine {
            direction,
            offset: bisecting_line(p, direction),
        }
    })
}

fn intersect(l: &FanLine, m: &FanLine) -> Complex64 {
    let (s1, c1) = l.direction.sin_cos();
    let (s2, c2) = m.direction.sin_cos();
    let det = c1 * s2 - s1 * c2;
    Complex64::new(
        (l.offset * s2 - m.offset * s1) / det,
        (c1 * m.offset - c2 * l.offset) / det,
    )
}

/// `<p_1, e^{i base}> - t(base)` where `p_1` is the intersection of `L_1` and `L_2`.
/// Odd under `base -> base + pi`.
pub fn fan_offset(p: &PlanarMassSpec, base: f64) -> f64 {
    let lines = bisecting_lines(p, base);
    lines[0].signed_distance(intersect(&lines[1], &lines[2]))
}

/// Least-squares common point of the lines.
fn common_point(lines: &[FanLine; 3]) -> Complex64 {
    let (mut sxx, mut sxy, mut syy, mut bx, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for l in lines {
        let (s, c) = l.direction.sin_cos();
        sxx += c * c;
        sxy += c * s;
        syy += s * s;
        bx += c * l.offset;
        by += s * l.offset;
    }
    let det = sxx * syy - sxy * sxy;
    Complex64::new((syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det)
}

/// Three bisecting lines at mutual angles `pi/3` through one point.
pub fn regular_six_fan(p: &PlanarMassSpec) -> Result<SixFan> {
    regular_six_fan_with(p, DEFAULT_SCAN_POINTS)
}

pub fn regular_six_fan_with(p: &PlanarMassSpec, scan_points: usize) -> Result<SixFan> {
    if scan_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "scan needs at least 2 points, found {scan_points}"
        )));
    }
    let zero = 1e-13 * length_scale(p);
    let trace: Vec<(f64, f64)> = (0..=scan_points)
        .into_par_iter()
        .map(|k| {
            let base = PI * k as f64 / scan_points as f64;
            (base, fan_offset(p, base))
        })
        .collect();
    let base = match trace.iter().find(|(_, f)| f.abs() <= zero) {
        Some(&(b, _)) => b,
        None => {
            let Some(w) = trace
                .windows(2)
                .find(|w| w[0].1.signum() != w[1].1.signum())
            else {
                return Err(Error::NoSignChange {
                    samples: trace.len(),
                    trace,
                });
            };
            let (mut lo, mut hi, f_lo) = (w[0].0, w[1].0, w[0].1);
            while hi - lo > ANGLE_TOL {
                let mid = 0.5 * (lo + hi);
                let f = fan_offset(p, mid);
                if f.abs() <= zero {
                    lo = mid;
                    hi = mid;
                } else if f.signum() == f_lo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };
    let lines = bisecting_lines(p, base);
    let center = common_point(&lines);
    let half = 0.5 * p.total_mass();
    Ok(SixFan {
        center,
        base_angle: base,
        bisection_errors: lines.map(|l| (halfplane_measure(p, l.direction, l.offset) - half).abs()),
        concurrency_error: lines
            .iter()
            .map(|l| l.signed_distance(center).abs())
            .fold(0.0, f64::max),
        lines,
    })
}

/// `max_k |mu(S_{q, e^{i theta_k}}) - total/q|` for the planar wedges with apex `center`,
/// together with the maximizing angle.
pub fn center_deviation(
    p: &PlanarMassSpec,
    q: u32,
    center: Complex64,
    n: usize,
) -> Result<(f64, f64)> {
    let f = p.translated(-center).wedge_profile(q, n)?;
    let mean = p.total_mass() / q as f64;
    Ok(f.iter()
        .enumerate()
        .map(|(k, v)| {
            (
                (v - mean).abs(),
                std::f64::consts::TAU * k as f64 / n as f64,
            )
        })
        .fold(
            (0.0, 0.0),
            |best, cur| if cur.0 > best.0 { cur } else { best },
        ))
}

pub fn worst_center_deviation(
    p: &PlanarMassSpec,
    q: u32,
    center: Complex64,
    n: usize,
) -> Result<f64> {
    Ok(center_deviation(p, q, center, n)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterpointCertificate {
    pub q: u32,
    pub fan: SixFan,
    pub linf: f64,
    pub worst_theta: f64,
    /// `max{1/q, (q-2)/(2q)} * total`.
    pub bound: f64,
    pub total: f64,
}

/// Checks the sector deviation at the 6-fan center against `max{1/q, (q-2)/(2q)} * total`.
pub fn centerpoint_certificate(
    p: &PlanarMassSpec,
    q: u32,
    n: usize,
) -> Result<CenterpointCertificate> {
    check_q(q)?;
    if q < 3 {
        return Err(Error::InvalidArgument(
            "the 6-fan certificate needs q >= 3".into(),
        ));
    }
    let fan = regular_six_fan(p)?;
    let (linf, worst_theta) = center_deviation(p, q, fan.center, n)?;
    let total = p.total_mass();
    let bound = bounds::centerpoint_linf_bound(q) * total;
    if linf > bound + CERTIFICATE_SLACK {
        return Err(Error::CertificateViolation {
            theta: worst_theta,
            deviation: linf,
            bound,
        });
    }
    Ok(CenterpointCertificate {
        q,
        fan,
        linf,
        worst_theta,
        bound,
        total,
    })
}

/// Two clusters of `n` disks of radius `delta`, in `[-r-1, -r]` and `[r, r+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdversarialSpec {
    q: u32,
    n: usize,
    r: f64,
    delta: f64,
}

impl AdversarialSpec {
    pub fn new(q: u32, n: usize, r: f64, delta: f64) -> Result<Self> {
        check_q(q)?;
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if !(r > 2.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "r must exceed 2, found {r}"
            )));
        }
        if !(delta > 0.0 && delta < 0.5 / n as f64) {
            return Err(Error::InvalidArgument(format!(
                "delta must lie in (0, 1/(2n)) = (0, {}), found {delta}",
                0.5 / n as f64
            )));
        }
        Ok(Self { q, n, r, delta })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `max{1/q - 1/(2nq), (q-2)/(2q)}`.
    pub fn lower_bound(&self) -> f64 {
        bounds::adversarial_linf_lower_bound(self.q, self.n)
    }
}

/// Disks of weight `1/(2n)`. Each cluster interval is cut into `n` equal cells and every
/// cell gets one center, drawn around the cell midpoint with a jitter of at most half the
/// room left by the radius, so the disks stay disjoint.
pub fn adversarial_mass(spec: &AdversarialSpec, seed: u64) -> Result<PlanarMassSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n as f64;
    let cell = 1.0 / n;
    let jitter = 0.5 * (0.5 * cell - spec.delta);
    let weight = 0.5 / n;
    let mut components = Vec::with_capacity(2 * spec.n);
    for side in [-1.0, 1.0] {
        for i in 0..spec.n {
            let offset = (i as f64 + 0.5) * cell + rng.gen_range(-jitter..=jitter);
            components.push(PlanarComponent::Disk {
                center: Complex64::new(side * (spec.r + offset), 0.0),
                radius: spec.delta,
                weight,
            });
        }
    }
    PlanarMassSpec::new(components)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub center: Complex64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterSweep {
    pub q: u32,
    pub points: Vec<SweepPoint>,
    /// Smallest worst-case deviation over the grid and where it occurs.
    pub min_deviation: f64,
    pub argmin: Complex64,
}

/// Square window around the bounding box, enlarged by 10% of its half-width.
pub fn sweep_window(p: &PlanarMassSpec) -> (Complex64, Complex64) {
    let (lo, hi) = p.bounding_box();
    let mid = 0.5 * (lo + hi);
    let half = 1.1 * 0.5 * (hi.re - lo.re).max(hi.im - lo.im);
    (
        mid - Complex64::new(half, half),
        mid + Complex64::new(half, half),
    )
}

/// [`worst_center_deviation`] on a `side x side` grid spanning `[lo, hi]`.
pub fn center_grid_sweep(
    p: &PlanarMassSpec,
    q: u32,
    window: (Complex64, Complex64),
    side: usize,
    n: usize,
) -> Result<CenterSweep> {
    if side < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 points per side, found {side}"
        )));
    }
    let (lo, hi) = window;
    let step = (hi - lo) / (side - 1) as f64;
    let points: Vec<SweepPoint> = (0..side * side)
        .into_par_iter()
        .map(|idx| {
            let center = Complex64::new(
                lo.re + step.re * (idx % side) as f64,
                lo.im + step.im * (idx / side) as f64,
            );
            Ok(SweepPoint {
                center,
                deviation: worst_center_deviation(p, q, center, n)?,
            })
        })
        .collect::<Result<_>>()?;
    let best = points.iter().fold(
        &points[0],
        |b, s| if s.deviation < b.deviation { s } else { b },
    );
    Ok(CenterSweep {
        q,
        min_deviation: best.deviation,
        argmin: best.center,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gauss(mean: Complex64, sigma: f64, weight: f64) -> PlanarComponent {
        PlanarComponent::Gaussian {
            mean,
            sigma,
            weight,
        }
    }

    fn disk(center: Complex64, radius: f64, weight: f64) -> PlanarComponent {
        PlanarComponent::Disk {
            center,
            radius,
            weight,
        }
    }

    #[test]
    fn halfplane_examples() {
        let p = PlanarMassSpec::new(vec![gauss(c(0.0, 0.0), 1.0, 3.0)]).unwrap();
        assert!((halfplane_measure(&p, 0.0, 2.0) - 3.0 * 0.977_249_868_051_820_8).abs() < 1e-12);
        assert!(halfplane_measure(&p, 0.4, -1e3) == 0.0);
        let q = PlanarMassSpec::new(vec![gauss(c(1.0, -2.0), 0.5, 2.0)]).unwrap();
        let th = 0.9;
        let t = (c(1.0, -2.0) * Complex64::from_polar(1.0, -th)).re;
        assert!((halfplane_measure(&q, th, t) - 1.0).abs() < 1e-15);
        let d = PlanarMassSpec::new(vec![disk(c(0.0, 0.0), 1.0, 1.0)]).unwrap();
        // segment of the unit disk beyond x = 1/2 has area pi/3 - sqrt(3)/4
        let seg = (PI / 3.0 - 3f64.sqrt() / 4.0) / PI;
        assert!((halfplane_measure(&d, 0.0, 0.5) - (1.0 - seg)).abs() < 1e-14);
    }

    #[test]
    fn bisecting_line_examples() {
        let d = PlanarMassSpec::new(vec![disk(c(2.0, 1.0), 0.5, 1.0)]).unwrap();
        for th in [0.0, 0.7, 2.0, -1.3] {
            let expect = (c(2.0, 1.0) * Complex64::from_polar(1.0, -th)).re;
            assert!((bisecting_line(&d, th) - expect).abs() < 1e-12);
        }
        let pair = PlanarMassSpec::new(vec![
            gauss(c(-3.0, 1.0), 1.0, 1.0),
            gauss(c(5.0, 1.0), 1.0, 1.0),
        ])
        .unwrap();
        assert!((bisecting_line(&pair, 0.0) - 1.0).abs() < 1e-9);
        // two far disks: a flat stretch between them, midpoint picked
        let gap = PlanarMassSpec::new(vec![
            disk(c(-10.0, 0.0), 0.1, 1.0),
            disk(c(30.0, 0.0), 0.1, 1.0),
        ])
        .unwrap();
        assert!((bisecting_line(&gap, 0.0) - 10.0).abs() < 1e-9);
        assert!((bisecting_line(&gap, PI) + 10.0).abs() < 1e-9);
    }

    #[test]
    fn fan_offset_is_odd() {
        let p = PlanarMassSpec::new(vec![
            gauss(c(1.0, 0.0), 0.6, 1.0),
            gauss(c(-1.0, 2.0), 1.0, 2.0),
            disk(c(0.5, -1.5), 0.8, 0.7),
        ])
        .unwrap();
        for k in 0..64 {
            let b = 0.1 + k as f64 * PI / 32.0;
            let s = fan_offset(&p, b) + fan_offset(&p, b + PI);
            assert!(s.abs() < 1e-9, "k={k} {s}");
        }
    }

    #[test]
    fn six_fan_on_symmetric_masses() {
        let round = PlanarMassSpec::new(vec![gauss(c(0.7, -0.2), 1.0, 1.0)]).unwrap();
        let fan = regular_six_fan(&round).unwrap();
        assert!((fan.center - c(0.7, -0.2)).norm() < 1e-9);
        let cross = PlanarMassSpec::new(vec![
            gauss(c(2.0, 0.0), 0.5, 1.0),
            gauss(c(-2.0, 0.0), 0.5, 1.0),
            gauss(c(0.0, 1.0), 0.3, 1.0),
            gauss(c(0.0, -1.0), 0.3, 1.0),
        ])
        .unwrap();
        let fan = regular_six_fan(&cross).unwrap();
        assert!(fan.center.norm() < 1e-8);
        assert!(fan.bisection_errors.iter().all(|e| *e < 1e-8 * 4.0));
        assert!(fan.concurrency_error < 1e-9);
        assert!((fan.lines[1].direction - fan.lines[0].direction - FRAC_PI_3).abs() < 1e-15);
    }

    #[test]
    fn certificate_examples() {
        let d = PlanarMassSpec::new(vec![disk(c(1.0, 1.0), 2.0, 1.0)]).unwrap();
        let cert = centerpoint_certificate(&d, 5, 256).unwrap();
        assert!(cert.linf < 1e-9);
        assert!(centerpoint_certificate(&d, 2, 256).is_err());
    }

    #[test]
    fn adversarial_layout() {
        assert!(AdversarialSpec::new(3, 10, 100.0, 0.05).is_err());
        assert!(AdversarialSpec::new(3, 10, 1.5, 0.01).is_err());
        let spec = AdversarialSpec::new(3, 10, 100.0, 1e-3).unwrap();
        let m = adversarial_mass(&spec, 3).unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
        let mut centers: Vec<f64> = m
            .components()
            .iter()
            .map(|c| match *c {
                PlanarComponent::Disk { center, .. } => center.re,
                _ => unreachable!(),
            })
            .collect();
        centers.sort_by(f64::total_cmp);
        assert!(centers[..10]
            .iter()
            .all(|x| (-101.0 + 1e-3..=-100.0 - 1e-3).contains(x)));
        assert!(centers[10..]
            .iter()
            .all(|x| (100.0 + 1e-3..=101.0 - 1e-3).contains(x)));
        assert!(centers.windows(2).all(|w| w[1] - w[0] > 2e-3));
        let one = adversarial_mass(&AdversarialSpec::new(3, 1, 50.0, 1e-3).unwrap(), 0).unwrap();
        for c in one.components() {
            if let PlanarComponent::Disk { center, .. } = *c {
                assert!((center.re.abs() - 50.5).abs() <= 0.25);
            }
        }
    }

    #[test]
    fn far_center_sees_everything_in_one_sector() {
        let p = PlanarMassSpec::new(vec![gauss(c(0.0, 0.0), 0.1, 1.0)]).unwrap();
        let dev = worst_center_deviation(&p, 4, c(1e4, 0.0), 256).unwrap();
        assert!((dev - 0.75).abs() < 1e-9);
    }
}
