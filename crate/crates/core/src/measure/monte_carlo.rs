use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_q, sector_contains, Component, Configuration, MassSpec};
use crate::error::{Error, Result};

/// Samples per independently seeded stream; fixing it makes estimates independent of thread count.
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub hits: usize,
}

/// Unbiased Monte Carlo estimate of `mu(S_{q, e^{i theta}}(x))`.
///
/// Points are drawn from the mass on `C^d` itself and tested with [`sector_contains`], so the
/// estimate shares no code with the pushforward/quadrature route. Chunk `i` of the sample
/// stream uses ChaCha stream `i` under `seed`; a fixed seed reproduces the estimate bit for bit.
pub fn monte_carlo_sector_measure(
    m: &MassSpec,
    x: &Configuration,
    q: u32,
    theta: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_q(q)?;
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "Monte Carlo needs at least one sample".into(),
        ));
    }
    if x.dim() != m.dim() {
        return Err(Error::InvalidArgument(
            "configuration and mass dimensions differ".into(),
        ));
    }
    let weights: Vec<f64> = m.components().iter().map(Component::weight).collect();
    let picker = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidArgument(format!("component weights: {e}")))?;
    let chunks = samples.div_ceil(CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut point = vec![Complex64::new(0.0, 0.0); m.dim()];
            (0..count)
                .filter(|_| {
                    draw(
                        &m.components()[picker.sample(&mut rng)],
                        &mut rng,
                        &mut point,
                    );
                    sector_contains(x, q, theta, &point)
                })
                .count()
        })
        .sum();
    let total = m.total_mass();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: total * p,
        std_error: total * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        hits,
    })
}

fn draw<R: Rng>(c: &Component, rng: &mut R, out: &mut [Complex64]) {
    match c {
        Component::Gaussian { mean, sigma, .. } => {
            for (o, mu) in out.iter_mut().zip(mean) {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *o = mu + sigma * Complex64::new(re, im);
            }
        }
        Component::Disk { center, radius, .. } => {
            let r = radius * rng.gen::<f64>().sqrt();
            let phi = std::f64::consts::TAU * rng.gen::<f64>();
            out[0] = center + Complex64::from_polar(r, phi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_gaussian_estimates_one_over_q() {
        let m = MassSpec::gaussian(vec![Complex64::new(0.0, 0.0)], 1.0, 1.0).unwrap();
        let x = Configuration::from_apex(Complex64::new(0.0, 0.0));
        let e = monte_carlo_sector_measure(&m, &x, 3, 0.2, 1_000_000, 11).unwrap();
        assert!((e.estimate - 1.0 / 3.0).abs() < 4.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn rotations_tile_the_sample() {
        let m = MassSpec::new(
            1,
            vec![
                Component::Gaussian {
                    mean: vec![Complex64::new(1.0, 0.5)],
                    sigma: 0.7,
                    weight: 2.0,
                },
                Component::Disk {
                    center: Complex64::new(-1.0, 0.0),
                    radius: 0.5,
                    weight: 1.0,
                },
            ],
        )
        .unwrap();
        let x = Configuration::from_apex(Complex64::new(0.1, 0.2));
        let q = 5;
        let hits: usize = (0..q)
            .map(|k| {
                let theta = 0.3 + std::f64::consts::TAU * k as f64 / q as f64;
                monte_carlo_sector_measure(&m, &x, q, theta, 100_000, 5)
                    .unwrap()
                    .hits
            })
            .sum();
        assert_eq!(hits, 100_000);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let m = MassSpec::gaussian(vec![Complex64::new(0.5, 0.0); 2], 1.0, 1.0).unwrap();
        let x = Configuration::from_reals(&[0.4, 0.1, -0.3, 0.2, 0.5, 0.0]).unwrap();
        let a = monte_carlo_sector_measure(&m, &x, 4, 1.0, 200_000, 99).unwrap();
        let b = monte_carlo_sector_measure(&m, &x, 4, 1.0, 200_000, 99).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        let c = monte_carlo_sector_measure(&m, &x, 4, 1.0, 200_000, 100).unwrap();
        assert_ne!(a.hits, c.hits);
    }
}
