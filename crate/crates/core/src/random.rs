//! Seeded random instances shared by the test suites, the acceptance run and the CLI.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::measure::{Component, Configuration, MassSpec};

/// Ranges for [`gaussian_mixture`].
#[derive(Debug, Clone, Copy)]
pub struct MixtureRanges {
    /// Every real coordinate of a mean is uniform in `[-spread, spread]`.
    pub spread: f64,
    pub sigma: (f64, f64),
    pub weight: (f64, f64),
}

impl Default for MixtureRanges {
    fn default() -> Self {
        Self {
            spread: 3.0,
            sigma: (0.3, 1.5),
            weight: (0.5, 2.0),
        }
    }
}

/// Mixture of `k` isotropic Gaussians on `C^dim`.
pub fn gaussian_mixture<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    k: usize,
    ranges: &MixtureRanges,
) -> Result<MassSpec> {
    let components = (0..k)
        .map(|_| Component::Gaussian {
            mean: (0..dim)
                .map(|_| {
                    Complex64::new(
                        rng.gen_range(-ranges.spread..=ranges.spread),
                        rng.gen_range(-ranges.spread..=ranges.spread),
                    )
                })
                .collect(),
            sigma: rng.gen_range(ranges.sigma.0..=ranges.sigma.1),
            weight: rng.gen_range(ranges.weight.0..=ranges.weight.1),
        })
        .collect();
    MassSpec::new(dim, components)
}

/// Uniform point of the unit sphere in `C^{dim+1}`, resampled until `|a| >= min_norm_a`.
pub fn configuration<R: Rng + ?Sized>(rng: &mut R, dim: usize, min_norm_a: f64) -> Configuration {
    loop {
        let v: Vec<f64> = (0..2 * (dim + 1))
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        if let Ok(x) = Configuration::from_reals(&v) {
            if x.norm_a() >= min_norm_a {
                return x;
            }
        }
    }
}
