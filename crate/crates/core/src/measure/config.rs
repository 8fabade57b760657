use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this `|a|` a configuration is treated as lying on the degenerate locus `0 x S^1`.
pub const DEGENERATE_THRESHOLD: f64 = 1e-10;

/// A unit vector `x = (a, b)` in `C^{d+1}` encoding the family of regular q-sectors around
/// the complex hyperplane `{u : <u, a> + conj(b) = 0}`.
///
/// Multiplying `x` by a phase `e^{i phi}` rotates every sector by `phi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration {
    a: Vec<Complex64>,
    b: Complex64,
}

impl Configuration {
    /// Builds the configuration `(a, b) / |(a, b)|`.
    pub fn new(a: Vec<Complex64>, b: Complex64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("configuration needs d >= 1".into()));
        }
        let norm = (a.iter().map(Complex64::norm_sqr).sum::<f64>() + b.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "configuration cannot be normalized (norm = {norm})"
            )));
        }
        if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(Self { a, b });
        }
        Ok(Self {
            a: a.into_iter().map(|z| z / norm).collect(),
            b: b / norm,
        })
    }

    /// The `d = 1` configuration whose sectors are planar wedges with apex `p`.
    pub fn from_apex(p: Complex64) -> Self {
        Self::new(vec![Complex64::new(1.0, 0.0)], -p.conj()).expect("(1, -conj p) is never zero")
    }

    /// Reads a flat real vector `[re a_1, im a_1, ..., re b, im b]`.
    pub fn from_reals(v: &[f64]) -> Result<Self> {
        if v.len() < 4 || !v.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "expected an even number >= 4 of reals, found {}",
                v.len()
            )));
        }
        let mut z: Vec<Complex64> = v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let b = z.pop().expect("length checked");
        Self::new(z, b)
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.a
            .iter()
            .chain(std::iter::once(&self.b))
            .flat_map(|z| [z.re, z.im])
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn norm_a(&self) -> f64 {
        self.a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn is_degenerate(&self) -> bool {
        self.norm_a() < DEGENERATE_THRESHOLD
    }

    /// `e^{i phi} x`.
    pub fn rotated(&self, phi: f64) -> Self {
        let lambda = Complex64::from_polar(1.0, phi);
        Self {
            a: self.a.iter().map(|z| z * lambda).collect(),
            b: self.b * lambda,
        }
    }

    /// `<u, a> + conj(b) = sum_i u_i conj(a_i) + conj(b)`.
    pub fn project(&self, u: &[Complex64]) -> Complex64 {
        debug_assert_eq!(u.len(), self.a.len());
        u.iter()
            .zip(&self.a)
            .map(|(ui, ai)| ui * ai.conj())
            .sum::<Complex64>()
            + self.b.conj()
    }

    /// Phase-invariant distance on `CP^d`: `sqrt(1 - |<x, y>|^2)`.
    pub fn projective_distance(&self, other: &Configuration) -> f64 {
        let inner: Complex64 = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(p, r)| p * r.conj())
            .sum::<Complex64>()
            + self.b * other.b.conj();
        (1.0 - inner.norm_sqr()).max(0.0).sqrt()
    }
}

#[derive(Deserialize)]
struct ConfigurationRepr {
    a: Vec<Complex64>,
    b: Complex64,
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ConfigurationRepr::deserialize(d)?;
        Configuration::new(r.a, r.b).map_err(serde::de::Error::custom)
    }
}
