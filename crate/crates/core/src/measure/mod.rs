//! Masses on `C^d` and the measures of the regular q-sectors around a complex hyperplane.
//!
//! A mass is a weighted mixture of isotropic Gaussians (any `d`) and uniform disks
//! (`d = 1` only). Sector membership of a point `u` depends on `u` only through
//! `z = <u, a> + conj(b)`, so every sector measure reduces to the measure of a planar
//! wedge with apex at the origin under the pushforward of the mass along that map.

mod config;
mod monte_carlo;
mod wedge;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_mass, Error, Result};

pub use config::{Configuration, DEGENERATE_THRESHOLD};
pub use monte_carlo::{monte_carlo_sector_measure, McEstimate};
pub use wedge::{disk_wedge_fraction, gaussian_angular_density, gaussian_wedge_fraction};

/// One analytic component of a mass on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    /// Isotropic Gaussian on `R^{2d}`; `sigma` is the standard deviation of every real coordinate.
    Gaussian {
        mean: Vec<Complex64>,
        sigma: f64,
        weight: f64,
    },
    /// Uniform disk in `C` (only for `dim == 1`).
    Disk {
        center: Complex64,
        radius: f64,
        weight: f64,
    },
}

impl Component {
    pub fn weight(&self) -> f64 {
        match self {
            Component::Gaussian { weight, .. } | Component::Disk { weight, .. } => *weight,
        }
    }
}

/// An absolutely continuous mass on `C^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::MassSpecRepr", into = "repr::MassSpecRepr")]
pub struct MassSpec {
    dim: usize,
    components: Vec<Component>,
}

impl MassSpec {
    pub fn new(dim: usize, components: Vec<Component>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid_mass("dim", "must be a positive integer"));
        }
        if components.is_empty() {
            return Err(invalid_mass(
                "components",
                "at least one component is required",
            ));
        }
        for (i, c) in components.iter().enumerate() {
            let field = |name: &str| format!("components[{i}].{name}");
            match c {
                Component::Gaussian {
                    mean,
                    sigma,
                    weight,
                } => {
                    if mean.len() != dim {
                        return Err(invalid_mass(
                            field("mean"),
                            format!("expected {dim} complex coordinates, found {}", mean.len()),
                        ));
                    }
                    if mean.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                        return Err(invalid_mass(field("mean"), "coordinates must be finite"));
                    }
                    check_positive(&field("sigma"), *sigma)?;
                    check_positive(&field("weight"), *weight)?;
                }
                Component::Disk {
                    center,
                    radius,
                    weight,
                } => {
                    if dim != 1 {
                        return Err(invalid_mass(
                            field("type"),
                            format!("disk components require dim = 1, found dim = {dim}"),
                        ));
                    }
                    if !center.re.is_finite() || !center.im.is_finite() {
                        return Err(invalid_mass(field("center"), "coordinates must be finite"));
                    }
                    check_positive(&field("radius"), *radius)?;
                    check_positive(&field("weight"), *weight)?;
                }
            }
        }
        Ok(Self { dim, components })
    }

    /// Single isotropic Gaussian, the most common test mass.
    pub fn gaussian(mean: Vec<Complex64>, sigma: f64, weight: f64) -> Result<Self> {
        let dim = mean.len();
        Self::new(
            dim,
            vec![Component::Gaussian {
                mean,
                sigma,
                weight,
            }],
        )
    }

    pub fn from_planar(p: &PlanarMassSpec) -> Self {
        let components = p
            .components()
            .iter()
            .map(|c| match *c {
                PlanarComponent::Gaussian {
                    mean,
                    sigma,
                    weight,
                } => Component::Gaussian {
                    mean: vec![mean],
                    sigma,
                    weight,
                },
                PlanarComponent::Disk {
                    center,
                    radius,
                    weight,
                } => Component::Disk {
                    center,
                    radius,
                    weight,
                },
            })
            .collect();
        Self { dim: 1, components }
    }

    /// Parses the JSON layout; syntax errors report their line and column, validation
    /// errors the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let r: repr::MassSpecRepr = serde_json::from_str(text).map_err(|e| {
            invalid_mass(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Self::try_from(r)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Total mass `mu(C^d)`.
    pub fn total_mass(&self) -> f64 {
        self.components.iter().map(Component::weight).sum()
    }

    pub fn has_disks(&self) -> bool {
        self.components
            .iter()
            .any(|c| matches!(c, Component::Disk { .. }))
    }

    /// The planar mass itself when `dim == 1` (pushforward along the identity configuration).
    pub fn as_planar(&self) -> Result<PlanarMassSpec> {
        if self.dim != 1 {
            return Err(Error::InvalidArgument(format!(
                "planar view requires dim = 1, mass has dim = {}",
                self.dim
            )));
        }
        self.pushforward_planar(&Configuration::new(
            vec![Complex64::new(1.0, 0.0)],
            Complex64::new(0.0, 0.0),
        )?)
    }

    /// Image of the mass under `u -> <u, a> + conj(b)`.
    ///
    /// Gaussians map to planar Gaussians with mean `<mean, a> + conj(b)` and standard deviation
    /// `sigma * |a|`; a disk (only for `d = 1`) maps to the disk with center `c conj(a) + conj(b)`
    /// and radius `R |a|`.
    pub fn pushforward_planar(&self, x: &Configuration) -> Result<PlanarMassSpec> {
        if x.dim() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "configuration has dim {} but the mass lives on C^{}",
                x.dim(),
                self.dim
            )));
        }
        if x.is_degenerate() {
            return Err(Error::DegenerateConfiguration { norm_a: x.norm_a() });
        }
        let scale = x.norm_a();
        let components = self
            .components
            .iter()
            .map(|c| match c {
                Component::Gaussian {
                    mean,
                    sigma,
                    weight,
                } => PlanarComponent::Gaussian {
                    mean: x.project(mean),
                    sigma: sigma * scale,
                    weight: *weight,
                },
                Component::Disk {
                    center,
                    radius,
                    weight,
                } => PlanarComponent::Disk {
                    center: x.project(std::slice::from_ref(center)),
                    radius: radius * scale,
                    weight: *weight,
                },
            })
            .collect();
        Ok(PlanarMassSpec { components })
    }

    /// `mu(S_{q, e^{i theta}}(x))`.
    ///
    /// On the degenerate locus `a = 0` the sectors are all of `C^d` when `theta` lies in
    /// `[-pi/q - arg b, pi/q - arg b]` (mod 2 pi) and empty otherwise.
    pub fn sector_measure(&self, x: &Configuration, q: u32, theta: f64) -> Result<f64> {
        check_q(q)?;
        if x.is_degenerate() {
            let apex_image = x.b().conj();
            return Ok(if wedge::in_wedge(apex_image, q, theta) {
                self.total_mass()
            } else {
                0.0
            });
        }
        self.pushforward_planar(x)?.wedge_measure(q, theta)
    }
}

fn check_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid_mass(
            field,
            format!("must be a positive finite number, found {value}"),
        ))
    }
}

pub(crate) fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        Err(Error::InvalidArgument(format!(
            "q must be at least 2, found {q}"
        )))
    } else {
        Ok(())
    }
}

/// `true` iff `u` lies in the closed sector `S_{q, e^{i theta}}(x)`.
///
/// Points on the hyperplane (`v = 0`) belong to every sector.
pub fn sector_contains(x: &Configuration, q: u32, theta: f64, u: &[Complex64]) -> bool {
    wedge::in_wedge(x.project(u), q, theta)
}

/// A component of a mass on the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PlanarComponent {
    Gaussian {
        mean: Complex64,
        sigma: f64,
        weight: f64,
    },
    Disk {
        center: Complex64,
        radius: f64,
        weight: f64,
    },
}

impl PlanarComponent {
    pub fn weight(&self) -> f64 {
        match *self {
            PlanarComponent::Gaussian { weight, .. } | PlanarComponent::Disk { weight, .. } => {
                weight
            }
        }
    }

    fn translated(&self, shift: Complex64) -> Self {
        match *self {
            PlanarComponent::Gaussian {
                mean,
                sigma,
                weight,
            } => PlanarComponent::Gaussian {
                mean: mean + shift,
                sigma,
                weight,
            },
            PlanarComponent::Disk {
                center,
                radius,
                weight,
            } => PlanarComponent::Disk {
                center: center + shift,
                radius,
                weight,
            },
        }
    }
}

/// A mass on `C`, the pushforward target of [`MassSpec::pushforward_planar`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarMassSpec {
    components: Vec<PlanarComponent>,
}

impl PlanarMassSpec {
    pub fn new(components: Vec<PlanarComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid_mass(
                "components",
                "at least one component is required",
            ));
        }
        for (i, c) in components.iter().enumerate() {
            let (loc, scale, weight, scale_name) = match *c {
                PlanarComponent::Gaussian {
                    mean,
                    sigma,
                    weight,
                } => (mean, sigma, weight, "sigma"),
                PlanarComponent::Disk {
                    center,
                    radius,
                    weight,
                } => (center, radius, weight, "radius"),
            };
            if !loc.re.is_finite() || !loc.im.is_finite() {
                return Err(invalid_mass(
                    format!("components[{i}]"),
                    "location must be finite",
                ));
            }
            check_positive(&format!("components[{i}].{scale_name}"), scale)?;
            check_positive(&format!("components[{i}].weight"), weight)?;
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[PlanarComponent] {
        &self.components
    }

    pub fn total_mass(&self) -> f64 {
        self.components.iter().map(PlanarComponent::weight).sum()
    }

    /// The same mass moved by `shift`; translating by `-c` puts a candidate apex `c` at the origin.
    pub fn translated(&self, shift: Complex64) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| c.translated(shift))
                .collect(),
        }
    }

    pub fn has_disks(&self) -> bool {
        self.components
            .iter()
            .any(|c| matches!(c, PlanarComponent::Disk { .. }))
    }

    /// Measure of the closed wedge `{z : |arg(z e^{-i theta})| <= pi/q}` with apex at the origin.
    pub fn wedge_measure(&self, q: u32, theta: f64) -> Result<f64> {
        check_q(q)?;
        Ok(self
            .components
            .iter()
            .map(|c| match *c {
                PlanarComponent::Gaussian {
                    mean,
                    sigma,
                    weight,
                } => weight * gaussian_wedge_fraction(mean, sigma, q, theta),
                PlanarComponent::Disk {
                    center,
                    radius,
                    weight,
                } => weight * disk_wedge_fraction(center, radius, q, theta),
            })
            .sum())
    }

    /// `wedge_measure(q, 2 pi k / n)` for `k = 0..n`, evaluated as one batch.
    ///
    /// Gaussian components go through a spectral evaluation of the angular density
    /// (trapezoid rule on the circle, convolved with the wedge indicator in frequency
    /// space); the result agrees with the per-angle quadrature of [`Self::wedge_measure`]
    /// to roughly 1e-12 of the weight.
    pub fn wedge_profile(&self, q: u32, n: usize) -> Result<Vec<f64>> {
        check_q(q)?;
        if n == 0 {
            return Err(Error::InvalidArgument(
                "profile needs at least one sample".into(),
            ));
        }
        let mut out = vec![0.0; n];
        for c in &self.components {
            match *c {
                PlanarComponent::Gaussian {
                    mean,
                    sigma,
                    weight,
                } => {
                    let f = wedge::gaussian_wedge_profile(mean, sigma, q, n);
                    for (o, v) in out.iter_mut().zip(f) {
                        *o += weight * v;
                    }
                }
                PlanarComponent::Disk {
                    center,
                    radius,
                    weight,
                } => {
                    for (k, o) in out.iter_mut().enumerate() {
                        let theta = std::f64::consts::TAU * k as f64 / n as f64;
                        *o += weight * disk_wedge_fraction(center, radius, q, theta);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Axis-aligned box containing all but a negligible part of the mass
    /// (Gaussians are cut at eight standard deviations).
    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for c in &self.components {
            let (loc, reach) = match *c {
                PlanarComponent::Gaussian { mean, sigma, .. } => (mean, 8.0 * sigma),
                PlanarComponent::Disk { center, radius, .. } => (center, radius),
            };
            lo.re = lo.re.min(loc.re - reach);
            lo.im = lo.im.min(loc.im - reach);
            hi.re = hi.re.max(loc.re + reach);
            hi.im = hi.im.max(loc.im + reach);
        }
        (lo, hi)
    }
}

mod repr {
    //! On-disk JSON layout of a [`MassSpec`].

    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub(super) struct MassSpecRepr {
        dim: usize,
        components: Vec<ComponentRepr>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
    enum ComponentRepr {
        Gaussian {
            mean: MeanRepr,
            sigma: f64,
            weight: f64,
        },
        Disk {
            center: Complex64,
            radius: f64,
            weight: f64,
        },
    }

    /// A `d = 1` mean may be written as a bare `[re, im]` pair.
    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum MeanRepr {
        Single(Complex64),
        Many(Vec<Complex64>),
    }

    impl TryFrom<MassSpecRepr> for MassSpec {
        type Error = Error;

        fn try_from(r: MassSpecRepr) -> Result<Self> {
            let components = r
                .components
                .into_iter()
                .map(|c| match c {
                    ComponentRepr::Gaussian {
                        mean,
                        sigma,
                        weight,
                    } => Component::Gaussian {
                        mean: match mean {
                            MeanRepr::Single(z) => vec![z],
                            MeanRepr::Many(v) => v,
                        },
                        sigma,
                        weight,
                    },
                    ComponentRepr::Disk {
                        center,
                        radius,
                        weight,
                    } => Component::Disk {
                        center,
                        radius,
                        weight,
                    },
                })
                .collect();
            MassSpec::new(r.dim, components)
        }
    }

    impl From<MassSpec> for MassSpecRepr {
        fn from(m: MassSpec) -> Self {
            let components = m
                .components
                .into_iter()
                .map(|c| match c {
                    Component::Gaussian {
                        mean,
                        sigma,
                        weight,
                    } => ComponentRepr::Gaussian {
                        mean: MeanRepr::Many(mean),
                        sigma,
                        weight,
                    },
                    Component::Disk {
                        center,
                        radius,
                        weight,
                    } => ComponentRepr::Disk {
                        center,
                        radius,
                        weight,
                    },
                })
                .collect();
            MassSpecRepr {
                dim: m.dim,
                components,
            }
        }
    }
}
