mod common;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use qfan::fan;
use qfan::fourier;
use qfan::measure::{monte_carlo_sector_measure, Component, Configuration, MassSpec};
use qfan::solver::{self, SolveProblem};

fn complex(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(re, im)| Complex64::new(re, im))
}

fn gaussian(dim: usize) -> impl Strategy<Value = Component> {
    (
        prop::collection::vec(complex(3.0), dim),
        0.2f64..1.5,
        0.3f64..2.0,
    )
        .prop_map(|(mean, sigma, weight)| Component::Gaussian {
            mean,
            sigma,
            weight,
        })
}

fn disk() -> impl Strategy<Value = Component> {
    (complex(3.0), 0.2f64..2.0, 0.3f64..2.0).prop_map(|(center, radius, weight)| Component::Disk {
        center,
        radius,
        weight,
    })
}

fn gaussian_mass(dim: usize) -> impl Strategy<Value = MassSpec> {
    prop::collection::vec(gaussian(dim), 1..4).prop_map(move |c| MassSpec::new(dim, c).unwrap())
}

fn planar_mass() -> impl Strategy<Value = MassSpec> {
    prop::collection::vec(prop_oneof![gaussian(1), disk()], 1..5)
        .prop_map(|c| MassSpec::new(1, c).unwrap())
}

/// Configurations with `|a|` bounded away from zero.
fn configuration(dim: usize) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(-1.0f64..1.0, 2 * (dim + 1)).prop_filter_map("a too small", |v| {
        Configuration::from_reals(&v)
            .ok()
            .filter(|x| x.norm_a() > 0.1)
    })
}

fn mass_and_config() -> impl Strategy<Value = (MassSpec, Configuration)> {
    prop_oneof![
        (planar_mass(), configuration(1)),
        (gaussian_mass(2), configuration(2)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sectors_tile(
        (m, x) in mass_and_config(),
        q in 2u32..9,
        theta in -PI..PI,
    ) {
        let sum: f64 = (0..q)
            .map(|k| m.sector_measure(&x, q, theta + TAU * k as f64 / q as f64).unwrap())
            .sum();
        prop_assert!((sum - m.total_mass()).abs() < 1e-9 * m.total_mass());
    }

    #[test]
    fn rotating_x_rotates_sectors(
        (m, x) in mass_and_config(),
        q in 2u32..9,
        theta in -PI..PI,
        phi in -PI..PI,
    ) {
        let a = m.sector_measure(&x.rotated(phi), q, theta).unwrap();
        let b = m.sector_measure(&x, q, theta + phi).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * m.total_mass());
    }

    #[test]
    fn sector_measure_in_range(
        (m, x) in mass_and_config(),
        q in 2u32..9,
        theta in -PI..PI,
    ) {
        let v = m.sector_measure(&x, q, theta).unwrap();
        prop_assert!(v >= -1e-15 && v <= m.total_mass() * (1.0 + 1e-12));
    }

    #[test]
    fn profile_is_conjugate_symmetric_and_grid_converged(
        (m, x) in mass_and_config(),
        q in 2u32..6,
    ) {
        prop_assume!(!m.has_disks());
        let t = m.total_mass();
        let p = fourier::profile(&m, &x, q, 256).unwrap();
        let fine = fourier::profile(&m, &x, q, 512).unwrap();
        for k in 0..=64i64 {
            let c = p.coefficient(k).unwrap();
            prop_assert!((p.coefficient(-k).unwrap() - c.conj()).norm() < 1e-10 * t);
            if p.is_resolved() {
                prop_assert!((fine.coefficient(k).unwrap() - c).norm() < 1e-7 * t);
            }
        }
    }

    #[test]
    fn residual_is_phase_invariant(
        m in gaussian_mass(1),
        x in configuration(1),
        phi in -PI..PI,
        k in 1u32..4,
        q in 2u32..6,
    ) {
        let p = SolveProblem::new(vec![m], vec![k], q).unwrap();
        let a = solver::residual(&p, &x).unwrap();
        let b = solver::residual(&p, &x.rotated(phi)).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn bisecting_line_round_trip(m in planar_mass(), theta in -PI..PI) {
        let p = m.as_planar().unwrap();
        let t = fan::bisecting_line(&p, theta);
        let half = fan::halfplane_measure(&p, theta, t);
        prop_assert!((half - 0.5 * p.total_mass()).abs() < 1e-9 * p.total_mass());
        prop_assert!((fan::bisecting_line(&p, theta + PI) + t).abs() < 1e-9 * (1.0 + t.abs()));
    }

    #[test]
    fn fan_offset_is_odd(m in planar_mass(), base in 0.0..PI) {
        let p = m.as_planar().unwrap();
        let s = fan::fan_offset(&p, base) + fan::fan_offset(&p, base + PI);
        prop_assert!(s.abs() < 1e-9 * 10.0);
    }
}

#[test]
fn monte_carlo_agrees_with_pushforward() {
    let masses = common::random_mixtures(31, 4, 1)
        .into_iter()
        .chain(common::random_mixtures(32, 4, 2))
        .chain(common::random_disk_mixtures(33, 4));
    let mut r = common::rng(34);
    for (i, m) in masses.enumerate() {
        let x = qfan::random::configuration(&mut r, m.dim(), 0.2);
        let q = 2 + (i as u32 % 4);
        let theta = 0.4 * i as f64;
        let exact = m.sector_measure(&x, q, theta).unwrap();
        let mc = monte_carlo_sector_measure(&m, &x, q, theta, 400_000, i as u64).unwrap();
        assert!(
            (mc.estimate - exact).abs() <= 4.0 * mc.std_error + 1e-12,
            "instance {i}: mc {} +- {} vs {exact}",
            mc.estimate,
            mc.std_error
        );
    }
}

#[test]
fn near_atom_deviation_closed_forms() {
    // mass at z = 1, apex 0, q = 2: f is the indicator of |theta| <= pi/2
    let m = MassSpec::gaussian(vec![Complex64::new(1.0, 0.0)], 1e-4, 1.0).unwrap();
    let p = fourier::profile(&m, &Configuration::from_apex(Complex64::default()), 2, 4096).unwrap();
    assert!((fourier::l2_deviation(&p).unwrap() - 0.5).abs() < 1e-3);
    assert!((fourier::linf_deviation(&p) - 0.5).abs() < 1e-9);
    assert!((fourier::total_variation(&p) - 1.0 / PI).abs() < 1e-3);
    assert!((p.coefficient(1).unwrap().re - 1.0 / PI).abs() < 1e-3);
}

#[test]
fn disk_profiles_flag_acceleration() {
    for m in common::random_disk_mixtures(41, 5) {
        let p = fourier::profile(
            &m,
            &Configuration::from_apex(Complex64::new(0.2, 0.1)),
            3,
            256,
        )
        .unwrap();
        assert!(!fourier::acceleration(&p).reliable);
        let t = m.total_mass();
        assert!(fourier::total_variation(&p) <= t / PI + 1e-3 * t);
    }
}
