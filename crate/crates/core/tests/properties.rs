//! Randomized invariants.

use nonscatter::experiments::fit_loglog;
use nonscatter::harmonics::{Direction, Mode, Polarization};
use nonscatter::herglotz::{density_to_interior, perturb_density, HerglotzDensity};
use nonscatter::media::{Host, Material};
use nonscatter::mie::{mie_coefficients, solve_farfield, CoatingKind, CoatingSpec, LayeredMedium};
use nonscatter::sobolev::{pair_difference_norm, pair_norm, PairNorm};
use nonscatter::vec3;
use num_complex::Complex64;
use proptest::prelude::*;

fn density(kappa: f64, n_max: usize, seed: &[f64]) -> HerglotzDensity {
    let mut a = HerglotzDensity::zeros(kappa, n_max).unwrap();
    for (i, mode) in Mode::all(n_max).enumerate() {
        let x = seed[i % seed.len()];
        a.field.set(&mode, Complex64::new(x, (x * 7.0 + i as f64).sin())).unwrap();
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lossless_spheres_are_unitary(
        eps in 0.2f64..8.0, mu in 0.2f64..4.0, omega in 0.1f64..6.0, r in 0.2f64..2.0,
    ) {
        let m = LayeredMedium::homogeneous(r, Material::lossless(eps, mu).unwrap(), Host::vacuum()).unwrap();
        let c = mie_coefficients(&m, omega, 20).unwrap();
        for n in 1..=20 {
            for s in [c.te[n], c.tm[n]] {
                prop_assert!(((1.0 + 2.0 * s).norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn lossy_layers_are_contractive(
        eps in 0.5f64..6.0, sigma in 0.0f64..20.0, omega in 0.1f64..5.0, tau in 1e-6f64..1.0,
    ) {
        let coat = CoatingSpec { tau, epsilon: 1.3, mu: 0.9, sigma: 2.0, kind: CoatingKind::Pec };
        let core = Material::new(eps, 1.0, sigma).unwrap();
        let m = LayeredMedium::coated(0.6, core, &coat, 1.0, Host::vacuum()).unwrap();
        let c = mie_coefficients(&m, omega, 15).unwrap();
        for n in 1..=15 {
            for s in [c.te[n], c.tm[n]] {
                prop_assert!((1.0 + 2.0 * s).norm() <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn far_fields_are_tangential(
        theta in 0.0f64..std::f64::consts::PI, phi in -3.0f64..3.0,
        coeffs in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let host = Host::new(1.5, 1.2).unwrap();
        let omega = 1.8;
        let a = density(host.wavenumber(omega), 6, &coeffs);
        let m = LayeredMedium::homogeneous(0.9, Material::new(2.0, 1.0, 0.7).unwrap(), host).unwrap();
        let res = solve_farfield(&a, &m, omega).unwrap();
        let d = Direction::from_angles(theta, phi);
        let (e, h) = res.far_field_at(&d).unwrap();
        let size = vec3::norm(e).max(1e-300);
        prop_assert!(vec3::dot(d.r_hat(), e).norm() < 1e-12 * size);
        prop_assert!(vec3::dot(d.r_hat(), h).norm() < 1e-12 * size);
    }

    #[test]
    fn herglotz_map_is_linear(
        c1 in prop::collection::vec(-1.0f64..1.0, 3),
        c2 in prop::collection::vec(-1.0f64..1.0, 3),
        s in -3.0f64..3.0,
    ) {
        let host = Host::vacuum();
        let omega = 2.0;
        let k = host.wavenumber(omega);
        let (a, b) = (density(k, 4, &c1), density(k, 4, &c2));
        let mut sum = a.clone();
        for (x, y) in sum.field.coeffs.iter_mut().zip(&b.field.coeffs) {
            *x += *y * s;
        }
        let (pa, pb, ps) = (
            density_to_interior(&a, &host, omega).unwrap(),
            density_to_interior(&b, &host, omega).unwrap(),
            density_to_interior(&sum, &host, omega).unwrap(),
        );
        for i in 0..ps.e.coeffs.len() {
            let want = pa.e.coeffs[i] + pb.e.coeffs[i] * s;
            prop_assert!((ps.e.coeffs[i] - want).norm() < 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn perturbation_has_the_requested_size(eps in 1e-6f64..1.0, seed in 0u64..1000) {
        let host = Host::vacuum();
        let omega = 2.5;
        let a = density(host.wavenumber(omega), 5, &[0.3, -0.8, 0.1]);
        let b = perturb_density(&a, eps, seed, &host, omega, 1.0, PairNorm::H1Pair).unwrap();
        let (pa, pb) = (density_to_interior(&a, &host, omega).unwrap(), density_to_interior(&b, &host, omega).unwrap());
        let got = pair_difference_norm(&pb, &pa, 1.0, PairNorm::H1Pair).unwrap();
        prop_assert!((got - eps).abs() < 1e-8 * eps);
        prop_assert!(pair_norm(&pa, 1.0, PairNorm::H1Pair).unwrap() > 0.0);
    }

    #[test]
    fn loglog_recovers_power_laws(
        slope in -3.0f64..3.0, c in 0.01f64..100.0,
        xs in prop::collection::btree_set(1u32..100_000, 3..12),
    ) {
        let xs: Vec<f64> = xs.into_iter().map(|x| x as f64 * 1e-3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c * x.powf(slope)).collect();
        let f = fit_loglog(&xs, &ys).unwrap();
        prop_assert!((f.slope - slope).abs() < 1e-9);
        prop_assert!((f.intercept - c.ln()).abs() < 1e-8);
    }

    #[test]
    fn host_matched_layers_do_not_scatter(
        eps in 0.5f64..4.0, mu in 0.5f64..4.0, omega in 0.1f64..5.0, pol in prop::bool::ANY,
    ) {
        let host = Host::new(eps, mu).unwrap();
        let m = LayeredMedium::homogeneous(1.0, host.material(), host).unwrap();
        let c = mie_coefficients(&m, omega, 12).unwrap();
        let p = if pol { Polarization::Te } else { Polarization::Tm };
        for n in 1..=12 {
            prop_assert_eq!(c.get(n, p), Complex64::new(0.0, 0.0));
        }
    }
}
