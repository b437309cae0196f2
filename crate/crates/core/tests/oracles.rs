//! Independent oracles for the cavity, transmission and scattering solvers.

mod common;

use nonscatter::eigenmodes::{pec_eigenvalues, pmc_eigenvalues, BallGeometry, Family};
use nonscatter::harmonics::{Direction, Polarization, SphereQuadrature};
use nonscatter::herglotz::HerglotzDensity;
use nonscatter::media::{Host, Material};
use nonscatter::mie::{mie_coefficient, solve_farfield, Layer, LayeredMedium};
use nonscatter::specfun::{sph_bessel_j, sph_bessel_y};
use nonscatter::transmission::{default_window, transmission_eigenvalues};
use nonscatter::vec3;
use num_complex::Complex64;

fn check_against(recs: &[nonscatter::eigenmodes::EigenRecord], gold: &[(f64, usize)]) {
    assert!(recs.len() >= 30);
    for (r, (rho, n)) in recs.iter().zip(gold) {
        assert_eq!(r.n, *n, "degree at {rho}");
        assert!((r.omega - rho).abs() < 1e-10, "{} vs {rho}", r.omega);
        assert_eq!(r.multiplicity, 2 * n + 1);
    }
}

#[test]
fn cavity_eigenvalues_match_reference_roots() {
    let ball = BallGeometry::new(1.0, 1.0, 1.0).unwrap();
    let pec = pec_eigenvalues(&ball, 12.5).unwrap();
    let pmc = pmc_eigenvalues(&ball, 12.5).unwrap();
    check_against(&pec, &common::merged(&common::J_ZEROS, &common::PSI_DERIV_ZEROS));
    check_against(&pmc, &common::merged(&common::PSI_DERIV_ZEROS, &common::J_ZEROS));
    for r in &pec[..30] {
        let want = if common::J_ZEROS.iter().any(|z| (z.0 - r.omega).abs() < 1e-9) {
            Family::PecTe
        } else {
            Family::PecTm
        };
        assert_eq!(r.family, want);
    }
}

#[test]
fn cavity_eigenvalues_scale_with_material() {
    let unit = pec_eigenvalues(&BallGeometry::new(1.0, 1.0, 1.0).unwrap(), 8.0).unwrap();
    let big = pec_eigenvalues(&BallGeometry::new(2.0, 4.0, 1.0).unwrap(), 2.0).unwrap();
    for (a, b) in unit.iter().zip(&big) {
        assert!((a.omega / 4.0 - b.omega).abs() < 1e-12);
    }
}

// ψ₁ and ψ₁' in closed form.
fn psi1(x: f64) -> (f64, f64) {
    (x.sin() / x - x.cos(), x.cos() / x - x.sin() / (x * x) + x.sin())
}

/// Tangential E and H matching of `a M(k_b)` inside against `b M(κ)` (TE),
/// or `N` (TM), written directly from `H = curl E / (iωμ)`.
fn ite_determinant_n1(omega: f64, eps_b: f64, mu_b: f64, pol: Polarization) -> f64 {
    let kb = omega * (eps_b * mu_b).sqrt();
    let k0 = omega;
    let (pb, dpb) = psi1(kb);
    let (p0, dp0) = psi1(k0);
    match pol {
        Polarization::Te => (pb / kb) * dp0 - (p0 / k0) * (dpb / mu_b),
        Polarization::Tm => (dpb / kb) * p0 - (dp0 / k0) * (pb / mu_b),
    }
}

fn scan_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let mut out = Vec::new();
    for i in 0..steps {
        let (mut a, mut b) = (lo + i as f64 * h, lo + (i + 1) as f64 * h);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 || fa.signum() == fb.signum() {
            continue;
        }
        let mut fa = fa;
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

#[test]
fn lowest_transmission_eigenvalue_of_the_index_four_ball() {
    // ψ₁(2π)ψ₁'(π)/2 = ψ₁'(2π)ψ₁(π) holds exactly.
    let ball = BallGeometry::new(1.0, 4.0, 1.0).unwrap();
    let recs = transmission_eigenvalues(&ball, &Host::vacuum(), default_window(&ball), 6).unwrap();
    assert_eq!(recs[0].n, 1);
    assert_eq!(recs[0].pol, Polarization::Te);
    assert!((recs[0].omega - std::f64::consts::PI).abs() < 1e-10);
}

#[test]
fn degree_one_transmission_eigenvalues_match_trig_scan() {
    for (eps_b, mu_b) in [(4.0, 1.0), (3.0, 2.0)] {
        let ball = BallGeometry::new(1.0, eps_b, mu_b).unwrap();
        let (lo, hi) = default_window(&ball);
        let recs = transmission_eigenvalues(&ball, &Host::vacuum(), (lo, hi), 3).unwrap();
        for pol in Polarization::BOTH {
            let want = scan_roots(|w| ite_determinant_n1(w, eps_b, mu_b, pol), lo.max(1e-3), hi);
            let got: Vec<f64> = recs.iter().filter(|r| r.n == 1 && r.pol == pol).map(|r| r.omega).collect();
            assert_eq!(got.len(), want.len(), "{pol} eps {eps_b}: {got:?} vs {want:?}");
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-10, "{g} vs {w}");
            }
        }
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
            let v = b[c];
            b[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// `(ψ, ψ')` with `ψ = z f_n(z)` for `f = j` or `y`.
fn riccati(n: usize, z: Complex64, regular: bool) -> (Complex64, Complex64) {
    let f = |m: usize| {
        if regular {
            sph_bessel_j(m, z).unwrap()
        } else {
            sph_bessel_y(m, z).unwrap()
        }
    };
    // (z f_n)' = z f_{n-1} - n f_n
    (z * f(n), z * f(n - 1) - n as f64 * f(n))
}

/// Two-layer sphere by direct continuity of `(ψ/k, ψ'/μ)` (TE) or
/// `(ψ'/k, ψ/μ)` (TM) at both interfaces, unknowns `A, B, C, s`.
fn two_layer_oracle(core: Material, shell: Material, a: f64, b: f64, omega: f64, n: usize, pol: Polarization) -> Complex64 {
    let k1 = core.wavenumber(omega);
    let k2 = shell.wavenumber(omega);
    let k0 = Complex64::new(omega, 0.0);
    let pair = |k: Complex64, r: f64, regular: bool, mu: f64| {
        let (p, dp) = riccati(n, k * r, regular);
        match pol {
            Polarization::Te => [p / k, dp / mu],
            Polarization::Tm => [dp / k, p / mu],
        }
    };
    let z = Complex64::new(0.0, 0.0);
    let core_a = pair(k1, a, true, core.mu);
    let j2a = pair(k2, a, true, shell.mu);
    let y2a = pair(k2, a, false, shell.mu);
    let j2b = pair(k2, b, true, shell.mu);
    let y2b = pair(k2, b, false, shell.mu);
    let j0b = pair(k0, b, true, 1.0);
    let y0b = pair(k0, b, false, 1.0);
    let h0b = [j0b[0] + Complex64::i() * y0b[0], j0b[1] + Complex64::i() * y0b[1]];
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for c in 0..2 {
        rows.push(vec![core_a[c], -j2a[c], -y2a[c], z]);
        rhs.push(z);
    }
    for c in 0..2 {
        rows.push(vec![z, j2b[c], y2b[c], -h0b[c]]);
        rhs.push(j0b[c]);
    }
    solve(rows, rhs)[3]
}

#[test]
fn layered_coefficients_match_direct_solve() {
    let core = Material::new(3.0, 1.2, 0.4).unwrap();
    let shell = Material::new(1.5, 2.0, 0.1).unwrap();
    let host = Host::vacuum();
    let m = LayeredMedium::new(vec![Layer::new(0.6, core), Layer::new(1.0, shell)], host).unwrap();
    for omega in [0.7, 2.3, 4.1] {
        for n in 1..=6 {
            for pol in Polarization::BOTH {
                let want = two_layer_oracle(core, shell, 0.6, 1.0, omega, n, pol);
                let got = mie_coefficient(&m, omega, n, pol).unwrap();
                assert!((got - want).norm() < 1e-10 * want.norm().max(1e-3), "omega {omega} n {n} {pol}: {got} vs {want}");
            }
        }
    }
}

fn plane_wave(host: &Host, omega: f64, d0: &Direction, n_max: usize) -> HerglotzDensity {
    let p = vec3::real(d0.theta_hat());
    HerglotzDensity::plane_wave(host.wavenumber(omega), d0, p, n_max).unwrap()
}

#[test]
fn optical_theorem() {
    let host = Host::new(1.7, 1.1).unwrap();
    let omega = 1.4;
    let kappa = host.wavenumber(omega);
    let d0 = Direction::from_angles(0.9, -0.4);
    let p = vec3::real(d0.theta_hat());
    let a = plane_wave(&host, omega, &d0, 24);
    let m = LayeredMedium::homogeneous(1.0, Material::lossless(4.0, 0.8).unwrap(), host).unwrap();
    let res = solve_farfield(&a, &m, omega).unwrap();
    let (e0, _) = res.far_field_at(&d0).unwrap();
    // The incident amplitude is ε∞^{-1/2}.
    let amp = 1.0 / host.eps_inf.sqrt();
    let forward = 4.0 * std::f64::consts::PI / kappa * amp * vec3::inner(e0, p).im;
    let total = res.farfield_norm.powi(2);
    assert!((forward - total).abs() < 1e-9 * total, "{forward} vs {total}");
}

#[test]
fn far_field_rotates_with_the_incident_wave() {
    let host = Host::vacuum();
    let omega = 2.2;
    let d0 = Direction::from_angles(0.3, 0.2);
    let a = plane_wave(&host, omega, &d0, 14);
    let rot = vec3::rotation([1.0 / 3f64.sqrt(); 3], 1.1);
    let b = a.rotated(&rot).unwrap();
    let m = LayeredMedium::homogeneous(1.0, Material::new(2.0, 1.3, 0.2).unwrap(), host).unwrap();
    let (ra, rb) = (solve_farfield(&a, &m, omega).unwrap(), solve_farfield(&b, &m, omega).unwrap());
    let quad = SphereQuadrature::new(10).unwrap();
    for d in quad.nodes() {
        let rd = Direction::from_cartesian(vec3::mat_apply_re(&rot, d.xyz())).unwrap();
        let want = vec3::mat_apply(&rot, ra.far_field_at(d).unwrap().0);
        let got = rb.far_field_at(&rd).unwrap().0;
        assert!(vec3::norm(vec3::sub(got, want)) < 1e-9 * (1.0 + vec3::norm(want)));
    }
    assert!((ra.farfield_norm - rb.farfield_norm).abs() < 1e-10 * ra.farfield_norm);
}
