#![allow(dead_code, clippy::excessive_precision)]
//! Oracles shared by the integration suites.

use nonscatter::harmonics::{vector_wave_m, vector_wave_n, Mode, Polarization, WaveKind};
use nonscatter::herglotz::{eval_pairs_quadrature, mode_constant, suggested_degree, HerglotzDensity};
use nonscatter::media::{curl_factor, Host};
use nonscatter::vec3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

/// Roots of `j_n` (n ≥ 1) below 16, ascending, from an independent
/// Brent solve on a reference spherical Bessel implementation.
pub const J_ZEROS: [(f64, usize); 30] = [
    (4.4934094579090642e+00, 1),
    (5.7634591968945497e+00, 2),
    (6.9879320005005203e+00, 3),
    (7.7252518369377068e+00, 1),
    (8.1825614525712425e+00, 4),
    (9.0950113304763551e+00, 2),
    (9.3558121110427468e+00, 5),
    (1.0417118547379365e+01, 3),
    (1.0512835408093999e+01, 6),
    (1.0904121659428899e+01, 1),
    (1.1657032192516372e+01, 7),
    (1.1704907154570391e+01, 4),
    (1.2322940970566583e+01, 2),
    (1.2790781711972119e+01, 8),
    (1.2966530172774345e+01, 5),
    (1.3698023153249249e+01, 3),
    (1.3915822610504897e+01, 9),
    (1.4066193912831473e+01, 1),
    (1.4207392458842460e+01, 6),
    (1.5033469303743438e+01, 10),
    (1.5039664707616520e+01, 4),
    (1.5431289210268378e+01, 7),
    (1.5514603010886749e+01, 2),
    (1.6144742942301342e+01, 11),
    (1.6354709639350464e+01, 5),
    (1.6641002881512190e+01, 8),
    (1.6923621285213841e+01, 3),
    (1.7220755271930770e+01, 1),
    (1.7250454784125964e+01, 12),
    (1.7647974870165896e+01, 6),
];

/// Roots of `ψ_n' = (x j_n)'`, same provenance.
pub const PSI_DERIV_ZEROS: [(f64, usize); 30] = [
    (2.7437072699922695e+00, 1),
    (3.8702385802221650e+00, 2),
    (4.9734203508228418e+00, 3),
    (6.0619493629823715e+00, 4),
    (6.1167642644617688e+00, 1),
    (7.1402273640029827e+00, 5),
    (7.4430870539544580e+00, 2),
    (8.2108419780189195e+00, 6),
    (8.7217505134899422e+00, 3),
    (9.2754634855228453e+00, 7),
    (9.3166156285659643e+00, 1),
    (9.9675472302371553e+00, 4),
    (1.0335242036507553e+01, 8),
    (1.0713010988255775e+01, 2),
    (1.1188984775648070e+01, 5),
    (1.1391008233702992e+01, 9),
    (1.2063591250348217e+01, 3),
    (1.2391478885434092e+01, 6),
    (1.2443384282541038e+01, 10),
    (1.2485937368199599e+01, 1),
    (1.3380124390830110e+01, 4),
    (1.3492850033498550e+01, 11),
    (1.3578723596668164e+01, 7),
    (1.3920521426635714e+01, 2),
    (1.4539784422157057e+01, 12),
    (1.4670116776571762e+01, 5),
    (1.4753368537911919e+01, 8),
    (1.5313561547672176e+01, 3),
    (1.5584492639147765e+01, 13),
    (1.5643866106347758e+01, 1),
];

/// The first 30 `(ρ, n)` of the union of two root lists.
pub fn merged(a: &[(f64, usize)], b: &[(f64, usize)]) -> Vec<(f64, usize)> {
    let mut all: Vec<_> = a.iter().chain(b).copied().collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    all.truncate(30);
    all
}

fn random_point(rng: &mut impl Rng, r_max: f64) -> [f64; 3] {
    loop {
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r = vec3::rnorm(p);
        if r > 1e-3 && r <= 1.0 {
            return p.map(|c| c * r_max);
        }
    }
}

/// Worst relative error of the quadrature Herglotz pair against the
/// closed-form `(M, N)` waves, over `points` random points in the ball of
/// radius 1.5 for every single-mode density with degree up to `n_max`.
pub fn calibration_error(n_max: usize, points: usize, host: &Host, omega: f64) -> f64 {
    let kappa = host.wavenumber(omega);
    let k = Complex64::new(kappa, 0.0);
    let r_max = 1.5;
    let degree = suggested_degree(n_max, kappa, r_max);
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let g = curl_factor(k, omega, host.mu_inf);
    let mut worst: f64 = 0.0;
    for mode in Mode::all(n_max) {
        let mut a = HerglotzDensity::zeros(kappa, n_max).unwrap();
        a.field.set(&mode, Complex64::new(1.0, 0.0)).unwrap();
        let c = mode_constant(mode.n, mode.pol) / host.eps_inf.sqrt();
        let xs: Vec<[f64; 3]> = (0..points).map(|_| random_point(&mut rng, r_max)).collect();
        let got = eval_pairs_quadrature(&a, host, omega, &xs, degree).unwrap();
        for (x, (e, h)) in xs.iter().zip(got) {
            let m = vector_wave_m(mode.n, mode.m, k, *x, WaveKind::Regular).unwrap();
            let n = vector_wave_n(mode.n, mode.m, k, *x, WaveKind::Regular).unwrap();
            let (e_ref, h_ref) = match mode.pol {
                Polarization::Te => (vec3::scale(c, m), vec3::scale(c * g, n)),
                Polarization::Tm => (vec3::scale(c, n), vec3::scale(c * g, m)),
            };
            // Regular waves of high degree vanish near the origin; measure
            // against the mode's size at the outer radius instead.
            let scale = (vec3::norm(e_ref) + vec3::norm(h_ref)).max(1e-3 * c.norm());
            let err = vec3::norm(vec3::sub(e, e_ref)) + vec3::norm(vec3::sub(h, h_ref));
            worst = worst.max(err / scale);
        }
    }
    worst
}
