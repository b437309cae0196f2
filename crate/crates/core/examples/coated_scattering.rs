//! Plane wave on a lossy core behind a thin conducting shell. As tau shrinks
//! the shell acts as a perfect conductor: the Mie coefficients approach those
//! of a hard PEC ball, and the core no longer matters.
use nonscatter::harmonics::Direction;
use nonscatter::herglotz::HerglotzDensity;
use nonscatter::media::{Host, Material};
use nonscatter::mie::{mie_coefficients, solve_farfield, CoatingKind, CoatingSpec, LayeredMedium};
use nonscatter::specfun::{Riccati, SpecFun};
use nonscatter::vec3;
use num_complex::Complex64;

fn main() -> nonscatter::Result<()> {
    let host = Host::vacuum();
    let omega = 3.0;
    let n_max = 12;
    let d0 = Direction::from_angles(0.0, 0.0);
    let a = HerglotzDensity::plane_wave(host.wavenumber(omega), &d0, vec3::real(d0.theta_hat()), n_max)?;

    // Hard PEC ball of radius 1: s_n = -psi_n / xi_n (TE), -psi_n' / xi_n' (TM).
    let sf = SpecFun::new(n_max);
    let x = Complex64::new(host.wavenumber(omega), 0.0);
    let (psi, xi) = (Riccati::regular(&sf, n_max, x)?, Riccati::outgoing(&sf, n_max, x)?);

    for (label, core) in [("lossy core", Material::new(2.0, 1.0, 0.5)?), ("vacuum core", Material::vacuum())] {
        println!("{label}");
        for tau in [1e-1, 1e-3, 1e-6] {
            let coat = CoatingSpec { tau, epsilon: 1.0, mu: 1.0, sigma: 1.0, kind: CoatingKind::Pec };
            let m = LayeredMedium::coated(0.5, core, &coat, 1.0, host)?;
            let c = mie_coefficients(&m, omega, n_max)?;
            let gap = (1..=n_max)
                .map(|n| {
                    let te = (c.te[n] + psi.psi[n] / xi.psi[n]).norm();
                    let tm = (c.tm[n] + psi.dpsi[n] / xi.dpsi[n]).norm();
                    te.max(tm)
                })
                .fold(0.0, f64::max);
            let ff = solve_farfield(&a, &m, omega)?.farfield_norm;
            println!("  tau = {tau:.0e}: |E_inf| = {ff:.8e}, max |s - s_pec| = {gap:.2e}");
        }
    }
    Ok(())
}
