//! Quick invariant suite behind the `check` subcommand.

use num_complex::Complex64;
use serde::Serialize;

use crate::eigenmodes::{eigenfunction_coefficients, nth_eigenvalue, BallGeometry, Family};
use crate::error::Result;
use crate::harmonics::{Direction, SphereQuadrature};
use crate::herglotz::{fit_density, HerglotzDensity};
use crate::media::{Host, Material};
use crate::mie::{mie_coefficients, solve_farfield, LayeredMedium};
use crate::sobolev::PairNorm;
use crate::specfun::SpecFun;
use crate::vec3;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name,
        passed: value.is_finite() && value <= tolerance,
        value,
        tolerance,
    }
}

/// `max |z² (j_n y_{n-1} - j_{n-1} y_n) - 1|` for real `z` and `n ≤ 40`.
fn wronskian_defect() -> Result<f64> {
    let sf = SpecFun::new(40);
    let mut worst: f64 = 0.0;
    for z in [0.3, 1.0, 5.5, 17.0, 42.0] {
        let z = Complex64::new(z, 0.0);
        let j = sf.j_seq(40, z)?;
        let y = sf.y_seq(40, z)?;
        for n in 1..=40 {
            let w = z * z * (j[n] * y[n - 1] - j[n - 1] * y[n]);
            worst = worst.max((w - 1.0).norm());
        }
    }
    Ok(worst)
}

fn unitarity_defect() -> Result<f64> {
    let m = LayeredMedium::homogeneous(1.0, Material::lossless(3.0, 1.5)?, Host::vacuum())?;
    let c = mie_coefficients(&m, 2.3, 15)?;
    Ok(c.te
        .iter()
        .chain(&c.tm)
        .skip(1)
        .map(|s| ((1.0 + 2.0 * s).norm() - 1.0).abs())
        .fold(0.0, f64::max))
}

/// `(tangency, admittance)` defects of the far field of a plane wave.
fn far_field_defects() -> Result<(f64, f64)> {
    let host = Host::vacuum();
    let omega = 2.0;
    let d0 = Direction::from_angles(0.4, 1.1);
    let p = vec3::real(d0.theta_hat());
    let a = HerglotzDensity::plane_wave(host.wavenumber(omega), &d0, p, 12)?;
    let m = LayeredMedium::homogeneous(1.0, Material::new(2.5, 1.0, 0.3)?, host)?;
    let res = solve_farfield(&a, &m, omega)?;
    let quad = SphereQuadrature::new(12)?;
    let (mut tan, mut adm) = (0.0f64, 0.0f64);
    for d in quad.nodes() {
        let (e, h) = res.far_field_at(d)?;
        let scale = vec3::norm(e).max(1e-300);
        tan = tan.max(vec3::dot(d.r_hat(), e).norm() / scale);
        adm = adm.max(vec3::norm(vec3::sub(h, vec3::cross(d.r_hat(), e))) / scale);
    }
    Ok((tan, adm))
}

fn eigen_fit_defect() -> Result<f64> {
    let ball = BallGeometry::new(1.0, 1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    for fam in Family::ALL {
        let rec = nth_eigenvalue(&ball, fam, 0)?;
        let pair = eigenfunction_coefficients(&ball, &rec, 0)?;
        let fit = fit_density(&pair, &Host::vacuum(), rec.omega, 1.0, PairNorm::H1Pair, 0.0, 6)?;
        worst = worst.max(fit.achieved_eps);
    }
    Ok(worst)
}

pub fn run_checks() -> Result<Vec<CheckResult>> {
    let ball = BallGeometry::new(1.0, 1.0, 1.0)?;
    // First zero of j_1.
    let first_pec = nth_eigenvalue(&ball, Family::PecTe, 0)?.omega;
    let (tan, adm) = far_field_defects()?;
    Ok(vec![
        check("wronskian", wronskian_defect()?, 1e-10),
        check("pec_te_first_eigenvalue", (first_pec - 4.493_409_457_909_064).abs(), 1e-10),
        check("unitarity", unitarity_defect()?, 1e-10),
        check("far_field_tangency", tan, 1e-12),
        check("far_field_admittance", adm, 1e-12),
        check("eigenfunction_fit", eigen_fit_defect()?, 1e-10),
    ])
}

#[cfg(test)]
mod tests {
    #[test]
    fn suite_passes() {
        for c in super::run_checks().unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}
