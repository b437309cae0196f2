//! Scattering by a layered sphere in a homogeneous host.
//!
//! The solver carries the Riccati log-derivative `D = ψ'/ψ` of the regular
//! interior solution outward through the layers and never forms a Bessel
//! function of a complex argument directly, so thin lossy shells with huge
//! `Im k` stay finite.
//!
//! Convention: outside the sphere each `(n, m, pol)` wave is `j_n + s h1_n`
//! times the incident coefficient, so `|1 + 2s| = 1` for lossless media.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{Direction, Polarization, SphereQuadrature};
use crate::herglotz::{density_to_interior, HerglotzDensity};
use crate::media::{Host, Material};
use crate::sobolev::{self, NormKind};
use crate::spectral::{FieldPair, FieldRole, SpectralField};
use crate::specfun::{SpecFun, DEFAULT_MAX_DEGREE};
use crate::vec3::{self, C3, R3};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One spherical layer: the region between the previous radius and `outer_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub outer_radius: f64,
    pub epsilon: f64,
    pub mu: f64,
    #[serde(default)]
    pub sigma: f64,
}

impl Layer {
    pub fn new(outer_radius: f64, m: Material) -> Self {
        Self {
            outer_radius,
            epsilon: m.epsilon,
            mu: m.mu,
            sigma: m.sigma,
        }
    }

    pub fn material(&self) -> Material {
        Material {
            epsilon: self.epsilon,
            mu: self.mu,
            sigma: self.sigma,
        }
    }
}

/// Which perfect wall the coating mimics as `τ → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoatingKind {
    /// `(ε/τ, μτ, σ/τ)`
    Pec,
    /// `(τε, μ/τ, τσ)`
    Pmc,
}

/// A coating with base constants `(ε_c, μ_c, σ_c)` scaled by `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoatingSpec {
    pub tau: f64,
    pub epsilon: f64,
    pub mu: f64,
    #[serde(default)]
    pub sigma: f64,
    pub kind: CoatingKind,
}

impl CoatingSpec {
    pub fn scaled_material(&self) -> Result<Material> {
        if !(self.tau.is_finite() && self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidInput(format!("tau must lie in (0, 1], got {}", self.tau)));
        }
        let t = self.tau;
        let m = match self.kind {
            CoatingKind::Pec => Material::new(self.epsilon / t, self.mu * t, self.sigma / t),
            CoatingKind::Pmc => Material::new(self.epsilon * t, self.mu / t, self.sigma * t),
        }?;
        Ok(m)
    }
}

/// Concentric layers (innermost first) inside a homogeneous host.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayeredMedium {
    pub layers: Vec<Layer>,
    pub host: Host,
}

impl LayeredMedium {
    pub fn new(layers: Vec<Layer>, host: Host) -> Result<Self> {
        let m = Self { layers, host };
        m.validate()?;
        Ok(m)
    }

    pub fn homogeneous(radius: f64, material: Material, host: Host) -> Result<Self> {
        Self::new(vec![Layer::new(radius, material)], host)
    }

    /// Core ball of radius `core_radius` inside a coating shell reaching `outer_radius`.
    pub fn coated(
        core_radius: f64,
        core: Material,
        coating: &CoatingSpec,
        outer_radius: f64,
        host: Host,
    ) -> Result<Self> {
        Self::new(
            vec![
                Layer::new(core_radius, core),
                Layer::new(outer_radius, coating.scaled_material()?),
            ],
            host,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::InvalidInput("medium needs at least one layer".into()));
        }
        Host::new(self.host.eps_inf, self.host.mu_inf)?;
        let mut prev = 0.0;
        for l in &self.layers {
            if !(l.outer_radius.is_finite() && l.outer_radius > prev) {
                return Err(Error::InvalidInput(format!(
                    "layer radii must increase strictly from 0 (got {} after {prev})",
                    l.outer_radius
                )));
            }
            l.material().validate()?;
            prev = l.outer_radius;
        }
        Ok(())
    }

    pub fn outer_radius(&self) -> f64 {
        self.layers.last().map_or(0.0, |l| l.outer_radius)
    }

    /// Largest `c ∈ (0, 1]` with `c <= ε, μ <= 1/c` in every layer.
    pub fn ellipticity_constant(&self) -> f64 {
        self.layers
            .iter()
            .flat_map(|l| [l.epsilon, 1.0 / l.epsilon, l.mu, 1.0 / l.mu])
            .fold(1.0, f64::min)
    }

    pub fn max_conductivity(&self) -> f64 {
        self.layers.iter().map(|l| l.sigma).fold(0.0, f64::max)
    }
}

/// Principal `k` with `k² = ω² μ (ε + iσ/ω)`, `Im k >= 0`.
pub fn effective_wavenumber(m: &Material, omega: f64) -> Complex64 {
    m.wavenumber(omega)
}

/// Scattering coefficients `s_n` for degrees `0..=n_max` (entry 0 unused).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MieCoefficients {
    pub n_max: usize,
    pub te: Vec<Complex64>,
    pub tm: Vec<Complex64>,
}

impl MieCoefficients {
    pub fn get(&self, n: usize, pol: Polarization) -> Complex64 {
        match pol {
            Polarization::Te => self.te[n],
            Polarization::Tm => self.tm[n],
        }
    }
}

/// `R_j(ρa) / R_j(ρb)` with `R_j = ψ_j / ξ_j`, for `j = 0..=n`.
fn riccati_ratio(
    n: usize,
    rho_a: Complex64,
    rho_b: Complex64,
    d1a: &[Complex64],
    d3a: &[Complex64],
    d1b: &[Complex64],
    d3b: &[Complex64],
) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(n + 1);
    let ea = (2.0 * I * rho_a).exp();
    let eb = (2.0 * I * rho_b).exp();
    p.push((2.0 * I * (rho_b - rho_a)).exp() * (ea - 1.0) / (eb - 1.0));
    for j in 1..=n {
        let ja = j as f64 / rho_a;
        let jb = j as f64 / rho_b;
        let f = (ja + d3a[j]) * (jb + d1b[j]) / ((ja + d1a[j]) * (jb + d3b[j]));
        p.push(p[j - 1] * f);
    }
    p
}

/// Convert `D` across an interface so that tangential `E` and `H` are continuous.
fn cross_interface(d: Complex64, pol: Polarization, k_in: Complex64, mu_in: f64, k_out: Complex64, mu_out: f64) -> Complex64 {
    if !d.is_finite() {
        return d;
    }
    match pol {
        Polarization::Te => d * ((mu_out * k_in) / (mu_in * k_out)),
        Polarization::Tm => d * ((mu_in * k_out) / (mu_out * k_in)),
    }
}

/// `s_n` for all `n <= n_max` and both polarizations.
pub fn mie_coefficients(medium: &LayeredMedium, omega: f64, n_max: usize) -> Result<MieCoefficients> {
    medium.validate()?;
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    let sf = SpecFun::new(n_max.max(DEFAULT_MAX_DEGREE));
    let ks: Vec<Complex64> = medium
        .layers
        .iter()
        .map(|l| effective_wavenumber(&l.material(), omega))
        .collect();
    let core = &medium.layers[0];
    let d_core = sf.psi_logderiv_seq(n_max, ks[0] * core.outer_radius)?;
    let mut d_te = d_core.clone();
    let mut d_tm = d_core;
    for l in 1..medium.layers.len() {
        let (inner, layer) = (&medium.layers[l - 1], &medium.layers[l]);
        let k = ks[l];
        let (rho_a, rho_b) = (k * inner.outer_radius, k * layer.outer_radius);
        let d1a = sf.psi_logderiv_seq(n_max, rho_a)?;
        let d3a = sf.xi_logderiv_seq(n_max, rho_a)?;
        let d1b = sf.psi_logderiv_seq(n_max, rho_b)?;
        let d3b = sf.xi_logderiv_seq(n_max, rho_b)?;
        let p = riccati_ratio(n_max, rho_a, rho_b, &d1a, &d3a, &d1b, &d3b);
        for (pol, d) in [(Polarization::Te, &mut d_te), (Polarization::Tm, &mut d_tm)] {
            for n in 0..=n_max {
                let dn = cross_interface(d[n], pol, ks[l - 1], inner.mu, k, layer.mu);
                let q = if dn.is_finite() {
                    -(d1a[n] - dn) / (d3a[n] - dn)
                } else {
                    Complex64::new(-1.0, 0.0)
                };
                let qp = q * p[n];
                d[n] = if qp.is_finite() {
                    (d1b[n] + qp * d3b[n]) / (1.0 + qp)
                } else {
                    d3b[n]
                };
            }
        }
    }
    let outer = medium.layers.last().expect("validated");
    let kappa = effective_wavenumber(&medium.host.material(), omega);
    let x = kappa * outer.outer_radius;
    let d1 = sf.psi_logderiv_seq(n_max, x)?;
    let d3 = sf.xi_logderiv_seq(n_max, x)?;
    let j = sf.j_seq(n_max, x)?;
    let h = sf.h1_seq(n_max, x)?;
    let k_last = *ks.last().expect("validated");
    let mut te = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let mut tm = te.clone();
    for (pol, d, out) in [
        (Polarization::Te, &d_te, &mut te),
        (Polarization::Tm, &d_tm, &mut tm),
    ] {
        for n in 1..=n_max {
            let dn = cross_interface(d[n], pol, k_last, outer.mu, kappa, medium.host.mu_inf);
            let ratio = j[n] / h[n];
            out[n] = if dn.is_finite() {
                -ratio * (d1[n] - dn) / (d3[n] - dn)
            } else {
                -ratio
            };
            if !out[n].is_finite() {
                return Err(Error::NonFinite("scattering coefficient"));
            }
        }
    }
    Ok(MieCoefficients { n_max, te, tm })
}

/// `s_n` for one degree and polarization.
pub fn mie_coefficient(medium: &LayeredMedium, omega: f64, n: usize, pol: Polarization) -> Result<Complex64> {
    Ok(mie_coefficients(medium, omega, n)?.get(n, pol))
}

/// `E∞` coefficient (on `V` for TE, `U` for TM) of a unit outgoing wave.
pub fn far_field_constant(n: usize, pol: Polarization, kappa: f64) -> Complex64 {
    let mi = Complex64::new(0.0, -1.0);
    match pol {
        Polarization::Te => -mi.powu(n as u32 + 1) / kappa,
        Polarization::Tm => mi.powu(n as u32) / kappa,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterResult {
    pub omega: f64,
    pub host: Host,
    pub outer_radius: f64,
    pub n_max: usize,
    pub coefficients: MieCoefficients,
    /// Scattered `E` as outgoing waves with wavenumber `κ`.
    pub scattered: SpectralField,
    pub far_field: SpectralField,
    /// `‖E∞‖_{L²(S²)}`.
    pub farfield_norm: f64,
    /// `‖E_a‖_{H(curl)}` on the ball enclosing the scatterer.
    pub incident_e_hcurl: f64,
    pub incident_h_hcurl: f64,
}

/// Scatter the Herglotz wave of density `a` off `medium`.
pub fn solve_farfield(a: &HerglotzDensity, medium: &LayeredMedium, omega: f64) -> Result<ScatterResult> {
    let incident = density_to_interior(a, &medium.host, omega)?;
    scatter_pair(&incident, medium, omega)
}

/// Scatter an arbitrary entire incident pair with wavenumber `κ`.
pub fn scatter_pair(incident: &FieldPair, medium: &LayeredMedium, omega: f64) -> Result<ScatterResult> {
    let n_max = incident.n_max();
    let kappa = medium.host.wavenumber(omega);
    if (incident.wavenumber() - kappa).norm() > 1e-12 * kappa {
        return Err(Error::InvalidInput("incident field does not match the host wavenumber".into()));
    }
    let coefficients = mie_coefficients(medium, omega, n_max)?;
    let mut scattered = SpectralField::zeros(FieldRole::Scattered, kappa.into(), n_max);
    let mut far_field = SpectralField::zeros(FieldRole::FarField, kappa.into(), n_max);
    for (mode, c) in incident.e.modes() {
        let sc = c * coefficients.get(mode.n, mode.pol);
        scattered.coeffs[mode.index()] = sc;
        far_field.coeffs[mode.index()] = sc * far_field_constant(mode.n, mode.pol, kappa);
    }
    let radius = medium.outer_radius();
    Ok(ScatterResult {
        omega,
        host: medium.host,
        outer_radius: radius,
        n_max,
        farfield_norm: far_field.coefficient_norm(),
        incident_e_hcurl: sobolev::field_norm(&incident.e, radius, NormKind::Hcurl)?,
        incident_h_hcurl: sobolev::field_norm(&incident.h, radius, NormKind::Hcurl)?,
        coefficients,
        scattered,
        far_field,
    })
}

impl ScatterResult {
    /// `(E∞(d), H∞(d))` with `H∞ = sqrt(ε∞/μ∞) d × E∞`.
    pub fn far_field_at(&self, d: &Direction) -> Result<(C3, C3)> {
        let e = self.far_field.eval_on_sphere(d)?;
        let y = (self.host.eps_inf / self.host.mu_inf).sqrt();
        Ok((e, vec3::scale_re(y, vec3::cross(d.r_hat(), e))))
    }

    /// `(E^s(x), H^s(x))` outside the scatterer.
    pub fn scattered_field_at(&self, x: R3) -> Result<(C3, C3)> {
        let r = vec3::rnorm(x);
        if r <= self.outer_radius {
            return Err(Error::InteriorPoint {
                radius: r,
                outer: self.outer_radius,
            });
        }
        FieldPair::from_electric(self.scattered.clone(), self.omega, self.host.mu_inf).eval_at(x)
    }

    /// Far-field samples on a product grid: `theta,phi` and the complex
    /// `θ`/`φ` components of `E∞`.
    pub fn write_farfield_csv<W: Write>(&self, w: W) -> Result<()> {
        let quad = SphereQuadrature::new(2 * self.n_max + 2)?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["theta", "phi", "ReE1", "ImE1", "ReE2", "ImE2", "ReE3", "ImE3"])?;
        for d in quad.nodes() {
            let (e, _) = self.far_field_at(d)?;
            let row = [
                d.theta(),
                d.phi(),
                e[0].re,
                e[0].im,
                e[1].re,
                e[1].im,
                e[2].re,
                e[2].im,
            ];
            out.write_record(row.map(|v| format!("{v:.16e}")))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::Mode;
    use crate::specfun::Riccati;

    fn vac() -> Host {
        Host::vacuum()
    }

    #[test]
    fn transparent_medium_does_not_scatter() {
        let h = Host::new(2.0, 1.5).unwrap();
        let m = LayeredMedium::new(
            vec![Layer::new(0.5, h.material()), Layer::new(1.2, h.material())],
            h,
        )
        .unwrap();
        let c = mie_coefficients(&m, 3.3, 12).unwrap();
        assert!(c.te.iter().chain(&c.tm).all(|s| *s == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn lossless_coefficients_are_unitary() {
        let m = LayeredMedium::new(
            vec![
                Layer::new(0.4, Material::lossless(4.0, 1.0).unwrap()),
                Layer::new(1.0, Material::lossless(1.5, 2.5).unwrap()),
            ],
            Host::new(1.2, 1.0).unwrap(),
        )
        .unwrap();
        for omega in [0.3, 2.0, 7.5] {
            let c = mie_coefficients(&m, omega, 20).unwrap();
            for s in c.te.iter().chain(&c.tm).skip(1) {
                assert!(((1.0 + 2.0 * s).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lossy_coefficients_are_contractive() {
        let m = LayeredMedium::homogeneous(1.0, Material::new(2.0, 1.0, 0.7).unwrap(), vac()).unwrap();
        let c = mie_coefficients(&m, 2.0, 15).unwrap();
        for s in c.te.iter().skip(1).chain(c.tm.iter().skip(1)) {
            assert!((1.0 + 2.0 * s).norm() <= 1.0 + 1e-14);
        }
        assert!((1.0 + 2.0 * c.te[1]).norm() < 0.99);
        assert!((1.0 + 2.0 * c.tm[1]).norm() < 0.99);
    }

    #[test]
    fn conductor_limit() {
        let m = LayeredMedium::homogeneous(1.0, Material::new(1.0, 1.0, 1e12).unwrap(), vac()).unwrap();
        let x = Complex64::new(2.0, 0.0);
        let c = mie_coefficients(&m, 2.0, 6).unwrap();
        let sf = SpecFun::default();
        let psi = Riccati::regular(&sf, 6, x).unwrap();
        let xi = Riccati::outgoing(&sf, 6, x).unwrap();
        for n in 1..=6 {
            let te = -psi.psi[n] / xi.psi[n];
            let tm = -psi.dpsi[n] / xi.dpsi[n];
            assert!((c.te[n] - te).norm() < 1e-5, "TE {n}");
            assert!((c.tm[n] - tm).norm() < 1e-5, "TM {n}");
        }
    }

    #[test]
    fn thin_lossy_shell_stays_finite() {
        let coat = CoatingSpec {
            tau: 1e-6,
            epsilon: 1.0,
            mu: 1.0,
            sigma: 50.0,
            kind: CoatingKind::Pec,
        };
        let m = LayeredMedium::coated(0.9, Material::lossless(3.0, 1.0).unwrap(), &coat, 1.0, vac()).unwrap();
        let c = mie_coefficients(&m, 4.0, 25).unwrap();
        assert!(c.te.iter().chain(&c.tm).all(|s| s.is_finite() && (1.0 + 2.0 * s).norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn scaled_coatings_keep_wavenumber() {
        for kind in [CoatingKind::Pec, CoatingKind::Pmc] {
            let base = CoatingSpec { tau: 1.0, epsilon: 2.0, mu: 3.0, sigma: 0.5, kind };
            let k1 = base.scaled_material().unwrap().wavenumber(1.7);
            let k2 = CoatingSpec { tau: 1e-4, ..base }.scaled_material().unwrap().wavenumber(1.7);
            assert!((k1 - k2).norm() < 1e-12 * k1.norm());
        }
    }

    #[test]
    fn conductivity_only_scaling_grows_like_inverse_sqrt_tau() {
        let omega = 2.0;
        let ims: Vec<f64> = [1e-2, 1e-4, 1e-6]
            .iter()
            .map(|t| Material::new(1.0, 1.0, 1.0 / t).unwrap().wavenumber(omega).im)
            .collect();
        for w in ims.windows(2) {
            assert!((w[1] / w[0] / 10.0 - 1.0).abs() < 1e-2);
        }
        let exact = (omega / 2.0 * 1e6).sqrt();
        assert!((ims[2] / exact - 1.0).abs() < 1e-5);
    }

    #[test]
    fn wavenumber_branch() {
        let m = Material::new(2.0, 1.5, 3.0).unwrap();
        let k = effective_wavenumber(&m, 0.8);
        assert!(k.im >= 0.0 && k.re > 0.0);
        let k2 = Complex64::new(0.64 * 1.5 * 2.0, 0.8 * 1.5 * 3.0);
        assert!((k * k - k2).norm() < 1e-14 * k2.norm());
    }

    #[test]
    fn validation() {
        let mat = Material::vacuum();
        assert!(LayeredMedium::new(vec![], vac()).is_err());
        assert!(LayeredMedium::new(vec![Layer::new(1.0, mat), Layer::new(1.0, mat)], vac()).is_err());
        let bad = Layer { outer_radius: 1.0, epsilon: -1.0, mu: 1.0, sigma: 0.0 };
        assert!(LayeredMedium::new(vec![bad], vac()).is_err());
        let json = r#"{"layers":[{"outer_radius":1.0,"epsilon":2.0,"mu":1.0}],"host":{"eps_inf":1.0,"mu_inf":1.0},"x":1}"#;
        assert!(serde_json::from_str::<LayeredMedium>(json).is_err());
    }

    #[test]
    fn scattered_field_matches_far_field_asymptotics() {
        let m = LayeredMedium::homogeneous(1.0, Material::lossless(2.5, 1.0).unwrap(), vac()).unwrap();
        let omega = 1.5;
        let mut a = HerglotzDensity::zeros(omega, 4).unwrap();
        a.field.coeffs[Mode::new(2, 1, Polarization::Tm).unwrap().index()] = 1.0.into();
        a.field.coeffs[Mode::new(3, -2, Polarization::Te).unwrap().index()] = Complex64::new(0.2, 0.5);
        let res = solve_farfield(&a, &m, omega).unwrap();
        let d = Direction::from_angles(1.1, 0.4);
        let r = 4000.0;
        let u = d.xyz();
        let (es, _) = res.scattered_field_at([r * u[0], r * u[1], r * u[2]]).unwrap();
        let (einf, _) = res.far_field_at(&d).unwrap();
        let phase = Complex64::new(0.0, omega * r).exp() / r;
        let diff = vec3::norm(vec3::sub(es, vec3::scale(phase, einf)));
        assert!(diff < 5e-3 * vec3::norm(einf) / r);
        assert!(res.scattered_field_at([0.1, 0.0, 0.0]).is_err());
    }
}
