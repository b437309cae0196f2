//! Electromagnetic Herglotz pairs
//!
//! ```text
//! E[a](x) = ε∞^{-1/2} ∫_{S²} e^{iκ x·d} a(d) ds(d),    H[a] = curl E[a] / (iωμ∞)
//! ```
//!
//! for tangential densities `a`. In the VSH basis the operator is diagonal:
//! the density `V_nm` produces `-4π iⁿ ε∞^{-1/2} M_nm(κ, ·)` and `U_nm`
//! produces `-4π i^{n+1} ε∞^{-1/2} N_nm(κ, ·)`. Both the spectral form and a
//! direct quadrature of the integral are provided; tests tie them together.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{Direction, Mode, Polarization, SphereQuadrature, VshTable};
use crate::media::{curl_factor, Host};
use crate::sobolev::{self, PairNorm, RadialGram};
use crate::spectral::{FieldPair, FieldRole, SpectralField};
use crate::vec3::{self, C3, R3};

/// Largest accepted relative change between quadrature degree `q` and `2q`.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// A truncated tangential density on S² for host wavenumber `kappa`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "DensityJson", try_from = "DensityJson")]
pub struct HerglotzDensity {
    pub kappa: f64,
    pub field: SpectralField,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityJson {
    kappa: f64,
    n_max: usize,
    entries: Vec<DensityEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityEntry {
    n: usize,
    m: i64,
    pol: Polarization,
    re: f64,
    im: f64,
}

impl From<HerglotzDensity> for DensityJson {
    fn from(d: HerglotzDensity) -> Self {
        Self {
            kappa: d.kappa,
            n_max: d.field.n_max,
            entries: d
                .field
                .modes()
                .map(|(mode, c)| DensityEntry {
                    n: mode.n,
                    m: mode.m,
                    pol: mode.pol,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<DensityJson> for HerglotzDensity {
    type Error = Error;
    fn try_from(j: DensityJson) -> Result<Self> {
        let mut d = HerglotzDensity::zeros(j.kappa, j.n_max)?;
        for e in j.entries {
            let mode = Mode::new(e.n, e.m, e.pol)?;
            d.field.set(&mode, Complex64::new(e.re, e.im))?;
        }
        Ok(d)
    }
}

/// `-4π iⁿ` (TE) or `-4π i^{n+1}` (TM): image of a unit density coefficient,
/// before the `ε∞^{-1/2}` factor.
pub fn mode_constant(n: usize, pol: Polarization) -> Complex64 {
    let p = n + pol.offset();
    Complex64::new(0.0, 1.0).powu(p as u32) * (-4.0 * std::f64::consts::PI)
}

impl HerglotzDensity {
    pub fn zeros(kappa: f64, n_max: usize) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidInput(format!("kappa must be positive, got {kappa}")));
        }
        Ok(Self {
            kappa,
            field: SpectralField::zeros(FieldRole::Density, kappa.into(), n_max),
        })
    }

    pub fn n_max(&self) -> usize {
        self.field.n_max
    }

    /// Truncated expansion of a point mass at `d0` with polarization `p`
    /// (`p · d0 = 0`). Its Herglotz field tends to `ε∞^{-1/2} p e^{iκ d0·x}`.
    pub fn plane_wave(kappa: f64, d0: &Direction, p: C3, n_max: usize) -> Result<Self> {
        if vec3::dot(p, d0.r_hat()).norm() > 1e-12 * vec3::norm(p) {
            return Err(Error::InvalidInput("polarization must be tangential".into()));
        }
        let mut out = Self::zeros(kappa, n_max)?;
        let t = VshTable::new(n_max, d0);
        for mode in Mode::all(n_max) {
            out.field.coeffs[mode.index()] = vec3::inner(p, t.basis(&mode));
        }
        Ok(out)
    }

    pub fn eval(&self, d: &Direction) -> C3 {
        self.field
            .eval_on_sphere(d)
            .expect("density role is checked at construction")
    }

    /// `L²(S²)` norm (the VSH basis is orthonormal).
    pub fn l2_norm(&self) -> f64 {
        self.field.coefficient_norm()
    }

    /// The density `d ↦ R a(Rᵀ d)`, projected back onto the VSH basis.
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> Result<Self> {
        let n = self.n_max();
        let quad = SphereQuadrature::new(2 * n + 2)?;
        let rt = vec3::transpose(rot);
        let samples: Vec<C3> = quad
            .nodes()
            .iter()
            .map(|d| {
                let back = Direction::from_cartesian(vec3::mat_apply_re(&rt, d.xyz()))?;
                Ok(vec3::mat_apply(rot, self.eval(&back)))
            })
            .collect::<Result<_>>()?;
        let mut out = Self::zeros(self.kappa, n)?;
        for ((d, w), s) in quad.nodes().iter().zip(quad.weights()).zip(&samples) {
            let t = VshTable::new(n, d);
            for mode in Mode::all(n) {
                out.field.coeffs[mode.index()] += *w * vec3::inner(*s, t.basis(&mode));
            }
        }
        Ok(out)
    }
}

fn check_kappa(a: &HerglotzDensity, host: &Host, omega: f64) -> Result<f64> {
    let kappa = host.wavenumber(omega);
    if (a.kappa - kappa).abs() > 1e-12 * kappa {
        return Err(Error::InvalidInput(format!(
            "density built for kappa = {}, host gives {kappa}",
            a.kappa
        )));
    }
    Ok(kappa)
}

/// The Herglotz pair of `a` as a regular wave expansion with wavenumber `κ`.
pub fn density_to_interior(a: &HerglotzDensity, host: &Host, omega: f64) -> Result<FieldPair> {
    let kappa = check_kappa(a, host, omega)?;
    let scale = 1.0 / host.eps_inf.sqrt();
    let mut e = SpectralField::zeros(FieldRole::Interior, kappa.into(), a.n_max());
    for (mode, c) in a.field.modes() {
        e.coeffs[mode.index()] = c * mode_constant(mode.n, mode.pol) * scale;
    }
    Ok(FieldPair::from_electric(e, omega, host.mu_inf))
}

/// Density samples at the nodes of a quadrature rule.
struct Sampled<'a> {
    quad: &'a SphereQuadrature,
    values: Vec<C3>,
}

impl<'a> Sampled<'a> {
    fn new(a: &HerglotzDensity, quad: &'a SphereQuadrature) -> Self {
        Self {
            quad,
            values: quad.nodes().iter().map(|d| a.eval(d)).collect(),
        }
    }

    fn sum(&self, kappa: f64, host: &Host, omega: f64, x: R3) -> (C3, C3) {
        let i = Complex64::new(0.0, 1.0);
        let mut e = vec3::ZERO;
        let mut h = vec3::ZERO;
        for ((d, w), av) in self.quad.nodes().iter().zip(self.quad.weights()).zip(&self.values) {
            let dv = d.xyz();
            let phase = (i * kappa * (x[0] * dv[0] + x[1] * dv[1] + x[2] * dv[2])).exp() * *w;
            e = vec3::add(e, vec3::scale(phase, *av));
            h = vec3::add(h, vec3::scale(phase, vec3::cross(vec3::real(dv), *av)));
        }
        let s = 1.0 / host.eps_inf.sqrt();
        let g = curl_factor(kappa.into(), omega, host.mu_inf) * i * s;
        (vec3::scale_re(s, e), vec3::scale(g, h))
    }
}

/// `(E[a](x), H[a](x))` by direct quadrature on S² with exactness `degree`,
/// checked against a second evaluation at `2 * degree`.
pub fn eval_pair_quadrature(
    a: &HerglotzDensity,
    host: &Host,
    omega: f64,
    x: R3,
    degree: usize,
) -> Result<(C3, C3)> {
    Ok(eval_pairs_quadrature(a, host, omega, &[x], degree)?[0])
}

/// [`eval_pair_quadrature`] at many points, sampling the density once.
pub fn eval_pairs_quadrature(
    a: &HerglotzDensity,
    host: &Host,
    omega: f64,
    xs: &[R3],
    degree: usize,
) -> Result<Vec<(C3, C3)>> {
    let kappa = check_kappa(a, host, omega)?;
    let (q1, q2) = (SphereQuadrature::new(degree)?, SphereQuadrature::new(2 * degree)?);
    let (coarse_rule, fine_rule) = (Sampled::new(a, &q1), Sampled::new(a, &q2));
    // Quadrature error scales with the integrand, not with the (possibly
    // tiny) value of the integral at `x`.
    let g = curl_factor(kappa.into(), omega, host.mu_inf).norm();
    let floor = (4.0 * std::f64::consts::PI).sqrt() * a.l2_norm() / host.eps_inf.sqrt() * (1.0 + g);
    xs.iter()
        .map(|&x| {
            let coarse = coarse_rule.sum(kappa, host, omega, x);
            let fine = fine_rule.sum(kappa, host, omega, x);
            let size = (vec3::norm(fine.0) + vec3::norm(fine.1)).max(floor).max(f64::MIN_POSITIVE);
            let change = vec3::norm(vec3::sub(coarse.0, fine.0)) + vec3::norm(vec3::sub(coarse.1, fine.1));
            if change > QUADRATURE_TOL * size {
                return Err(Error::UnderResolvedQuadrature {
                    degree,
                    change: change / size,
                });
            }
            Ok(fine)
        })
        .collect()
}

/// The smallest quadrature degree that resolves the integrand at radius `r`.
pub fn suggested_degree(n_max: usize, kappa: f64, r: f64) -> usize {
    n_max + (kappa * r).ceil() as usize + 24
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub density: HerglotzDensity,
    /// `⦀(E[a], H[a]) - target⦀` on the fitting ball.
    pub achieved_eps: f64,
    pub regularization: f64,
    pub truncation: usize,
    pub norm: PairNorm,
    pub radius: f64,
}

/// Regularized least-squares density for `target` on the ball of radius
/// `radius`: per mode, minimize `‖E[a] - E‖² + ‖H[a] - H‖² + λ|α|²` in the
/// Hilbert norm underlying `norm`. The residual is reported in `norm`.
pub fn fit_density(
    target: &FieldPair,
    host: &Host,
    omega: f64,
    radius: f64,
    norm: PairNorm,
    lambda: f64,
    n_max: usize,
) -> Result<FitReport> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("regularization must be >= 0, got {lambda}")));
    }
    if target.e.role != FieldRole::Interior {
        return Err(Error::InvalidInput("fit target must be a regular wave pair".into()));
    }
    let kappa = host.wavenumber(omega);
    let kc = Complex64::from(kappa);
    let kind = norm.kind();
    let n_common = n_max.min(target.n_max());
    let own = RadialGram::new(n_max, kc, kc, radius)?;
    let cross = RadialGram::new(n_common, target.wavenumber(), kc, radius)?;
    let g = curl_factor(kc, omega, host.mu_inf);
    let scale = 1.0 / host.eps_inf.sqrt();
    let mut a = HerglotzDensity::zeros(kappa, n_max)?;
    for mode in Mode::all(n_max) {
        let partner = match mode.pol {
            Polarization::Te => Polarization::Tm,
            Polarization::Tm => Polarization::Te,
        };
        let aa = mode_constant(mode.n, mode.pol) * scale;
        let bb = aa * g;
        let den = aa.norm_sqr() * own.entry(mode.n, mode.pol, kind).re
            + bb.norm_sqr() * own.entry(mode.n, partner, kind).re
            + lambda;
        let num = if mode.n <= n_common {
            let et = target.e.get(&mode);
            let ht = target.h.get(&Mode { pol: partner, ..mode });
            aa.conj() * et * cross.entry(mode.n, mode.pol, kind)
                + bb.conj() * ht * cross.entry(mode.n, partner, kind)
        } else {
            Complex64::new(0.0, 0.0)
        };
        if den > 0.0 {
            a.field.coeffs[mode.index()] = num / den;
        }
    }
    let image = density_to_interior(&a, host, omega)?;
    let achieved_eps = sobolev::pair_difference_norm(&image, target, radius, norm)?;
    Ok(FitReport {
        density: a,
        achieved_eps,
        regularization: lambda,
        truncation: n_max,
        norm,
        radius,
    })
}

/// `a + δ` with `δ` a seeded random direction scaled so that
/// `⦀(E[δ], H[δ])⦀ = eps` on the ball of radius `radius`.
pub fn perturb_density(
    a: &HerglotzDensity,
    eps: f64,
    seed: u64,
    host: &Host,
    omega: f64,
    radius: f64,
    norm: PairNorm,
) -> Result<HerglotzDensity> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be >= 0, got {eps}")));
    }
    if eps == 0.0 {
        return Ok(a.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta = HerglotzDensity::zeros(a.kappa, a.n_max())?;
    for c in delta.field.coeffs.iter_mut() {
        *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let size = sobolev::pair_norm(&density_to_interior(&delta, host, omega)?, radius, norm)?;
    if !(size > 0.0 && size.is_finite()) {
        return Err(Error::NonFinite("perturbation norm"));
    }
    let mut out = a.clone();
    for (c, d) in out.field.coeffs.iter_mut().zip(&delta.field.coeffs) {
        *c += d * (eps / size);
    }
    Ok(out)
}
