//! L², H(curl) and H¹ norms of regular wave fields on a ball.
//!
//! All three are diagonal in `(n, m, pol)` and independent of `m`, so a field
//! norm reduces to one radial integral per degree. Radial integrals use
//! Gauss–Legendre on `[0, R]`; the gradient term of H¹ uses Green's identity
//! (`Δu = -k² u` componentwise) so it needs only the boundary trace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{gauss_legendre, Polarization, RadialFactors, WaveKind};
use crate::spectral::{FieldPair, FieldRole, SpectralField};
use crate::specfun::SpecFun;

/// Fraction of the squared norm the top degree may carry before a field is
/// flagged as under-truncated.
pub const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    L2,
    Hcurl,
    H1,
}

/// Norm used on a field pair: `⦀(E,H)⦀ = ‖E‖ + ‖H‖`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairNorm {
    H1Pair,
    HcurlPair,
}

impl PairNorm {
    pub fn kind(self) -> NormKind {
        match self {
            PairNorm::H1Pair => NormKind::H1,
            PairNorm::HcurlPair => NormKind::Hcurl,
        }
    }
}

/// Radial data of degree `n` for unit-coefficient `M` / `N` waves with
/// wavenumbers `k1`, `k2`: L² cross products and the boundary terms of the
/// gradient form.
#[derive(Debug, Clone, Copy)]
struct DegreeGram {
    l2_m: Complex64,
    l2_n: Complex64,
    bnd_m: Complex64,
    bnd_n: Complex64,
}

/// Cross Gram entries `<F1, F2>` between unit-coefficient waves of equal
/// `(n, m, pol)` and wavenumbers `k1`, `k2` on the ball of radius `radius`.
pub struct RadialGram {
    k1: Complex64,
    k2: Complex64,
    radius: f64,
    degrees: Vec<DegreeGram>,
}

fn node_count(n_max: usize, k: f64, radius: f64) -> usize {
    32 + n_max + (2.0 * k * radius).ceil() as usize
}

/// Boundary values `(z, k z', z/ρ, d/dr(z/ρ)... )` needed for the H¹ trace.
struct Trace {
    z: Complex64,
    dz_dr: Complex64,
    a: Complex64,
    da_dr: Complex64,
    b: Complex64,
    db_dr: Complex64,
}

fn traces(n_max: usize, k: Complex64, radius: f64) -> Result<Vec<Trace>> {
    let rho = k * radius;
    let sf = SpecFun::new(n_max.max(crate::specfun::DEFAULT_MAX_DEGREE) + 1);
    let j = sf.j_seq(n_max + 1, rho)?;
    Ok((0..=n_max)
        .map(|n| {
            let nn = (n * (n + 1)) as f64;
            let c = nn.sqrt();
            let z = j[n];
            let dz = if n == 0 {
                -j[1]
            } else {
                j[n - 1] - (n + 1) as f64 / rho * z
            };
            let psi = rho * z;
            let dpsi = z + rho * dz;
            let ddpsi = (nn / (rho * rho) - 1.0) * psi;
            Trace {
                z,
                dz_dr: k * dz,
                a: c * z / rho,
                da_dr: k * c * (dz / rho - z / (rho * rho)),
                b: dpsi / rho,
                db_dr: k * (ddpsi / rho - dpsi / (rho * rho)),
            }
        })
        .collect())
}

impl RadialGram {
    pub fn new(n_max: usize, k1: Complex64, k2: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
        }
        let q = node_count(n_max, k1.norm().max(k2.norm()), radius);
        let (x, w) = gauss_legendre(q);
        let mut l2_m = vec![Complex64::new(0.0, 0.0); n_max + 1];
        let mut l2_n = l2_m.clone();
        for (xi, wi) in x.iter().zip(&w) {
            let r = 0.5 * radius * (xi + 1.0);
            let weight = 0.5 * radius * wi * r * r;
            let f1 = RadialFactors::new(n_max, k1 * r, WaveKind::Regular)?;
            let f2 = RadialFactors::new(n_max, k2 * r, WaveKind::Regular)?;
            for n in 1..=n_max {
                let nn = (n * (n + 1)) as f64;
                l2_m[n] += weight * f1.z[n] * f2.z[n].conj();
                l2_n[n] += weight
                    * (nn * f1.z_over_rho[n] * f2.z_over_rho[n].conj()
                        + f1.dpsi_over_rho[n] * f2.dpsi_over_rho[n].conj());
            }
        }
        let t1 = traces(n_max, k1, radius)?;
        let t2 = traces(n_max, k2, radius)?;
        let r2 = radius * radius;
        let degrees = (0..=n_max)
            .map(|n| {
                let (a, b) = (&t1[n], &t2[n]);
                DegreeGram {
                    l2_m: l2_m[n],
                    l2_n: l2_n[n],
                    bnd_m: r2 * a.z * b.dz_dr.conj(),
                    bnd_n: r2 * (a.a * b.da_dr.conj() + a.b * b.db_dr.conj()),
                }
            })
            .collect();
        Ok(Self {
            k1,
            k2,
            radius,
            degrees,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_max(&self) -> usize {
        self.degrees.len() - 1
    }

    /// `<F1, F2>` in the given norm for degree `n`; `F` is `M` (TE) or `N` (TM).
    pub fn entry(&self, n: usize, pol: Polarization, kind: NormKind) -> Complex64 {
        let g = &self.degrees[n];
        let (own, partner, bnd) = match pol {
            Polarization::Te => (g.l2_m, g.l2_n, g.bnd_m),
            Polarization::Tm => (g.l2_n, g.l2_m, g.bnd_n),
        };
        match kind {
            NormKind::L2 => own,
            NormKind::Hcurl => own + self.k1 * self.k2.conj() * partner,
            NormKind::H1 => own * (1.0 + self.k2.conj() * self.k2.conj()) + bnd,
        }
    }
}

fn check_interior(f: &SpectralField) -> Result<()> {
    if f.role != FieldRole::Interior {
        return Err(Error::InvalidInput(format!(
            "ball norms need a regular wave field, got {:?}",
            f.role
        )));
    }
    Ok(())
}

/// Per-degree squared norms, index `n`.
fn degree_energies(f: &SpectralField, radius: f64, kind: NormKind) -> Result<Vec<f64>> {
    check_interior(f)?;
    let g = RadialGram::new(f.n_max, f.wavenumber, f.wavenumber, radius)?;
    let mut out = vec![0.0; f.n_max + 1];
    for (mode, c) in f.modes() {
        if c.norm_sqr() > 0.0 {
            out[mode.n] += c.norm_sqr() * g.entry(mode.n, mode.pol, kind).re;
        }
    }
    Ok(out)
}

pub fn field_norm(f: &SpectralField, radius: f64, kind: NormKind) -> Result<f64> {
    Ok(degree_energies(f, radius, kind)?.iter().sum::<f64>().max(0.0).sqrt())
}

/// `<f, g>` in the given norm. Both fields must be regular wave fields.
pub fn field_inner(
    f: &SpectralField,
    g: &SpectralField,
    radius: f64,
    kind: NormKind,
) -> Result<Complex64> {
    check_interior(f)?;
    check_interior(g)?;
    let n_max = f.n_max.min(g.n_max);
    let gram = RadialGram::new(n_max, f.wavenumber, g.wavenumber, radius)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (mode, c) in f.modes().filter(|(m, _)| m.n <= n_max) {
        acc += c * g.get(&mode).conj() * gram.entry(mode.n, mode.pol, kind);
    }
    Ok(acc)
}

/// `‖f - g‖`. Fields sharing a wavenumber are subtracted coefficientwise;
/// otherwise the Gram expansion is used (clamped at zero).
pub fn difference_norm(
    f: &SpectralField,
    g: &SpectralField,
    radius: f64,
    kind: NormKind,
) -> Result<f64> {
    let same = (f.wavenumber - g.wavenumber).norm() <= 1e-14 * f.wavenumber.norm();
    if same {
        let n = f.n_max.max(g.n_max);
        let mut d = f.resized(n);
        for (c, h) in d.coeffs.iter_mut().zip(g.resized(n).coeffs) {
            *c -= h;
        }
        return field_norm(&d, radius, kind);
    }
    let ff = field_norm(f, radius, kind)?.powi(2);
    let gg = field_norm(g, radius, kind)?.powi(2);
    let fg = field_inner(f, g, radius, kind)?.re;
    Ok((ff + gg - 2.0 * fg).max(0.0).sqrt())
}

pub fn pair_difference_norm(
    a: &FieldPair,
    b: &FieldPair,
    radius: f64,
    norm: PairNorm,
) -> Result<f64> {
    Ok(difference_norm(&a.e, &b.e, radius, norm.kind())?
        + difference_norm(&a.h, &b.h, radius, norm.kind())?)
}

pub fn pair_norm(p: &FieldPair, radius: f64, norm: PairNorm) -> Result<f64> {
    Ok(field_norm(&p.e, radius, norm.kind())? + field_norm(&p.h, radius, norm.kind())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevNorms {
    pub e_l2: f64,
    pub h_l2: f64,
    pub e_hcurl: f64,
    pub h_hcurl: f64,
    pub e_h1: f64,
    pub h_h1: f64,
    /// `‖E‖_{H¹} + ‖H‖_{H¹}`.
    pub h1_pair: f64,
    /// `‖E‖_{H(curl)} + ‖H‖_{H(curl)}`.
    pub hcurl_pair: f64,
    /// Share of the H¹ energy in the top retained degree.
    pub tail_fraction: f64,
    pub truncation_ok: bool,
}

pub fn sobolev_norms(p: &FieldPair, radius: f64) -> Result<SobolevNorms> {
    let total = |v: &[f64]| v.iter().sum::<f64>().max(0.0).sqrt();
    let el2 = degree_energies(&p.e, radius, NormKind::L2)?;
    let hl2 = degree_energies(&p.h, radius, NormKind::L2)?;
    let ec = degree_energies(&p.e, radius, NormKind::Hcurl)?;
    let hc = degree_energies(&p.h, radius, NormKind::Hcurl)?;
    let e1 = degree_energies(&p.e, radius, NormKind::H1)?;
    let h1 = degree_energies(&p.h, radius, NormKind::H1)?;
    let all: f64 = e1.iter().chain(&h1).sum();
    let top = p.n_max();
    let tail = if all > 0.0 && top > 0 {
        (e1[top] + h1[top]) / all
    } else {
        0.0
    };
    let (e_h1, h_h1) = (total(&e1), total(&h1));
    let (e_hcurl, h_hcurl) = (total(&ec), total(&hc));
    Ok(SobolevNorms {
        e_l2: total(&el2),
        h_l2: total(&hl2),
        e_hcurl,
        h_hcurl,
        e_h1,
        h_h1,
        h1_pair: e_h1 + h_h1,
        hcurl_pair: e_hcurl + h_hcurl,
        tail_fraction: tail,
        truncation_ok: tail <= TAIL_TOLERANCE,
    })
}
