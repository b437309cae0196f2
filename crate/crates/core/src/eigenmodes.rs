//! Maxwell eigenvalues of a homogeneous ball with perfectly conducting (PEC)
//! or perfectly magnetic (PMC) walls, and their normalized eigenfunctions.
//!
//! With `ρ = ω R sqrt(εμ)` the four families are the zeros of
//!
//! | family | condition   |
//! |--------|-------------|
//! | PEC-TE | `j_n(ρ)`    |
//! | PEC-TM | `ψ_n'(ρ)`   |
//! | PMC-TE | `ψ_n'(ρ)`   |
//! | PMC-TM | `j_n(ρ)`    |
//!
//! each with multiplicity `2n + 1`. Neither function has a zero below `ρ = n`,
//! which bounds the degrees that need scanning.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{Mode, Polarization};
use crate::media::Material;
use crate::sobolev::{self, NormKind, SobolevNorms};
use crate::spectral::{FieldPair, FieldRole, SpectralField};
use crate::specfun::{Riccati, SpecFun};

/// Scan step in `ρ`; zeros of `j_n` and `ψ_n'` are at least about `π/2` apart.
const SCAN_STEP: f64 = std::f64::consts::FRAC_PI_4;
const BISECTION_STEPS: usize = 60;
const NEWTON_STEPS: usize = 3;
/// Accepted `|f(ρ*)|` after polishing; both characteristic functions are O(1).
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "PEC-TE")]
    PecTe,
    #[serde(rename = "PEC-TM")]
    PecTm,
    #[serde(rename = "PMC-TE")]
    PmcTe,
    #[serde(rename = "PMC-TM")]
    PmcTm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Characteristic {
    /// `j_n(ρ)`
    Bessel,
    /// `ψ_n'(ρ)`
    RiccatiDeriv,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::PecTe, Family::PecTm, Family::PmcTe, Family::PmcTm];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::PecTe => "PEC-TE",
            Family::PecTm => "PEC-TM",
            Family::PmcTe => "PMC-TE",
            Family::PmcTm => "PMC-TM",
        }
    }

    pub fn polarization(self) -> Polarization {
        match self {
            Family::PecTe | Family::PmcTe => Polarization::Te,
            Family::PecTm | Family::PmcTm => Polarization::Tm,
        }
    }

    pub fn is_pec(self) -> bool {
        matches!(self, Family::PecTe | Family::PecTm)
    }

    fn characteristic(self) -> Characteristic {
        match self {
            Family::PecTe | Family::PmcTm => Characteristic::Bessel,
            Family::PecTm | Family::PmcTe => Characteristic::RiccatiDeriv,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown eigen family {s:?}")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A homogeneous ball of radius `radius` filled with `material` (lossless).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallGeometry {
    pub radius: f64,
    pub epsilon: f64,
    pub mu: f64,
}

impl BallGeometry {
    pub fn new(radius: f64, epsilon: f64, mu: f64) -> Result<Self> {
        let g = Self {
            radius,
            epsilon,
            mu,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "ball radius must be positive, got {}",
                self.radius
            )));
        }
        Material::lossless(self.epsilon, self.mu)?;
        Ok(())
    }

    pub fn material(&self) -> Material {
        Material {
            epsilon: self.epsilon,
            mu: self.mu,
            sigma: 0.0,
        }
    }

    /// Optical size per unit frequency: `ρ = ω * scale`.
    fn scale(&self) -> f64 {
        self.radius * (self.epsilon * self.mu).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub omega: f64,
    pub n: usize,
    pub family: Family,
    pub multiplicity: usize,
    /// `|f(ρ*)|` of the characteristic function at the polished root.
    pub residual: f64,
}

/// Characteristic value and derivative in `ρ`.
fn characteristic(c: Characteristic, n: usize, rho: f64) -> Result<(f64, f64)> {
    let z = Complex64::new(rho, 0.0);
    let r = Riccati::regular(&SpecFun::new(n.max(crate::specfun::DEFAULT_MAX_DEGREE)), n, z)?;
    let (psi, dpsi) = (r.psi[n].re, r.dpsi[n].re);
    Ok(match c {
        // j = ψ/ρ, j' = ψ'/ρ - ψ/ρ²
        Characteristic::Bessel => (psi / rho, dpsi / rho - psi / (rho * rho)),
        // ψ'' = (n(n+1)/ρ² - 1) ψ
        Characteristic::RiccatiDeriv => (dpsi, ((n * (n + 1)) as f64 / (rho * rho) - 1.0) * psi),
    })
}

/// The value at `ρ` scaled to be O(1) uniformly in `ρ`, for proximity checks.
pub fn normalized_characteristic(family: Family, n: usize, rho: f64) -> Result<f64> {
    let (f, df) = characteristic(family.characteristic(), n, rho)?;
    Ok(f.abs() / (f * f + df * df).sqrt())
}

fn polish(c: Characteristic, n: usize, mut a: f64, mut b: f64, fa: f64) -> Result<(f64, f64)> {
    let mut fa = fa;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let (fm, _) = characteristic(c, n, mid)?;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..NEWTON_STEPS {
        let (f, df) = characteristic(c, n, x)?;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() || step.abs() > (b - a).max(1e-12) {
            break;
        }
        x -= step;
    }
    let (f, _) = characteristic(c, n, x)?;
    Ok((x, f.abs()))
}

/// All zeros of the characteristic of degree `n` in `(0, rho_max]`, scanning
/// at spacing `step`.
fn zeros(c: Characteristic, n: usize, rho_max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    // no zero below ρ = n
    let mut a = ((n as f64 / step).floor() * step).max(0.5 * step);
    if a >= rho_max {
        return Ok(out);
    }
    let (mut fa, _) = characteristic(c, n, a)?;
    while a < rho_max {
        let b = (a + step).min(rho_max);
        let (fb, _) = characteristic(c, n, b)?;
        if fb == 0.0 {
            out.push((b, 0.0));
        } else if fa != 0.0 && (fa > 0.0) != (fb > 0.0) {
            out.push(polish(c, n, a, b, fa)?);
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

fn eigenvalues(
    geom: &BallGeometry,
    omega_max: f64,
    families: &[Family],
    step: f64,
) -> Result<Vec<EigenRecord>> {
    geom.validate()?;
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "omega_max must be positive, got {omega_max}"
        )));
    }
    let scale = geom.scale();
    let rho_max = omega_max * scale;
    let n_top = rho_max.floor() as usize;
    if n_top > crate::specfun::DEFAULT_MAX_DEGREE {
        return Err(Error::DegreeOverflow {
            degree: n_top,
            max: crate::specfun::DEFAULT_MAX_DEGREE,
        });
    }
    let jobs: Vec<(usize, Family)> = (1..=n_top.max(1))
        .flat_map(|n| families.iter().map(move |&f| (n, f)))
        .collect();
    let found: Vec<Vec<EigenRecord>> = jobs
        .par_iter()
        .map(|&(n, family)| {
            zeros(family.characteristic(), n, rho_max, step)?
                .into_iter()
                .map(|(rho, residual)| {
                    if residual > RESIDUAL_TOL {
                        return Err(Error::RootPolish { omega: rho / scale });
                    }
                    Ok(EigenRecord {
                        omega: rho / scale,
                        n,
                        family,
                        multiplicity: 2 * n + 1,
                        residual,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<EigenRecord> = found.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        a.omega
            .total_cmp(&b.omega)
            .then(a.n.cmp(&b.n))
            .then(a.family.cmp(&b.family))
    });
    Ok(all)
}

/// PEC eigenvalues in `(0, omega_max]`, sorted ascending.
pub fn pec_eigenvalues(geom: &BallGeometry, omega_max: f64) -> Result<Vec<EigenRecord>> {
    eigenvalues(geom, omega_max, &[Family::PecTe, Family::PecTm], SCAN_STEP)
}

/// PMC eigenvalues in `(0, omega_max]`, sorted ascending.
pub fn pmc_eigenvalues(geom: &BallGeometry, omega_max: f64) -> Result<Vec<EigenRecord>> {
    eigenvalues(geom, omega_max, &[Family::PmcTe, Family::PmcTm], SCAN_STEP)
}

/// Eigenvalues of the requested families with an explicit scan step in `ρ`.
pub fn eigenvalues_with_step(
    geom: &BallGeometry,
    omega_max: f64,
    families: &[Family],
    step: f64,
) -> Result<Vec<EigenRecord>> {
    if !(step > 0.0 && step <= SCAN_STEP) {
        return Err(Error::InvalidInput(format!("scan step must be in (0, π/4], got {step}")));
    }
    eigenvalues(geom, omega_max, families, step)
}

/// The `index`-th eigenvalue (0-based, counting distinct records) of `family`.
pub fn nth_eigenvalue(geom: &BallGeometry, family: Family, index: usize) -> Result<EigenRecord> {
    let scale = geom.scale();
    let mut omega_max = (index as f64 + 4.0) * std::f64::consts::PI / scale;
    loop {
        let recs = eigenvalues(geom, omega_max, &[family], SCAN_STEP)?;
        if let Some(r) = recs.get(index) {
            return Ok(*r);
        }
        omega_max *= 1.5;
    }
}

/// The eigenfunction pair of `record` with azimuthal order `m`, normalized to
/// `‖E‖_{L²(ball)} = 1`. `E` is `M_nm` for TE families and `N_nm` for TM.
pub fn eigenfunction_coefficients(
    geom: &BallGeometry,
    record: &EigenRecord,
    m: i64,
) -> Result<FieldPair> {
    let mode = Mode::new(record.n, m, record.family.polarization())?;
    let k = geom.material().wavenumber(record.omega);
    let mut e = SpectralField::zeros(FieldRole::Interior, k, record.n);
    e.set(&mode, Complex64::new(1.0, 0.0))?;
    let norm = sobolev::field_norm(&e, geom.radius, NormKind::L2)?;
    let e = e.scaled(Complex64::new(1.0 / norm, 0.0));
    Ok(FieldPair::from_electric(e, record.omega, geom.mu))
}

/// `(⦀(E,H)⦀₁, ⦀(E,H)⦀₂)` on the ball, with the per-field breakdown.
pub fn sobolev_norms(geom: &BallGeometry, pair: &FieldPair) -> Result<SobolevNorms> {
    sobolev::sobolev_norms(pair, geom.radius)
}

pub fn write_eigen_csv<W: Write>(records: &[EigenRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["omega", "n", "family", "multiplicity", "residual"])?;
    for r in records {
        out.write_record([
            format!("{:.16e}", r.omega),
            r.n.to_string(),
            r.family.to_string(),
            r.multiplicity.to_string(),
            format!("{:.3e}", r.residual),
        ])?;
    }
    out.flush()?;
    Ok(())
}
