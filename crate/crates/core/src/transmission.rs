//! Interior transmission eigenvalues of a homogeneous ball, the impedance
//! symbols of the interior and exterior problems, and the non-transparency
//! and PEC/PMC exclusion checks.
//!
//! Impedance maps send `ν×E` to `ν×H` on the sphere. Both are diagonal in the
//! VSH modes with symbols
//!
//! ```text
//! TE: (k / iωμ) D(kR)        TM: (k / iωμ) / D(kR)
//! ```
//!
//! where `D = ψ'/ψ` inside and `D = ξ'/ξ` (host constants) outside.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenmodes::{normalized_characteristic, BallGeometry, Family};
use crate::error::{Error, Result};
use crate::harmonics::{Direction, Mode, Polarization};
use crate::media::{curl_factor, Host};
use crate::sobolev::{self, NormKind};
use crate::spectral::{FieldPair, FieldRole, SpectralField};
use crate::specfun::{Riccati, SpecFun, DEFAULT_MAX_DEGREE};
use crate::vec3;

/// Normalized characteristic values below this count as hitting an eigenvalue.
pub const PROXIMITY_TOL: f64 = 1e-8;
pub const DETERMINANT_TOL: f64 = 1e-10;
pub const MATCHING_TOL: f64 = 1e-9;
const SCAN_STEP: f64 = std::f64::consts::PI / 8.0;
const BISECTION_STEPS: usize = 80;

fn pec_family(pol: Polarization) -> Family {
    match pol {
        Polarization::Te => Family::PecTe,
        Polarization::Tm => Family::PecTm,
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("omega must be positive, got {omega}")))
    }
}

/// `ν×E ↦ ν×H` symbol of the regular interior problem in `sigma`.
pub fn interior_impedance_symbol(
    sigma: &BallGeometry,
    omega: f64,
    n: usize,
    pol: Polarization,
) -> Result<Complex64> {
    sigma.validate()?;
    check_omega(omega)?;
    Mode::new(n, 0, pol)?;
    let k = sigma.material().wavenumber(omega);
    let rho = k.re * sigma.radius;
    let margin = normalized_characteristic(pec_family(pol), n, rho)?;
    if margin < PROXIMITY_TOL {
        return Err(Error::EigenvalueProximity {
            omega,
            family: pec_family(pol).as_str(),
            margin,
        });
    }
    // k is real here, so ψ and ψ' are formed directly; the proximity guard
    // keeps the denominator away from zero.
    let r = Riccati::regular(&SpecFun::new(n.max(DEFAULT_MAX_DEGREE)), n, k * sigma.radius)?;
    let (psi, dpsi) = (r.psi[n], r.dpsi[n]);
    let g = curl_factor(k, omega, sigma.mu);
    Ok(match pol {
        Polarization::Te => g * dpsi / psi,
        Polarization::Tm => g * psi / dpsi,
    })
}

/// `ν×E ↦ ν×H` symbol of the radiating exterior problem outside radius `radius`.
pub fn exterior_impedance_symbol(
    radius: f64,
    host: &Host,
    omega: f64,
    n: usize,
    pol: Polarization,
) -> Result<Complex64> {
    check_omega(omega)?;
    Mode::new(n, 0, pol)?;
    let k = host.material().wavenumber(omega);
    let d3 = SpecFun::new(n.max(DEFAULT_MAX_DEGREE)).xi_logderiv_seq(n, k * radius)?[n];
    let g = curl_factor(k, omega, host.mu_inf);
    Ok(match pol {
        Polarization::Te => g * d3,
        Polarization::Tm => g / d3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceSymbols {
    pub n: usize,
    pub pol: Polarization,
    pub lambda_i: Complex64,
    pub lambda_o: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonTransparencyReport {
    pub omega: f64,
    /// `sup |λ^i / λ^o|` over the retained modes.
    pub norm: f64,
    pub attained_n: usize,
    pub attained_pol: Polarization,
    /// Limits of `|λ^i / λ^o|` as `n → ∞`: `μ∞/μ_b` (TE) and `ε_b/ε∞` (TM).
    pub tail_te: f64,
    pub tail_tm: f64,
    pub symbols: Vec<ImpedanceSymbols>,
}

impl NonTransparencyReport {
    /// `|norm - 1| > margin` and the tail limits stay away from 1 as well.
    pub fn satisfied(&self, margin: f64) -> bool {
        (self.norm - 1.0).abs() > margin
    }
}

/// Operator norm of `Λ^i ∘ (Λ^o)^{-1}` restricted to degrees `<= n_max`.
/// Mode-diagonal, so any mode-orthogonal weighting gives the same value.
pub fn nontransparency_norm(
    sigma: &BallGeometry,
    host: &Host,
    omega: f64,
    n_max: usize,
) -> Result<NonTransparencyReport> {
    let mut symbols = Vec::with_capacity(2 * n_max);
    for n in 1..=n_max {
        for pol in Polarization::BOTH {
            symbols.push(ImpedanceSymbols {
                n,
                pol,
                lambda_i: interior_impedance_symbol(sigma, omega, n, pol)?,
                lambda_o: exterior_impedance_symbol(sigma.radius, host, omega, n, pol)?,
            });
        }
    }
    let best = symbols
        .iter()
        .map(|s| ((s.lambda_i / s.lambda_o).norm(), s))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::InvalidInput("n_max must be >= 1".into()))?;
    Ok(NonTransparencyReport {
        omega,
        norm: best.0,
        attained_n: best.1.n,
        attained_pol: best.1.pol,
        tail_te: host.mu_inf / sigma.mu,
        tail_tm: sigma.epsilon / host.eps_inf,
        symbols,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionReport {
    pub omega: f64,
    pub ok: bool,
    /// Smallest normalized PEC characteristic over the retained modes.
    pub pec_margin: f64,
    pub pmc_margin: f64,
    pub pec_worst: (usize, Family),
    pub pmc_worst: (usize, Family),
}

/// Whether `omega` keeps away from PEC and PMC eigenvalues of `sigma` for all
/// degrees `<= n_max`.
pub fn pec_pmc_exclusion_check(sigma: &BallGeometry, omega: f64, n_max: usize) -> Result<ExclusionReport> {
    sigma.validate()?;
    check_omega(omega)?;
    let rho = sigma.material().wavenumber(omega).re * sigma.radius;
    let mut pec = (f64::INFINITY, (0, Family::PecTe));
    let mut pmc = (f64::INFINITY, (0, Family::PmcTe));
    for n in 1..=n_max {
        for fam in Family::ALL {
            let v = normalized_characteristic(fam, n, rho)?;
            let slot = if fam.is_pec() { &mut pec } else { &mut pmc };
            if v < slot.0 {
                *slot = (v, (n, fam));
            }
        }
    }
    Ok(ExclusionReport {
        omega,
        ok: pec.0 > PROXIMITY_TOL && pmc.0 > PROXIMITY_TOL,
        pec_margin: pec.0,
        pmc_margin: pmc.0,
        pec_worst: pec.1,
        pmc_worst: pmc.1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionEigenRecord {
    pub omega: f64,
    pub n: usize,
    pub pol: Polarization,
    pub multiplicity: usize,
    pub determinant_residual: f64,
    /// Largest tangential-trace jump of the eigenfunction pair on the sphere,
    /// relative to the trace size.
    pub matching_residual: f64,
    /// Coefficient of the interior wave (`M` or `N` with the ball wavenumber).
    pub interior_coefficient: f64,
    /// Coefficient of the entire host wave (`M` or `N` with `κ`).
    pub entire_coefficient: f64,
}

/// Columns `(interior, entire)` of the matching system, rows scaled to be
/// dimensionless.
fn matching_columns(sigma: &BallGeometry, host: &Host, omega: f64, n: usize, pol: Polarization) -> Result<([f64; 2], [f64; 2])> {
    let sf = SpecFun::new(n.max(DEFAULT_MAX_DEGREE));
    let kb = sigma.material().wavenumber(omega).re;
    let k0 = host.wavenumber(omega);
    let rb = Riccati::regular(&sf, n, Complex64::new(kb * sigma.radius, 0.0))?;
    let r0 = Riccati::regular(&sf, n, Complex64::new(k0 * sigma.radius, 0.0))?;
    let (pb, dpb, p0, dp0) = (rb.psi[n].re, rb.dpsi[n].re, r0.psi[n].re, r0.dpsi[n].re);
    let mr = host.mu_inf / sigma.mu;
    Ok(match pol {
        Polarization::Te => ([k0 * pb / kb, mr * dpb], [p0, dp0]),
        Polarization::Tm => ([k0 * dpb / kb, mr * pb], [dp0, p0]),
    })
}

fn hypot2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Determinant of `[ĉ1 | ĉ2]` with unit columns: the sine of the angle
/// between the interior and entire trace vectors.
pub fn transmission_determinant(sigma: &BallGeometry, host: &Host, omega: f64, n: usize, pol: Polarization) -> Result<f64> {
    let (c1, c2) = matching_columns(sigma, host, omega, n, pol)?;
    Ok((c1[0] * c2[1] - c1[1] * c2[0]) / (hypot2(c1) * hypot2(c2)))
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(if fa.abs() <= f(b)?.abs() { a } else { b })
}

/// Null vector `(A, B)` of `A c1 - B c2 = 0` via the smallest right singular
/// vector of the column-normalized matrix.
fn null_vector(c1: [f64; 2], c2: [f64; 2]) -> (f64, f64) {
    let (n1, n2) = (hypot2(c1), hypot2(c2));
    let m = [[c1[0] / n1, -c2[0] / n2], [c1[1] / n1, -c2[1] / n2]];
    let a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    let b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    let c = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    let lam = 0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let v1 = [b, lam - a];
    let v2 = [lam - c, b];
    let v = if hypot2(v1) >= hypot2(v2) { v1 } else { v2 };
    let s = hypot2(v);
    (v[0] / s / n1, v[1] / s / n2)
}

fn unit_wave(mode: Mode, k: Complex64) -> SpectralField {
    let mut f = SpectralField::zeros(FieldRole::Interior, k, mode.n);
    f.coeffs[mode.index()] = Complex64::new(1.0, 0.0);
    f
}

impl TransmissionEigenRecord {
    /// `(E^t, H^t)` in the ball and `(U, V)` in the host for azimuthal order `m`.
    pub fn pairs(&self, sigma: &BallGeometry, host: &Host, m: i64) -> Result<(FieldPair, FieldPair)> {
        let mode = Mode::new(self.n, m, self.pol)?;
        let kb = sigma.material().wavenumber(self.omega);
        let k0 = host.material().wavenumber(self.omega);
        let inner = unit_wave(mode, kb).scaled(self.interior_coefficient.into());
        let outer = unit_wave(mode, k0).scaled(self.entire_coefficient.into());
        Ok((
            FieldPair::from_electric(inner, self.omega, sigma.mu),
            FieldPair::from_electric(outer, self.omega, host.mu_inf),
        ))
    }
}

/// Tangential trace jump relative to the trace size, with `H` scaled by the
/// host impedance so both fields carry the units of `E`. One trace may vanish
/// identically (when both radial factors share a zero), so the two are never
/// measured separately.
fn trace_mismatch(sigma: &BallGeometry, host: &Host, rec: &TransmissionEigenRecord) -> Result<f64> {
    let (inner, outer) = rec.pairs(sigma, host, 0)?;
    let eta = (host.mu_inf / host.eps_inf).sqrt();
    let (mut jump, mut size): (f64, f64) = (0.0, 0.0);
    for (th, ph) in [(0.4, 0.1), (1.3, 2.2), (2.6, -0.7)] {
        let d = Direction::from_angles(th, ph);
        let u = d.xyz();
        let x = [sigma.radius * u[0], sigma.radius * u[1], sigma.radius * u[2]];
        let (et, ht) = inner.eval_at(x)?;
        let (eu, hv) = outer.eval_at(x)?;
        let rh = d.r_hat();
        let t = |v| vec3::cross(rh, v);
        let de = vec3::norm(vec3::sub(t(et), t(eu)));
        let dh = vec3::norm(vec3::sub(t(ht), t(hv)));
        jump = jump.max(de + eta * dh);
        size = size.max(vec3::norm(t(et)).max(vec3::norm(t(eu))) + eta * vec3::norm(t(ht)).max(vec3::norm(t(hv))));
    }
    Ok(if size > 0.0 { jump / size } else { 0.0 })
}

fn mode_roots(
    sigma: &BallGeometry,
    host: &Host,
    window: (f64, f64),
    n: usize,
    pol: Polarization,
    step: f64,
) -> Result<Vec<TransmissionEigenRecord>> {
    let det = |w: f64| transmission_determinant(sigma, host, w, n, pol);
    let mut out = Vec::new();
    let mut a = window.0.max(0.5 * step);
    if a >= window.1 {
        return Ok(out);
    }
    let mut fa = det(a)?;
    while a < window.1 {
        let b = (a + step).min(window.1);
        let fb = det(b)?;
        if fa != 0.0 && (fb == 0.0 || (fa > 0.0) != (fb > 0.0)) {
            let omega = if fb == 0.0 { b } else { bisect(det, a, b, fa)? };
            out.push(build_record(sigma, host, omega, n, pol)?);
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

fn build_record(sigma: &BallGeometry, host: &Host, omega: f64, n: usize, pol: Polarization) -> Result<TransmissionEigenRecord> {
    let residual = transmission_determinant(sigma, host, omega, n, pol)?.abs();
    if residual > DETERMINANT_TOL {
        return Err(Error::RootPolish { omega });
    }
    let (c1, c2) = matching_columns(sigma, host, omega, n, pol)?;
    let (mut a, mut b) = null_vector(c1, c2);
    // ‖U‖_{L²(Σ)} = 1, largest component positive
    let k0 = host.material().wavenumber(omega);
    let mode = Mode::new(n, 0, pol)?;
    let unit = sobolev::field_norm(&unit_wave(mode, k0), sigma.radius, NormKind::L2)?;
    let s = 1.0 / (b.abs() * unit);
    a *= s;
    b *= s;
    if (if a.abs() >= b.abs() { a } else { b }) < 0.0 {
        a = -a;
        b = -b;
    }
    let mut rec = TransmissionEigenRecord {
        omega,
        n,
        pol,
        multiplicity: 2 * n + 1,
        determinant_residual: residual,
        matching_residual: 0.0,
        interior_coefficient: a,
        entire_coefficient: b,
    };
    rec.matching_residual = trace_mismatch(sigma, host, &rec)?;
    if rec.matching_residual > MATCHING_TOL {
        return Err(Error::IllConditioned(format!(
            "transmission eigenfunction at omega = {omega} (n = {n}, {pol}) matches traces only to {:.2e}",
            rec.matching_residual
        )));
    }
    Ok(rec)
}

/// Scan step in `ω` that resolves oscillations in both media.
fn omega_step(sigma: &BallGeometry, host: &Host, refine: usize) -> f64 {
    let c = (sigma.epsilon * sigma.mu).sqrt().max((host.eps_inf * host.mu_inf).sqrt());
    SCAN_STEP / (sigma.radius * c * refine as f64)
}

/// Default search window `(0, 15/R]`.
pub fn default_window(sigma: &BallGeometry) -> (f64, f64) {
    (0.0, 15.0 / sigma.radius)
}

/// Real transmission eigenvalues in `window` for degrees `1..=n_max`, sorted
/// by `(ω, n, pol)`.
pub fn transmission_eigenvalues(
    sigma: &BallGeometry,
    host: &Host,
    window: (f64, f64),
    n_max: usize,
) -> Result<Vec<TransmissionEigenRecord>> {
    transmission_eigenvalues_refined(sigma, host, window, n_max, 1)
}

/// As [`transmission_eigenvalues`] with the scan grid refined `refine` times.
pub fn transmission_eigenvalues_refined(
    sigma: &BallGeometry,
    host: &Host,
    window: (f64, f64),
    n_max: usize,
    refine: usize,
) -> Result<Vec<TransmissionEigenRecord>> {
    sigma.validate()?;
    Host::new(host.eps_inf, host.mu_inf)?;
    if !(window.0 >= 0.0 && window.1 > window.0 && window.1.is_finite()) {
        return Err(Error::InvalidInput(format!("bad frequency window {window:?}")));
    }
    if sigma.epsilon == host.eps_inf && sigma.mu == host.mu_inf {
        return Err(Error::InvalidInput("transmission eigenvalues need a contrast".into()));
    }
    let step = omega_step(sigma, host, refine.max(1));
    let jobs: Vec<(usize, Polarization)> = (1..=n_max)
        .flat_map(|n| Polarization::BOTH.into_iter().map(move |p| (n, p)))
        .collect();
    let found: Vec<Vec<TransmissionEigenRecord>> = jobs
        .par_iter()
        .map(|&(n, pol)| mode_roots(sigma, host, window, n, pol, step))
        .collect::<Result<_>>()?;
    let mut all: Vec<_> = found.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        a.omega
            .total_cmp(&b.omega)
            .then(a.n.cmp(&b.n))
            .then(a.pol.offset().cmp(&b.pol.offset()))
    });
    Ok(all)
}

pub fn write_transmission_csv<W: Write>(records: &[TransmissionEigenRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["omega", "n", "pol", "residual"])?;
    for r in records {
        out.write_record([
            format!("{:.16e}", r.omega),
            r.n.to_string(),
            r.pol.to_string(),
            format!("{:.3e}", r.determinant_residual),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Impedance symbols over a frequency grid; refused interior symbols are NaN.
pub fn write_impedance_csv<W: Write>(
    sigma: &BallGeometry,
    host: &Host,
    omegas: &[f64],
    n_max: usize,
    w: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "omega", "n", "pol", "lambda_i_re", "lambda_i_im", "lambda_o_re", "lambda_o_im",
    ])?;
    for &omega in omegas {
        for n in 1..=n_max {
            for pol in Polarization::BOTH {
                let li = match interior_impedance_symbol(sigma, omega, n, pol) {
                    Ok(v) => v,
                    Err(Error::EigenvalueProximity { .. }) => Complex64::new(f64::NAN, f64::NAN),
                    Err(e) => return Err(e),
                };
                let lo = exterior_impedance_symbol(sigma.radius, host, omega, n, pol)?;
                out.write_record([
                    format!("{omega:.16e}"),
                    n.to_string(),
                    pol.to_string(),
                    format!("{:.16e}", li.re),
                    format!("{:.16e}", li.im),
                    format!("{:.16e}", lo.re),
                    format!("{:.16e}", lo.im),
                ])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
