//! Vector spherical harmonics, vector wave functions and product quadrature
//! on the unit sphere.
//!
//! Conventions (fixed crate-wide):
//!
//! * `Y_nm` are orthonormal on S² and carry the Condon–Shortley phase.
//! * `U_nm = Grad Y_nm / sqrt(n(n+1))`, `V_nm = x̂ × U_nm`. Both families are
//!   orthonormal in `L²(S²)` and mutually orthogonal.
//! * `M_nm(k, x) = -z_n(kr) V_nm(x̂)`, which equals
//!   `curl(x z_n Y_nm) / sqrt(n(n+1))`.
//! * `N_nm(k, x) = curl M_nm / k
//!   = sqrt(n(n+1)) z_n/ρ Y_nm x̂ + (ρ z_n)'/ρ U_nm`, with `ρ = kr`.
//!
//! `Polarization::Te` pairs with `M` and with `V` as a density direction,
//! `Polarization::Tm` pairs with `N` and with `U`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::SpecFun;
use crate::vec3::{self, C3, R3};

pub const DEFAULT_TRUNCATION: usize = 20;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "TE")]
    Te,
    #[serde(rename = "TM")]
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        }
    }

    pub fn offset(self) -> usize {
        match self {
            Polarization::Te => 0,
            Polarization::Tm => 1,
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One VSH channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mode {
    pub n: usize,
    pub m: i64,
    pub pol: Polarization,
}

impl Mode {
    pub fn new(n: usize, m: i64, pol: Polarization) -> Result<Self> {
        if n == 0 || m.unsigned_abs() as usize > n {
            return Err(Error::InvalidMode { n, m });
        }
        Ok(Self { n, m, pol })
    }

    /// Position in the packed coefficient layout used by `SpectralField`.
    pub fn index(&self) -> usize {
        2 * harmonic_index(self.n, self.m) + self.pol.offset()
    }

    pub fn from_index(idx: usize) -> Self {
        let pol = if idx.is_multiple_of(2) {
            Polarization::Te
        } else {
            Polarization::Tm
        };
        let h = idx / 2;
        let n = ((h + 1) as f64).sqrt().floor() as usize;
        // n^2 - 1 <= h < (n+1)^2 - 1
        let n = if (n + 1) * (n + 1) - 1 <= h { n + 1 } else { n };
        let m = h as i64 - (n * n - 1) as i64 - n as i64;
        Self { n, m, pol }
    }

    /// All modes with degree `1..=n_max` in packed order.
    pub fn all(n_max: usize) -> impl Iterator<Item = Mode> {
        (0..mode_count(n_max)).map(Mode::from_index)
    }
}

/// Packed index of `(n, m)` ignoring polarization.
pub fn harmonic_index(n: usize, m: i64) -> usize {
    (n * n - 1) + (m + n as i64) as usize
}

/// Number of packed coefficients (both polarizations) for degrees `1..=n_max`.
pub fn mode_count(n_max: usize) -> usize {
    2 * (n_max * n_max + 2 * n_max)
}

/// Unit vector on S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    xyz: R3,
    theta: f64,
    phi: f64,
}

impl Direction {
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            xyz: [st * cp, st * sp, ct],
            theta,
            phi,
        }
    }

    pub fn from_cartesian(v: R3) -> Result<Self> {
        let r = vec3::rnorm(v);
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput(format!("cannot normalize {v:?}")));
        }
        let xyz = [v[0] / r, v[1] / r, v[2] / r];
        let theta = xyz[2].clamp(-1.0, 1.0).acos();
        let phi = xyz[1].atan2(xyz[0]);
        Ok(Self { xyz, theta, phi })
    }

    pub fn xyz(&self) -> R3 {
        self.xyz
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn r_hat(&self) -> C3 {
        vec3::real(self.xyz)
    }

    pub fn theta_hat(&self) -> R3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct * cp, ct * sp, -st]
    }

    pub fn phi_hat(&self) -> R3 {
        let (sp, cp) = self.phi.sin_cos();
        [-sp, cp, 0.0]
    }
}

/// Normalized associated Legendre data at one colatitude, `m >= 0` only.
struct Legendre {
    n_max: usize,
    /// `P̄_n^m(cos θ)`
    p: Vec<f64>,
    /// `P̄_n^m(cos θ) / sin θ` for `m >= 1`
    q: Vec<f64>,
    /// `d P̄_n^m(cos θ) / dθ`
    dp: Vec<f64>,
}

impl Legendre {
    fn idx(n: usize, m: usize) -> usize {
        n * (n + 1) / 2 + m
    }

    fn new(n_max: usize, theta: f64) -> Self {
        let (s, x) = theta.sin_cos();
        let size = (n_max + 1) * (n_max + 2) / 2;
        let mut p = vec![0.0; size];
        let mut q = vec![0.0; size];
        let mut dp = vec![0.0; size];
        p[0] = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=n_max {
            if m >= 1 {
                let f = -((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
                p[Self::idx(m, m)] = f * s * p[Self::idx(m - 1, m - 1)];
                q[Self::idx(m, m)] = if m == 1 {
                    f * p[0]
                } else {
                    f * s * q[Self::idx(m - 1, m - 1)]
                };
            }
            if m < n_max {
                let f = ((2 * m + 3) as f64).sqrt() * x;
                p[Self::idx(m + 1, m)] = f * p[Self::idx(m, m)];
                q[Self::idx(m + 1, m)] = f * q[Self::idx(m, m)];
            }
            for n in (m + 2)..=n_max {
                let nf = n as f64;
                let mf = m as f64;
                let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
                let b = (((nf - 1.0).powi(2) - mf * mf) / (4.0 * (nf - 1.0).powi(2) - 1.0)).sqrt();
                p[Self::idx(n, m)] = a * (x * p[Self::idx(n - 1, m)] - b * p[Self::idx(n - 2, m)]);
                q[Self::idx(n, m)] = a * (x * q[Self::idx(n - 1, m)] - b * q[Self::idx(n - 2, m)]);
            }
        }
        for n in 1..=n_max {
            let nf = n as f64;
            dp[Self::idx(n, 0)] = (nf * (nf + 1.0)).sqrt() * p[Self::idx(n, 1)];
            for m in 1..=n {
                let mf = m as f64;
                let lower = if n > m {
                    ((2.0 * nf + 1.0) * (nf * nf - mf * mf) / (2.0 * nf - 1.0)).sqrt()
                        * q[Self::idx(n - 1, m)]
                } else {
                    0.0
                };
                dp[Self::idx(n, m)] = nf * x * q[Self::idx(n, m)] - lower;
            }
        }
        Self { n_max, p, q, dp }
    }
}

/// Values of `Y_nm`, `U_nm`, `V_nm` for all `1 <= n <= n_max` at one direction.
pub struct VshTable {
    n_max: usize,
    y: Vec<Complex64>,
    u: Vec<C3>,
    v: Vec<C3>,
}

impl VshTable {
    pub fn new(n_max: usize, d: &Direction) -> Self {
        let leg = Legendre::new(n_max, d.theta());
        let th = d.theta_hat();
        let ph = d.phi_hat();
        let count = n_max * n_max + 2 * n_max;
        let mut y = vec![Complex64::new(0.0, 0.0); count];
        let mut u = vec![vec3::ZERO; count];
        let mut v = vec![vec3::ZERO; count];
        for n in 1..=n_max {
            let c = ((n * (n + 1)) as f64).sqrt();
            for m in 0..=n {
                let phase = Complex64::from_polar(1.0, m as f64 * d.phi());
                let li = Legendre::idx(n, m);
                let (p, q, dp) = (leg.p[li], leg.q[li], leg.dp[li]);
                let mf = m as f64;
                let yv = phase * p;
                // U = e^{imφ}/c (dP θ̂ + i m Q φ̂),  V = e^{imφ}/c (dP φ̂ - i m Q θ̂)
                let a = phase * (dp / c);
                let b = phase * I * (mf * q / c);
                let uv = [a * th[0] + b * ph[0], a * th[1] + b * ph[1], a * th[2] + b * ph[2]];
                let vv = [a * ph[0] - b * th[0], a * ph[1] - b * th[1], a * ph[2] - b * th[2]];
                let i = harmonic_index(n, m as i64);
                y[i] = yv;
                u[i] = uv;
                v[i] = vv;
                if m > 0 {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let j = harmonic_index(n, -(m as i64));
                    y[j] = yv.conj() * sign;
                    u[j] = vec3::scale_re(sign, vec3::conj(uv));
                    v[j] = vec3::scale_re(sign, vec3::conj(vv));
                }
            }
        }
        let _ = leg.n_max;
        Self { n_max, y, u, v }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn y(&self, n: usize, m: i64) -> Complex64 {
        self.y[harmonic_index(n, m)]
    }

    pub fn u(&self, n: usize, m: i64) -> C3 {
        self.u[harmonic_index(n, m)]
    }

    pub fn v(&self, n: usize, m: i64) -> C3 {
        self.v[harmonic_index(n, m)]
    }

    /// Density basis field of a mode: `V` for TE, `U` for TM.
    pub fn basis(&self, mode: &Mode) -> C3 {
        match mode.pol {
            Polarization::Te => self.v(mode.n, mode.m),
            Polarization::Tm => self.u(mode.n, mode.m),
        }
    }
}

/// Orthonormal scalar spherical harmonic `Y_nm(d)`, `n >= 0`.
pub fn scalar_harmonic(n: usize, m: i64, d: &Direction) -> Result<Complex64> {
    if m.unsigned_abs() as usize > n {
        return Err(Error::InvalidMode { n, m });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0 / (4.0 * PI).sqrt(), 0.0));
    }
    Ok(VshTable::new(n, d).y(n, m))
}

/// The tangential pair `(U_nm(d), V_nm(d))`.
pub fn vsh_eval(mode: &Mode, d: &Direction) -> Result<(C3, C3)> {
    Mode::new(mode.n, mode.m, mode.pol)?;
    let t = VshTable::new(mode.n, d);
    Ok((t.u(mode.n, mode.m), t.v(mode.n, mode.m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveKind {
    /// Radial factor `j_n`.
    Regular,
    /// Radial factor `h1_n`.
    Outgoing,
}

/// Radial factors of `M` and `N` at `ρ = kr` for degrees `1..=n_max`:
/// `(z_n(ρ), z_n(ρ)/ρ, (ρ z_n)'/ρ)`.
pub struct RadialFactors {
    pub z: Vec<Complex64>,
    pub z_over_rho: Vec<Complex64>,
    pub dpsi_over_rho: Vec<Complex64>,
}

impl RadialFactors {
    pub fn new(n_max: usize, rho: Complex64, kind: WaveKind) -> Result<Self> {
        let sf = SpecFun::new(n_max.max(crate::specfun::DEFAULT_MAX_DEGREE));
        let mut z = vec![Complex64::new(0.0, 0.0); n_max + 1];
        let mut zr = z.clone();
        let mut dr = z.clone();
        if rho.norm() < 1e-300 {
            if kind == WaveKind::Outgoing {
                return Err(Error::OriginEvaluation);
            }
            if n_max >= 1 {
                zr[1] = Complex64::new(1.0 / 3.0, 0.0);
                dr[1] = Complex64::new(2.0 / 3.0, 0.0);
            }
            return Ok(Self {
                z,
                z_over_rho: zr,
                dpsi_over_rho: dr,
            });
        }
        let seq = match kind {
            WaveKind::Regular => sf.j_seq(n_max, rho)?,
            WaveKind::Outgoing => sf.h1_seq(n_max, rho)?,
        };
        for n in 1..=n_max {
            z[n] = seq[n];
            zr[n] = seq[n] / rho;
            dr[n] = seq[n - 1] - n as f64 * seq[n] / rho;
        }
        Ok(Self {
            z,
            z_over_rho: zr,
            dpsi_over_rho: dr,
        })
    }
}

/// `M_nm` and `N_nm` for every `(n, m)` with `n <= n_max` at one point.
pub struct WaveTable {
    m_fields: Vec<C3>,
    n_fields: Vec<C3>,
}

impl WaveTable {
    pub fn new(n_max: usize, k: Complex64, x: R3, kind: WaveKind) -> Result<Self> {
        let r = vec3::rnorm(x);
        let d = if r > 0.0 {
            Direction::from_cartesian(x)?
        } else {
            Direction::from_angles(0.0, 0.0)
        };
        let radial = RadialFactors::new(n_max, k * r, kind)?;
        let table = VshTable::new(n_max, &d);
        let rh = d.r_hat();
        let count = n_max * n_max + 2 * n_max;
        let mut m_fields = vec![vec3::ZERO; count];
        let mut n_fields = vec![vec3::ZERO; count];
        for n in 1..=n_max {
            let c = ((n * (n + 1)) as f64).sqrt();
            for m in -(n as i64)..=(n as i64) {
                let i = harmonic_index(n, m);
                m_fields[i] = vec3::scale(-radial.z[n], table.v[i]);
                n_fields[i] = vec3::add(
                    vec3::scale(c * radial.z_over_rho[n] * table.y[i], rh),
                    vec3::scale(radial.dpsi_over_rho[n], table.u[i]),
                );
            }
        }
        Ok(Self { m_fields, n_fields })
    }

    pub fn m(&self, n: usize, m: i64) -> C3 {
        self.m_fields[harmonic_index(n, m)]
    }

    pub fn n(&self, n: usize, m: i64) -> C3 {
        self.n_fields[harmonic_index(n, m)]
    }

    /// `M` for TE modes, `N` for TM modes.
    pub fn field(&self, mode: &Mode) -> C3 {
        match mode.pol {
            Polarization::Te => self.m(mode.n, mode.m),
            Polarization::Tm => self.n(mode.n, mode.m),
        }
    }

    /// The partner field: `N` for TE, `M` for TM (so that `curl field = k partner`).
    pub fn partner(&self, mode: &Mode) -> C3 {
        match mode.pol {
            Polarization::Te => self.n(mode.n, mode.m),
            Polarization::Tm => self.m(mode.n, mode.m),
        }
    }
}

pub fn vector_wave_m(n: usize, m: i64, k: Complex64, x: R3, kind: WaveKind) -> Result<C3> {
    Mode::new(n, m, Polarization::Te)?;
    Ok(WaveTable::new(n, k, x, kind)?.m(n, m))
}

pub fn vector_wave_n(n: usize, m: i64, k: Complex64, x: R3, kind: WaveKind) -> Result<C3> {
    Mode::new(n, m, Polarization::Tm)?;
    Ok(WaveTable::new(n, k, x, kind)?.n(n, m))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(count, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(count, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre in `cos θ` times the trapezoid rule in `φ`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    degree: usize,
    nodes: Vec<Direction>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    /// Exact for spherical polynomials of total degree `<= degree`.
    pub fn new(degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidInput("quadrature degree must be >= 1".into()));
        }
        let n_theta = degree / 2 + 1;
        let n_phi = degree + 1;
        let (xs, ws) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (x, w) in xs.iter().zip(&ws) {
            let theta = x.clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                nodes.push(Direction::from_angles(theta, j as f64 * dphi));
                weights.push(w * dphi);
            }
        }
        Ok(Self {
            degree,
            nodes,
            weights,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[Direction] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(&Direction) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| f(d) * *w)
            .sum()
    }
}

/// `sqrt(sum_i w_i |f(d_i)|^2)` for samples aligned with `quad`.
pub fn l2_norm_s2(quad: &SphereQuadrature, samples: &[C3]) -> Result<f64> {
    if samples.len() != quad.len() {
        return Err(Error::SampleMismatch {
            expected: quad.len(),
            got: samples.len(),
        });
    }
    Ok(samples
        .iter()
        .zip(quad.weights())
        .map(|(f, w)| w * vec3::norm_sqr(*f))
        .sum::<f64>()
        .sqrt())
}
