//! Spherical Bessel, Neumann and Hankel functions of complex argument, their
//! Riccati forms and logarithmic derivatives.
//!
//! Sequences are the primary interface: every caller in this crate needs all
//! degrees `0..=n` at once, and the recurrences produce them together.
//!
//! * `j_n`: power series for `|z| < 1`, Miller downward recurrence for
//!   `|z| < n`, upward recurrence otherwise.
//! * `y_n`, `h1_n`: upward recurrence (both are dominant in the direction of
//!   increasing degree).
//! * `D1_n = psi_n'/psi_n`: downward recurrence with a convergence check.
//! * `D3_n = xi_n'/xi_n`: upward recurrence from `D3_0 = i`.
//!
//! Direct forms refuse arguments with `|Im z| > 700`; the logarithmic
//! derivatives accept any argument.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEGREE: usize = 60;

/// Beyond this `|Im z|` the trigonometric seeds overflow `f64`.
pub const OVERFLOW_IM: f64 = 700.0;

/// Extra degrees above the highest requested one where Miller's recurrence starts.
const MILLER_SEED_OFFSET: usize = 20;

const SERIES_RADIUS: f64 = 1.0;
const SERIES_MAX_TERMS: usize = 60;
const RESCALE_LIMIT: f64 = 1.0e100;
const LOGDERIV_TOL: f64 = 1.0e-14;
const LOGDERIV_ATTEMPTS: usize = 8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bounds shared by all direct evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFun {
    pub max_degree: usize,
}

impl Default for SpecFun {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl SpecFun {
    pub fn new(max_degree: usize) -> Self {
        Self { max_degree }
    }

    fn check(&self, n: usize, z: Complex64, direct: bool) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("special function argument"));
        }
        if n > self.max_degree {
            return Err(Error::DegreeOverflow {
                degree: n,
                max: self.max_degree,
            });
        }
        if direct && z.im.abs() > OVERFLOW_IM {
            return Err(Error::ArgumentOverflow(z));
        }
        Ok(())
    }

    /// `j_0(z), ..., j_n(z)`.
    pub fn j_seq(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        self.check(n, z, true)?;
        let out = if z.norm() < SERIES_RADIUS {
            (0..=n).map(|k| j_series(k, z)).collect()
        } else if z.norm() < n as f64 {
            j_miller(n, z)
        } else {
            j_upward(n, z)
        };
        finite(out, "spherical Bessel j")
    }

    /// `y_0(z), ..., y_n(z)`.
    pub fn y_seq(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        self.check(n, z, true)?;
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::NonFinite("spherical Neumann y at the origin"));
        }
        let (s, c) = (z.sin(), z.cos());
        let mut out = Vec::with_capacity(n + 1);
        out.push(-c / z);
        if n >= 1 {
            out.push(-c / (z * z) - s / z);
        }
        upward_fill(&mut out, n, z);
        finite(out, "spherical Neumann y")
    }

    /// `h1_0(z), ..., h1_n(z)`, computed directly rather than as `j + i y` so
    /// that the exponentially small outgoing function survives when `Im z` is
    /// large.
    pub fn h1_seq(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        self.check(n, z, true)?;
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::NonFinite("spherical Hankel h1 at the origin"));
        }
        let e = (I * z).exp();
        let mut out = Vec::with_capacity(n + 1);
        out.push(-I * e / z);
        if n >= 1 {
            out.push(-e * (z + I) / (z * z));
        }
        upward_fill(&mut out, n, z);
        finite(out, "spherical Hankel h1")
    }

    /// Logarithmic derivatives `psi_k'(z) / psi_k(z)` for `k = 0..=n`.
    pub fn psi_logderiv_seq(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        self.check(n, z, false)?;
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::NonFinite("logarithmic derivative at the origin"));
        }
        let mut start = n.max(z.norm().ceil() as usize) + 16;
        let mut previous = downward_logderiv(n, z, start);
        for _ in 0..LOGDERIV_ATTEMPTS {
            start += 16 + start / 2;
            let next = downward_logderiv(n, z, start);
            let converged = previous.iter().zip(&next).all(|(a, b)| {
                let scale = b.norm().max(1.0);
                (a - b).norm() <= LOGDERIV_TOL * scale || (!a.is_finite() && !b.is_finite())
            });
            if converged {
                return Ok(next);
            }
            previous = next;
        }
        Err(Error::NonConvergence { degree: n, z })
    }

    /// Logarithmic derivatives `xi_k'(z) / xi_k(z)` of the outgoing Riccati
    /// function `xi_k = z h1_k`.
    pub fn xi_logderiv_seq(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        self.check(n, z, false)?;
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::NonFinite("logarithmic derivative at the origin"));
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(I);
        for k in 1..=n {
            let nz = k as f64 / z;
            out.push(-nz + 1.0 / (nz - out[k - 1]));
        }
        finite(out, "outgoing logarithmic derivative")
    }
}

fn finite(v: Vec<Complex64>, what: &'static str) -> Result<Vec<Complex64>> {
    if v.iter().any(|c| c.re.is_nan() || c.im.is_nan()) {
        Err(Error::NonFinite(what))
    } else {
        Ok(v)
    }
}

fn upward_fill(out: &mut Vec<Complex64>, n: usize, z: Complex64) {
    while out.len() <= n {
        let k = out.len() - 1;
        let next = (2 * k + 1) as f64 / z * out[k] - out[k - 1];
        out.push(next);
    }
}

fn j_series(n: usize, z: Complex64) -> Complex64 {
    // z^n / (2n+1)!! * sum_k (-z^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
    let mut lead = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        lead *= z / (2 * k + 1) as f64;
    }
    let w = -z * z / 2.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..SERIES_MAX_TERMS {
        term *= w / (k as f64 * (2 * n + 2 * k + 1) as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    lead * sum
}

fn j_upward(n: usize, z: Complex64) -> Vec<Complex64> {
    let (s, c) = (z.sin(), z.cos());
    let mut out = Vec::with_capacity(n + 1);
    out.push(s / z);
    if n >= 1 {
        out.push(s / (z * z) - c / z);
    }
    upward_fill(&mut out, n, z);
    out
}

fn j_miller(n: usize, z: Complex64) -> Vec<Complex64> {
    let start = n + MILLER_SEED_OFFSET;
    let mut vals = vec![Complex64::new(0.0, 0.0); start + 2];
    vals[start] = Complex64::new(1.0, 0.0);
    for k in (1..=start).rev() {
        vals[k - 1] = (2 * k + 1) as f64 / z * vals[k] - vals[k + 1];
        if vals[k - 1].norm() > RESCALE_LIMIT {
            for v in vals.iter_mut().skip(k - 1) {
                *v /= RESCALE_LIMIT;
            }
        }
    }
    let j0 = z.sin() / z;
    let j1 = z.sin() / (z * z) - z.cos() / z;
    let scale = if j0.norm() >= j1.norm() {
        j0 / vals[0]
    } else {
        j1 / vals[1]
    };
    vals.truncate(n + 1);
    vals.iter().map(|v| v * scale).collect()
}

fn downward_logderiv(n: usize, z: Complex64, start: usize) -> Vec<Complex64> {
    let mut d = Complex64::new(0.0, 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in (1..=start).rev() {
        let nz = k as f64 / z;
        if k <= n {
            out[k] = d;
        }
        d = nz - 1.0 / (d + nz);
    }
    out[0] = d;
    out
}

/// Derivatives from a sequence `f_0..=f_{n+1}` of any spherical Bessel kind:
/// `f_k' = f_{k-1} - (k+1)/z f_k`, `f_0' = -f_1`.
pub fn derivative_seq(f: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let n = f.len() - 2;
    (0..=n)
        .map(|k| {
            if k == 0 {
                -f[1]
            } else {
                f[k - 1] - (k + 1) as f64 / z * f[k]
            }
        })
        .collect()
}

pub fn sph_bessel_j(n: usize, z: Complex64) -> Result<Complex64> {
    Ok(SpecFun::default().j_seq(n, z)?[n])
}

pub fn sph_bessel_y(n: usize, z: Complex64) -> Result<Complex64> {
    Ok(SpecFun::default().y_seq(n, z)?[n])
}

pub fn sph_hankel1(n: usize, z: Complex64) -> Result<Complex64> {
    Ok(SpecFun::default().h1_seq(n, z)?[n])
}

pub fn sph_bessel_j_deriv(n: usize, z: Complex64) -> Result<Complex64> {
    let sf = SpecFun::new(DEFAULT_MAX_DEGREE + 1);
    if n > DEFAULT_MAX_DEGREE {
        return Err(Error::DegreeOverflow {
            degree: n,
            max: DEFAULT_MAX_DEGREE,
        });
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(if n == 1 {
            Complex64::new(1.0 / 3.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    Ok(derivative_seq(&sf.j_seq(n + 1, z)?, z)[n])
}

pub fn sph_bessel_y_deriv(n: usize, z: Complex64) -> Result<Complex64> {
    if n > DEFAULT_MAX_DEGREE {
        return Err(Error::DegreeOverflow {
            degree: n,
            max: DEFAULT_MAX_DEGREE,
        });
    }
    let sf = SpecFun::new(DEFAULT_MAX_DEGREE + 1);
    Ok(derivative_seq(&sf.y_seq(n + 1, z)?, z)[n])
}

pub fn sph_hankel1_deriv(n: usize, z: Complex64) -> Result<Complex64> {
    if n > DEFAULT_MAX_DEGREE {
        return Err(Error::DegreeOverflow {
            degree: n,
            max: DEFAULT_MAX_DEGREE,
        });
    }
    let sf = SpecFun::new(DEFAULT_MAX_DEGREE + 1);
    Ok(derivative_seq(&sf.h1_seq(n + 1, z)?, z)[n])
}

/// `psi_n'(z) / psi_n(z)` with `psi_n(z) = z j_n(z)`, never forming `psi_n`.
pub fn log_derivative_ratio(n: usize, z: Complex64) -> Result<Complex64> {
    Ok(SpecFun::default().psi_logderiv_seq(n, z)?[n])
}

/// Riccati-Bessel values and derivatives at one argument, degrees `0..=n`.
#[derive(Debug, Clone)]
pub struct Riccati {
    pub psi: Vec<Complex64>,
    pub dpsi: Vec<Complex64>,
}

impl Riccati {
    /// Regular Riccati function `psi_k = z j_k` and its derivative.
    pub fn regular(sf: &SpecFun, n: usize, z: Complex64) -> Result<Self> {
        let wide = SpecFun::new(sf.max_degree + 1);
        if n > sf.max_degree {
            return Err(Error::DegreeOverflow {
                degree: n,
                max: sf.max_degree,
            });
        }
        let j = wide.j_seq(n + 1, z)?;
        Ok(Self::from_seq(&j, z, z.cos()))
    }

    /// Outgoing Riccati function `xi_k = z h1_k` and its derivative.
    pub fn outgoing(sf: &SpecFun, n: usize, z: Complex64) -> Result<Self> {
        let wide = SpecFun::new(sf.max_degree + 1);
        if n > sf.max_degree {
            return Err(Error::DegreeOverflow {
                degree: n,
                max: sf.max_degree,
            });
        }
        let h = wide.h1_seq(n + 1, z)?;
        Ok(Self::from_seq(&h, z, (I * z).exp()))
    }

    fn from_seq(f: &[Complex64], z: Complex64, d0: Complex64) -> Self {
        let n = f.len() - 2;
        let psi = (0..=n).map(|k| z * f[k]).collect();
        let dpsi = (0..=n)
            .map(|k| if k == 0 { d0 } else { z * f[k - 1] - k as f64 * f[k] })
            .collect();
        Self { psi, dpsi }
    }
}

/// `psi_n(x) = x j_n(x)` for real `x`.
pub fn riccati_psi(n: usize, x: f64) -> Result<f64> {
    Ok((Complex64::new(x, 0.0) * sph_bessel_j(n, Complex64::new(x, 0.0))?).re)
}

/// `psi_n'(x)` for real `x`.
pub fn riccati_psi_deriv(n: usize, x: f64) -> Result<f64> {
    let r = Riccati::regular(&SpecFun::default(), n, Complex64::new(x, 0.0))?;
    Ok(r.dpsi[n].re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn j0_closed_form() {
        let v = sph_bessel_j(0, c(1.0)).unwrap();
        assert!((v.re - 1f64.sin()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn limiting_values_at_origin() {
        for n in 0..10 {
            let v = sph_bessel_j(n, c(0.0)).unwrap();
            let expected = if n == 0 { 1.0 } else { 0.0 };
            assert_eq!(v, c(expected));
        }
    }

    #[test]
    fn hankel0_closed_form() {
        for &z in &[Complex64::new(0.7, 0.0), Complex64::new(3.0, 2.0), Complex64::new(12.0, -0.5)] {
            let h = sph_hankel1(0, z).unwrap();
            let expected = -I * (I * z).exp() / z;
            assert!((h - expected).norm() < 1e-15 * expected.norm());
        }
    }

    #[test]
    fn hankel_is_j_plus_i_y() {
        for n in 0..=20 {
            for &x in &[0.8, 3.3, 17.0, 45.0] {
                let z = c(x);
                let h = sph_hankel1(n, z).unwrap();
                let sum = sph_bessel_j(n, z).unwrap() + I * sph_bessel_y(n, z).unwrap();
                assert!((h - sum).norm() <= 1e-13 * h.norm(), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn degree_and_argument_guards() {
        assert!(matches!(
            sph_bessel_j(61, c(1.0)),
            Err(Error::DegreeOverflow { degree: 61, max: 60 })
        ));
        assert!(matches!(
            sph_bessel_j(2, Complex64::new(1.0, 701.0)),
            Err(Error::ArgumentOverflow(_))
        ));
        assert!(matches!(
            sph_hankel1(2, Complex64::new(1.0, -800.0)),
            Err(Error::ArgumentOverflow(_))
        ));
        // ratio forms have no overflow guard
        assert!(log_derivative_ratio(3, Complex64::new(2.0, 5.0e4)).is_ok());
        assert!(sph_bessel_j(0, Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn logderiv_n0_is_cot() {
        let x = 1.3;
        let d = log_derivative_ratio(0, c(x)).unwrap();
        assert!((d.re - x.cos() / x.sin()).abs() < 1e-12);
    }

    #[test]
    fn logderiv_large_imaginary_part_matches_extended_precision() {
        // mpmath, 50 digits: d/dz[z j_5(z)] / (z j_5(z)) at z = 3 + 40i
        let d = log_derivative_ratio(5, Complex64::new(3.0, 40.0)).unwrap();
        let expected = Complex64::new(0.001430688370310216721, -1.0094080899913607291);
        assert!((d - expected).norm() < 1e-13, "{d}");
    }

    #[test]
    fn logderiv_cross_check_against_hankel_ratio() {
        // psi xi' - psi' xi = i  =>  D1 = D3 - i / (psi xi)
        let sf = SpecFun::default();
        for &z in &[Complex64::new(2.5, 0.3), Complex64::new(7.0, 1.0), c(0.9)] {
            let reg = Riccati::regular(&sf, 2, z).unwrap();
            let out = Riccati::outgoing(&sf, 2, z).unwrap();
            let d3 = out.dpsi[2] / out.psi[2];
            let via_wronskian = d3 - I / (reg.psi[2] * out.psi[2]);
            let d1 = log_derivative_ratio(2, z).unwrap();
            assert!((d1 - via_wronskian).norm() < 1e-12 * d1.norm().max(1.0));
        }
    }

    #[test]
    fn outgoing_logderiv_matches_direct() {
        let sf = SpecFun::default();
        for &z in &[c(0.4), c(6.0), Complex64::new(3.0, 4.0)] {
            let d3 = sf.xi_logderiv_seq(12, z).unwrap();
            let out = Riccati::outgoing(&sf, 12, z).unwrap();
            for n in 0..=12 {
                let direct = out.dpsi[n] / out.psi[n];
                assert!((d3[n] - direct).norm() < 1e-12 * direct.norm().max(1.0));
            }
        }
    }

    #[test]
    fn evaluation_branches_agree() {
        let z = Complex64::new(0.9, 0.2);
        let miller = j_miller(12, z);
        for n in 0..=12 {
            let series = j_series(n, z);
            assert!((series - miller[n]).norm() <= 1e-13 * series.norm(), "n={n}");
        }
        let z = Complex64::new(6.5, -0.4);
        let up = j_upward(6, z);
        let down = j_miller(6, z);
        for n in 0..=6 {
            assert!((up[n] - down[n]).norm() <= 1e-12 * up[n].norm(), "n={n}");
        }
    }
}
