//! Truncated coefficient vectors in the VSH / vector-wave bases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{mode_count, Mode, Polarization, WaveKind, WaveTable};
use crate::media::curl_factor;
use crate::vec3::{self, C3, R3};

/// What a coefficient vector describes.
///
/// `Density` and `FarField` live on S² in the `(V, U)` basis (TE, TM slots).
/// `Interior` and `Scattered` are wave fields `Σ c_TE M + c_TM N` with regular
/// and outgoing radial factors respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldRole {
    Density,
    Interior,
    Scattered,
    FarField,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    pub role: FieldRole,
    pub wavenumber: Complex64,
    pub n_max: usize,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(role: FieldRole, wavenumber: Complex64, n_max: usize) -> Self {
        Self {
            role,
            wavenumber,
            n_max,
            coeffs: vec![Complex64::new(0.0, 0.0); mode_count(n_max)],
        }
    }

    pub fn get(&self, mode: &Mode) -> Complex64 {
        if mode.n > self.n_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[mode.index()]
        }
    }

    pub fn set(&mut self, mode: &Mode, value: Complex64) -> Result<()> {
        if mode.n > self.n_max {
            return Err(Error::InvalidInput(format!(
                "mode {mode:?} beyond truncation {}",
                self.n_max
            )));
        }
        self.coeffs[mode.index()] = value;
        Ok(())
    }

    pub fn modes(&self) -> impl Iterator<Item = (Mode, Complex64)> + '_ {
        Mode::all(self.n_max).zip(self.coeffs.iter().copied())
    }

    /// Zero-pad or cut to a new truncation.
    pub fn resized(&self, n_max: usize) -> Self {
        let mut out = Self::zeros(self.role, self.wavenumber, n_max);
        let keep = mode_count(n_max.min(self.n_max));
        out.coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        out
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Highest degree with a nonzero coefficient.
    pub fn active_degree(&self) -> usize {
        self.modes()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(m, _)| m.n)
            .max()
            .unwrap_or(0)
    }

    /// Evaluate a wave field (`Interior` or `Scattered`) at a point.
    pub fn eval_at(&self, x: R3) -> Result<C3> {
        let kind = match self.role {
            FieldRole::Interior => WaveKind::Regular,
            FieldRole::Scattered => WaveKind::Outgoing,
            _ => {
                return Err(Error::InvalidInput(
                    "only wave fields can be evaluated at points".into(),
                ))
            }
        };
        let table = WaveTable::new(self.n_max, self.wavenumber, x, kind)?;
        Ok(self.modes().fold(vec3::ZERO, |acc, (mode, c)| {
            if c == Complex64::new(0.0, 0.0) {
                acc
            } else {
                vec3::add(acc, vec3::scale(c, table.field(&mode)))
            }
        }))
    }

    /// Evaluate an S² field (`Density` or `FarField`) at a direction.
    pub fn eval_on_sphere(&self, d: &crate::harmonics::Direction) -> Result<C3> {
        if !matches!(self.role, FieldRole::Density | FieldRole::FarField) {
            return Err(Error::InvalidInput("not a field on the sphere".into()));
        }
        let table = crate::harmonics::VshTable::new(self.n_max, d);
        Ok(self.modes().fold(vec3::ZERO, |acc, (mode, c)| {
            vec3::add(acc, vec3::scale(c, table.basis(&mode)))
        }))
    }
}

/// A Maxwell pair `(E, H)` in one homogeneous region, both expanded in the
/// same wave basis. `H = curl E / (iωμ)` holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldPair {
    pub e: SpectralField,
    pub h: SpectralField,
    pub omega: f64,
    pub mu: f64,
}

impl FieldPair {
    pub fn from_electric(e: SpectralField, omega: f64, mu: f64) -> Self {
        let g = curl_factor(e.wavenumber, omega, mu);
        let mut h = SpectralField::zeros(e.role, e.wavenumber, e.n_max);
        for (mode, c) in e.modes() {
            let partner = Mode {
                pol: match mode.pol {
                    Polarization::Te => Polarization::Tm,
                    Polarization::Tm => Polarization::Te,
                },
                ..mode
            };
            h.coeffs[partner.index()] = g * c;
        }
        Self { e, h, omega, mu }
    }

    pub fn wavenumber(&self) -> Complex64 {
        self.e.wavenumber
    }

    pub fn n_max(&self) -> usize {
        self.e.n_max
    }

    pub fn eval_at(&self, x: R3) -> Result<(C3, C3)> {
        Ok((self.e.eval_at(x)?, self.h.eval_at(x)?))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            e: self.e.scaled(s),
            h: self.h.scaled(s),
            omega: self.omega,
            mu: self.mu,
        }
    }
}
