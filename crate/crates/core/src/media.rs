//! Isotropic material constants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Isotropic constants `(ε, μ, σ)` of one homogeneous region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub epsilon: f64,
    pub mu: f64,
    #[serde(default)]
    pub sigma: f64,
}

impl Material {
    pub fn new(epsilon: f64, mu: f64, sigma: f64) -> Result<Self> {
        let m = Self { epsilon, mu, sigma };
        m.validate()?;
        Ok(m)
    }

    pub fn lossless(epsilon: f64, mu: f64) -> Result<Self> {
        Self::new(epsilon, mu, 0.0)
    }

    pub fn vacuum() -> Self {
        Self {
            epsilon: 1.0,
            mu: 1.0,
            sigma: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.epsilon.is_finite()
            && self.epsilon > 0.0
            && self.mu.is_finite()
            && self.mu > 0.0
            && self.sigma.is_finite()
            && self.sigma >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "material needs eps > 0, mu > 0, sigma >= 0 (got {self:?})"
            )))
        }
    }

    /// `ε + iσ/ω`.
    pub fn complex_permittivity(&self, omega: f64) -> Complex64 {
        Complex64::new(self.epsilon, self.sigma / omega)
    }

    /// Principal root of `k² = ω² μ (ε + iσ/ω)`; `Im k >= 0`.
    pub fn wavenumber(&self, omega: f64) -> Complex64 {
        (self.complex_permittivity(omega) * (omega * omega * self.mu)).sqrt()
    }

    pub fn is_lossless(&self) -> bool {
        self.sigma == 0.0
    }
}

/// The homogeneous background `(ε∞, μ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Host {
    pub eps_inf: f64,
    pub mu_inf: f64,
}

impl Host {
    pub fn new(eps_inf: f64, mu_inf: f64) -> Result<Self> {
        Material::lossless(eps_inf, mu_inf)?;
        Ok(Self { eps_inf, mu_inf })
    }

    pub fn vacuum() -> Self {
        Self {
            eps_inf: 1.0,
            mu_inf: 1.0,
        }
    }

    pub fn material(&self) -> Material {
        Material {
            epsilon: self.eps_inf,
            mu: self.mu_inf,
            sigma: 0.0,
        }
    }

    /// `κ_ω = ω sqrt(μ∞ ε∞)`, evaluated through the same path as layer wavenumbers.
    pub fn wavenumber(&self, omega: f64) -> f64 {
        self.material().wavenumber(omega).re
    }
}

/// `k / (i ω μ)`: multiplies the partner wave function in `H = curl E / (iωμ)`.
pub fn curl_factor(k: Complex64, omega: f64, mu: f64) -> Complex64 {
    k / Complex64::new(0.0, omega * mu)
}
