//! Scaling experiments: τ and ε sweeps over coated and uncoated scatterers,
//! log-log slope fits and report emission.
//!
//! A sweep configuration names a scenario, the geometry and materials, which
//! eigenfunction to send in, and the grids. Every row builds the medium,
//! solves the scattering problem and records the far-field norm against the
//! right-hand side `τ^{1/2}(‖E_a‖ + ‖H_a‖) + ε` of the stability estimate
//! (`ε` alone for the uncoated scenario).

use std::io::{BufRead, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::eigenmodes::{eigenfunction_coefficients, nth_eigenvalue, BallGeometry, Family};
use crate::error::{Error, Result};
use crate::harmonics::Polarization;
use crate::herglotz::{fit_density, perturb_density, HerglotzDensity};
use crate::media::{Host, Material};
use crate::mie::{solve_farfield, CoatingKind, CoatingSpec, LayeredMedium};
use crate::sobolev::PairNorm;
use crate::transmission::{
    default_window, nontransparency_norm, pec_pmc_exclusion_check, transmission_eigenvalues,
};

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");
/// `|‖Λ^i(Λ^o)^{-1}‖ - 1|` must exceed this for the uncoated scenario.
pub const NONTRANSPARENCY_MARGIN: f64 = 1e-3;

pub const CSV_COLUMNS: [&str; 8] = [
    "tau",
    "eps",
    "farfield_norm",
    "E_hcurl",
    "H_hcurl",
    "bound_rhs",
    "ratio",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    CoatedPec,
    CoatedPmc,
    Transmission,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::CoatedPec => "coated-pec",
            Scenario::CoatedPmc => "coated-pmc",
            Scenario::Transmission => "transmission",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub r_sigma: f64,
    #[serde(default)]
    pub r_omega: Option<f64>,
}

/// Base coating constants before the `τ` scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoatingBase {
    pub epsilon: f64,
    pub mu: f64,
    #[serde(default)]
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Materials {
    pub core: Material,
    #[serde(default)]
    pub coating: Option<CoatingBase>,
    pub host: Host,
}

/// Which eigenvalue drives the sweep: `family` is one of `PEC-TE`, `PEC-TM`,
/// `PMC-TE`, `PMC-TM`, `ITE`, `ITE-TE`, `ITE-TM`; `index` counts from 0 in
/// ascending frequency; `m` picks the azimuthal order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenSelector {
    pub family: String,
    #[serde(default)]
    pub index: usize,
    #[serde(default)]
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub geometry: Geometry,
    pub materials: Materials,
    pub eigen: EigenSelector,
    #[serde(default)]
    pub tau_grid: Vec<f64>,
    #[serde(default)]
    pub eps_grid: Vec<f64>,
    pub truncation: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_grid(name: &str, g: &[f64]) -> Result<()> {
    if g.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(config_err(format!("{name} entries must be positive and finite")));
    }
    if g.windows(2).any(|w| w[1] >= w[0]) {
        return Err(config_err(format!("{name} must be sorted strictly descending")));
    }
    Ok(())
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        check_grid("tau_grid", &self.tau_grid)?;
        check_grid("eps_grid", &self.eps_grid)?;
        if self.tau_grid.iter().any(|t| *t > 1.0) {
            return Err(config_err("tau must lie in (0, 1]"));
        }
        let g = &self.geometry;
        if !(g.r_sigma.is_finite() && g.r_sigma > 0.0) {
            return Err(config_err("r_sigma must be positive"));
        }
        self.materials.core.validate().map_err(|e| config_err(e.to_string()))?;
        Host::new(self.materials.host.eps_inf, self.materials.host.mu_inf)
            .map_err(|e| config_err(e.to_string()))?;
        if self.truncation == 0 || self.truncation > crate::specfun::DEFAULT_MAX_DEGREE {
            return Err(config_err(format!(
                "truncation must be in 1..={}",
                crate::specfun::DEFAULT_MAX_DEGREE
            )));
        }
        let fam = self.eigen.family.to_ascii_uppercase();
        match self.scenario {
            Scenario::CoatedPec | Scenario::CoatedPmc => {
                let r_omega = g
                    .r_omega
                    .ok_or_else(|| config_err("coated scenarios need geometry.r_omega"))?;
                if !(r_omega.is_finite() && r_omega > g.r_sigma) {
                    return Err(config_err("need r_sigma < r_omega"));
                }
                let c = self
                    .materials
                    .coating
                    .ok_or_else(|| config_err("coated scenarios need materials.coating"))?;
                Material::new(c.epsilon, c.mu, c.sigma).map_err(|e| config_err(e.to_string()))?;
                let want = if self.scenario == Scenario::CoatedPec { "PEC-" } else { "PMC-" };
                if !fam.starts_with(want) {
                    return Err(config_err(format!(
                        "scenario {} needs a {want}* eigen family, got {}",
                        self.scenario.as_str(),
                        self.eigen.family
                    )));
                }
            }
            Scenario::Transmission => {
                if !matches!(fam.as_str(), "ITE" | "ITE-TE" | "ITE-TM") {
                    return Err(config_err("transmission scenario needs family ITE, ITE-TE or ITE-TM"));
                }
                if self.materials.core.sigma != 0.0 {
                    return Err(config_err("transmission eigenvalues need a lossless core"));
                }
                if !self.tau_grid.is_empty() {
                    return Err(config_err("transmission scenario has no coating; tau_grid must be empty"));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }

    /// Norm of the approximating net: H¹ pairs on Ω for coated scenarios,
    /// H(curl) pairs on Σ for the uncoated one.
    pub fn net_norm(&self) -> PairNorm {
        match self.scenario {
            Scenario::Transmission => PairNorm::HcurlPair,
            _ => PairNorm::H1Pair,
        }
    }
}

/// What the uncoated scenario checked before sweeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub pec_margin: f64,
    pub pmc_margin: f64,
    pub nontransparency_norm: f64,
}

/// Everything a row needs that does not depend on `(τ, ε)`.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: SweepConfig,
    pub omega: f64,
    pub eigen_label: String,
    pub density: HerglotzDensity,
    pub fit_eps: f64,
    pub norm_radius: f64,
    pub hypotheses: Option<HypothesisReport>,
}

pub fn prepare(config: &SweepConfig) -> Result<Prepared> {
    config.validate()?;
    let host = config.materials.host;
    let n_max = config.truncation;
    let sel = &config.eigen;
    let (omega, label, target, radius, hyp) = match config.scenario {
        Scenario::CoatedPec | Scenario::CoatedPmc => {
            let r_omega = config.geometry.r_omega.expect("validated");
            let family: Family = sel.family.parse().map_err(|e: Error| config_err(e.to_string()))?;
            let ball = BallGeometry::new(r_omega, host.eps_inf, host.mu_inf)?;
            let rec = nth_eigenvalue(&ball, family, sel.index)?;
            if rec.n > n_max {
                return Err(config_err(format!(
                    "eigenfunction degree {} exceeds truncation {n_max}",
                    rec.n
                )));
            }
            let pair = eigenfunction_coefficients(&ball, &rec, sel.m)
                .map_err(|e| config_err(e.to_string()))?;
            let label = format!("{} #{} (n = {}, m = {})", family, sel.index, rec.n, sel.m);
            (rec.omega, label, pair, r_omega, None)
        }
        Scenario::Transmission => {
            let core = config.materials.core;
            let sigma = BallGeometry::new(config.geometry.r_sigma, core.epsilon, core.mu)?;
            let pol = match sel.family.to_ascii_uppercase().as_str() {
                "ITE-TE" => Some(Polarization::Te),
                "ITE-TM" => Some(Polarization::Tm),
                _ => None,
            };
            let recs: Vec<_> = transmission_eigenvalues(&sigma, &host, default_window(&sigma), n_max)?
                .into_iter()
                .filter(|r| pol.is_none_or(|p| r.pol == p))
                .collect();
            let rec = *recs.get(sel.index).ok_or_else(|| {
                config_err(format!(
                    "only {} transmission eigenvalues of the requested family in the window",
                    recs.len()
                ))
            })?;
            let excl = pec_pmc_exclusion_check(&sigma, rec.omega, n_max)?;
            if !excl.ok {
                return Err(Error::Hypothesis(format!(
                    "omega = {} is within {:.1e} of a PEC/PMC eigenvalue of the ball",
                    rec.omega,
                    excl.pec_margin.min(excl.pmc_margin)
                )));
            }
            let nt = nontransparency_norm(&sigma, &host, rec.omega, n_max)?;
            if !nt.satisfied(NONTRANSPARENCY_MARGIN) {
                return Err(Error::Hypothesis(format!(
                    "non-transparency fails: norm = {}",
                    nt.norm
                )));
            }
            let (_, entire) = rec
                .pairs(&sigma, &host, sel.m)
                .map_err(|e| config_err(e.to_string()))?;
            let label = format!("ITE-{} #{} (n = {}, m = {})", rec.pol, sel.index, rec.n, sel.m);
            let hyp = HypothesisReport {
                pec_margin: excl.pec_margin,
                pmc_margin: excl.pmc_margin,
                nontransparency_norm: nt.norm,
            };
            (rec.omega, label, entire, sigma.radius, Some(hyp))
        }
    };
    let fit = fit_density(&target, &host, omega, radius, config.net_norm(), 0.0, n_max)?;
    Ok(Prepared {
        config: config.clone(),
        omega,
        eigen_label: label,
        density: fit.density,
        fit_eps: fit.achieved_eps,
        norm_radius: radius,
        hypotheses: hyp,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(with = "nan_as_null")]
    pub tau: f64,
    #[serde(with = "nan_as_null")]
    pub eps: f64,
    #[serde(with = "nan_as_null")]
    pub farfield_norm: f64,
    #[serde(rename = "E_hcurl", with = "nan_as_null")]
    pub e_hcurl: f64,
    #[serde(rename = "H_hcurl", with = "nan_as_null")]
    pub h_hcurl: f64,
    #[serde(with = "nan_as_null")]
    pub bound_rhs: f64,
    #[serde(with = "nan_as_null")]
    pub ratio: f64,
    pub status: String,
}

impl SweepRow {
    fn failed(tau: f64, eps: f64, reason: &Error) -> Self {
        Self {
            tau,
            eps,
            farfield_norm: f64::NAN,
            e_hcurl: f64::NAN,
            h_hcurl: f64::NAN,
            bound_rhs: f64::NAN,
            ratio: f64::NAN,
            status: format!("failed: {reason}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// JSON has no NaN; non-finite values travel as `null`.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub library_version: String,
    pub config_digest: String,
    pub scenario: String,
    pub mode: String,
    pub eigen: String,
    pub omega: f64,
    pub net_norm: String,
    pub fit_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
}

/// The scatterer of `config` at coating parameter `tau` (ignored when uncoated).
pub fn medium_for_config(c: &SweepConfig, tau: f64) -> Result<LayeredMedium> {
    let host = c.materials.host;
    match c.scenario {
        Scenario::Transmission => LayeredMedium::homogeneous(c.geometry.r_sigma, c.materials.core, host),
        Scenario::CoatedPec | Scenario::CoatedPmc => {
            let base = c.materials.coating.expect("validated");
            let coat = CoatingSpec {
                tau,
                epsilon: base.epsilon,
                mu: base.mu,
                sigma: base.sigma,
                kind: if c.scenario == Scenario::CoatedPec {
                    CoatingKind::Pec
                } else {
                    CoatingKind::Pmc
                },
            };
            LayeredMedium::coated(
                c.geometry.r_sigma,
                c.materials.core,
                &coat,
                c.geometry.r_omega.expect("validated"),
                host,
            )
        }
    }
}

/// One `(τ, ε)` point. Errors become a failed row.
pub fn run_point(prep: &Prepared, tau: f64, eps: f64) -> SweepRow {
    let attempt = || -> Result<SweepRow> {
        let c = &prep.config;
        let density = perturb_density(
            &prep.density,
            eps,
            c.seed,
            &c.materials.host,
            prep.omega,
            prep.norm_radius,
            c.net_norm(),
        )?;
        let medium = medium_for_config(c, tau)?;
        let res = solve_farfield(&density, &medium, prep.omega)?;
        let coated = c.scenario != Scenario::Transmission;
        let bound_rhs = if coated {
            tau.sqrt() * (res.incident_e_hcurl + res.incident_h_hcurl) + eps
        } else {
            eps
        };
        Ok(SweepRow {
            tau,
            eps,
            farfield_norm: res.farfield_norm,
            e_hcurl: res.incident_e_hcurl,
            h_hcurl: res.incident_h_hcurl,
            bound_rhs,
            ratio: if bound_rhs > 0.0 { res.farfield_norm / bound_rhs } else { f64::NAN },
            status: "ok".into(),
        })
    };
    attempt().unwrap_or_else(|e| SweepRow::failed(tau, eps, &e))
}

/// Rows for `points` in the given order, computed in parallel.
pub fn run_points(prep: &Prepared, points: &[(f64, f64)]) -> Vec<SweepRow> {
    points.par_iter().map(|&(t, e)| run_point(prep, t, e)).collect()
}

fn table(prep: &Prepared, mode: &str, rows: Vec<SweepRow>) -> SweepTable {
    SweepTable {
        metadata: SweepMetadata {
            library_version: LIBRARY_VERSION.into(),
            config_digest: prep.config.digest(),
            scenario: prep.config.scenario.as_str().into(),
            mode: mode.into(),
            eigen: prep.eigen_label.clone(),
            omega: prep.omega,
            net_norm: match prep.config.net_norm() {
                PairNorm::H1Pair => "h1-pair".into(),
                PairNorm::HcurlPair => "hcurl-pair".into(),
            },
            fit_eps: prep.fit_eps,
        },
        rows,
    }
}

/// τ sweep at fixed `ε` (0 unless `eps_grid` has exactly one entry).
pub fn run_tau_sweep(config: &SweepConfig) -> Result<SweepTable> {
    if config.scenario == Scenario::Transmission {
        return Err(config_err("tau sweeps need a coated scenario"));
    }
    if config.tau_grid.is_empty() {
        return Err(config_err("tau sweep needs a non-empty tau_grid"));
    }
    let eps = match config.eps_grid.as_slice() {
        [] => 0.0,
        [e] => *e,
        _ => return Err(config_err("tau sweep takes at most one eps; use the combined mode")),
    };
    let prep = prepare(config)?;
    let points: Vec<_> = config.tau_grid.iter().map(|&t| (t, eps)).collect();
    Ok(table(&prep, "tau", run_points(&prep, &points)))
}

/// ε sweep at fixed `τ` (the single `tau_grid` entry; none when uncoated).
pub fn run_eps_sweep(config: &SweepConfig) -> Result<SweepTable> {
    if config.eps_grid.is_empty() {
        return Err(config_err("eps sweep needs a non-empty eps_grid"));
    }
    let tau = match (config.scenario, config.tau_grid.as_slice()) {
        (Scenario::Transmission, _) => 0.0,
        (_, [t]) => *t,
        _ => return Err(config_err("eps sweep on a coated scenario needs exactly one tau")),
    };
    let prep = prepare(config)?;
    let points: Vec<_> = config.eps_grid.iter().map(|&e| (tau, e)).collect();
    Ok(table(&prep, "eps", run_points(&prep, &points)))
}

/// Every `(τ, ε)` pair, `τ` outermost. For reporting only: slopes should come
/// from the one-variable sweeps.
pub fn run_combined_sweep(config: &SweepConfig) -> Result<SweepTable> {
    if config.scenario == Scenario::Transmission {
        return Err(config_err("the combined mode needs a coated scenario"));
    }
    let prep = prepare(config)?;
    let eps: Vec<f64> = if config.eps_grid.is_empty() { vec![0.0] } else { config.eps_grid.clone() };
    let points: Vec<_> = config
        .tau_grid
        .iter()
        .flat_map(|&t| eps.iter().map(move |&e| (t, e)))
        .collect();
    Ok(table(&prep, "combined", run_points(&prep, &points)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Tau,
    Eps,
    FarfieldNorm,
    EHcurl,
    HHcurl,
    BoundRhs,
    Ratio,
}

impl Column {
    pub fn get(self, r: &SweepRow) -> f64 {
        match self {
            Column::Tau => r.tau,
            Column::Eps => r.eps,
            Column::FarfieldNorm => r.farfield_norm,
            Column::EHcurl => r.e_hcurl,
            Column::HHcurl => r.h_hcurl,
            Column::BoundRhs => r.bound_rhs,
            Column::Ratio => r.ratio,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub used: usize,
    /// Points dropped for being nonpositive or non-finite.
    pub excluded: usize,
}

/// Ordinary least squares of `log y` on `log x`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() {
        return Err(Error::SampleMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite() && **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let excluded = xs.len() - pts.len();
    if pts.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "log-log fit needs at least 3 positive points, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("log-log fit needs distinct x values".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LogLogFit {
        slope,
        intercept: my - slope * mx,
        r2,
        used: pts.len(),
        excluded,
    })
}

impl SweepTable {
    /// Log-log fit over the rows with status `ok`.
    pub fn fit(&self, x: Column, y: Column) -> Result<LogLogFit> {
        let ok: Vec<&SweepRow> = self.rows.iter().filter(|r| r.is_ok()).collect();
        let xs: Vec<f64> = ok.iter().map(|r| x.get(r)).collect();
        let ys: Vec<f64> = ok.iter().map(|r| y.get(r)).collect();
        fit_loglog(&xs, &ys)
    }

    /// `(min, max)` of the ratio column over completed rows.
    pub fn ratio_range(&self) -> Option<(f64, f64)> {
        let v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.is_ok() && r.ratio.is_finite())
            .map(|r| r.ratio)
            .collect();
        if v.is_empty() {
            return None;
        }
        Some((v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(0.0, f64::max)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

const META_KEYS: [&str; 8] = [
    "library_version",
    "config_digest",
    "scenario",
    "mode",
    "eigen",
    "omega",
    "net_norm",
    "fit_eps",
];

pub fn write_csv<W: Write>(t: &SweepTable, mut w: W) -> Result<()> {
    let m = &t.metadata;
    let values = [
        m.library_version.clone(),
        m.config_digest.clone(),
        m.scenario.clone(),
        m.mode.clone(),
        m.eigen.clone(),
        fmt_f(m.omega),
        m.net_norm.clone(),
        fmt_f(m.fit_eps),
    ];
    for (k, v) in META_KEYS.iter().zip(values) {
        writeln!(w, "# {k}={v}")?;
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in &t.rows {
        let nums = [r.tau, r.eps, r.farfield_norm, r.e_hcurl, r.h_hcurl, r.bound_rhs, r.ratio];
        let mut rec: Vec<String> = nums.iter().map(|v| fmt_f(*v)).collect();
        rec.push(r.status.clone());
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: BufRead>(r: R) -> Result<SweepTable> {
    let text = std::io::read_to_string(r)?;
    let mut meta = std::collections::HashMap::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line.trim_start_matches('#').trim_start().split_once('=') {
            meta.insert(k.to_string(), v.to_string());
        }
    }
    let get = |k: &str| {
        meta.get(k)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("csv metadata lacks {k}")))
    };
    let num = |k: &str| -> Result<f64> {
        get(k)?
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad number for {k}")))
    };
    let metadata = SweepMetadata {
        library_version: get("library_version")?,
        config_digest: get("config_digest")?,
        scenario: get("scenario")?,
        mode: get("mode")?,
        eigen: get("eigen")?,
        omega: num("omega")?,
        net_norm: get("net_norm")?,
        fit_eps: num("fit_eps")?,
    };
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    if header != CSV_COLUMNS {
        return Err(Error::InvalidInput(format!("unexpected csv columns {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let f = |i: usize| -> Result<f64> {
            rec[i]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad float {:?}", &rec[i])))
        };
        rows.push(SweepRow {
            tau: f(0)?,
            eps: f(1)?,
            farfield_norm: f(2)?,
            e_hcurl: f(3)?,
            h_hcurl: f(4)?,
            bound_rhs: f(5)?,
            ratio: f(6)?,
            status: rec[7].to_string(),
        });
    }
    Ok(SweepTable { metadata, rows })
}

pub fn write_report<W: Write>(t: &SweepTable, format: ReportFormat, mut w: W) -> Result<()> {
    match format {
        ReportFormat::Csv => write_csv(t, w),
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut w, t)?;
            writeln!(w)?;
            Ok(())
        }
    }
}

/// Write the report to `path` (or the config's output path).
pub fn emit_report(t: &SweepTable, format: ReportFormat, path: &std::path::Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_report(t, format, &mut w)?;
    w.flush()?;
    Ok(())
}
