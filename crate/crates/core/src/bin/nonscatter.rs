use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nonscatter::checks::run_checks;
use nonscatter::eigenmodes::{pec_eigenvalues, pmc_eigenvalues, write_eigen_csv, BallGeometry};
use nonscatter::experiments::{
    medium_for_config, prepare, run_eps_sweep, run_point, run_tau_sweep, write_report, ReportFormat, Scenario,
    SweepConfig, SweepTable,
};
use nonscatter::media::Host;
use nonscatter::mie::solve_farfield;
use nonscatter::transmission::{
    default_window, nontransparency_norm, transmission_eigenvalues, write_transmission_csv,
};
use nonscatter::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Nearly non-scattering incident waves for layered spheres")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Pec,
    Pmc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// List PEC or PMC cavity eigenvalues of a ball as CSV.
    Eigen {
        #[arg(long, value_enum, default_value = "pec")]
        boundary: Boundary,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 15.0)]
        omega_max: f64,
    },
    /// List transmission eigenvalues of a ball in a host, with the
    /// non-transparency norm at each.
    Transmission {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        eps_inf: f64,
        #[arg(long, default_value_t = 1.0)]
        mu_inf: f64,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Fit the configured eigenfunction by a Herglotz density and print the report.
    Fit { config: PathBuf },
    /// One scattering solve at the given tau and eps; writes the far field as CSV.
    Scatter {
        config: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep the coating parameter tau.
    SweepTau {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Overrides the config output path; `-` writes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep the density perturbation eps.
    SweepEps {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Check,
}

fn open_out(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p.as_os_str() != "-" => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        _ => Box::new(std::io::stdout().lock()),
    })
}

fn emit(t: &SweepTable, cfg: &SweepConfig, format: Format, output: Option<PathBuf>) -> Result<()> {
    let path = output.or_else(|| cfg.output.clone());
    let mut w = open_out(path.as_ref())?;
    write_report(t, format.into(), &mut w)?;
    w.flush()?;
    let failed = t.rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", t.rows.len());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Eigen { boundary, radius, epsilon, mu, omega_max } => {
            let g = BallGeometry::new(radius, epsilon, mu)?;
            let recs = match boundary {
                Boundary::Pec => pec_eigenvalues(&g, omega_max)?,
                Boundary::Pmc => pmc_eigenvalues(&g, omega_max)?,
            };
            write_eigen_csv(&recs, std::io::stdout().lock())
        }
        Cmd::Transmission { radius, epsilon, mu, eps_inf, mu_inf, n_max } => {
            let g = BallGeometry::new(radius, epsilon, mu)?;
            let host = Host::new(eps_inf, mu_inf)?;
            let recs = transmission_eigenvalues(&g, &host, default_window(&g), n_max)?;
            write_transmission_csv(&recs, std::io::stdout().lock())?;
            for r in &recs {
                match nontransparency_norm(&g, &host, r.omega, n_max) {
                    Ok(nt) => eprintln!("omega = {:.12}: non-transparency norm {:.6}", r.omega, nt.norm),
                    Err(e) => eprintln!("omega = {:.12}: {e}", r.omega),
                }
            }
            Ok(())
        }
        Cmd::Fit { config } => {
            let cfg = SweepConfig::from_path(&config)?;
            let p = prepare(&cfg)?;
            let out = serde_json::json!({
                "eigen": p.eigen_label,
                "omega": p.omega,
                "achieved_eps": p.fit_eps,
                "radius": p.norm_radius,
                "density_l2": p.density.l2_norm(),
                "hypotheses": p.hypotheses,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(())
        }
        Cmd::Scatter { config, tau, eps, output } => {
            let cfg = SweepConfig::from_path(&config)?;
            let p = prepare(&cfg)?;
            let tau = if cfg.scenario == Scenario::Transmission { 0.0 } else { tau };
            let row = run_point(&p, tau, eps);
            if !row.is_ok() {
                return Err(Error::IllConditioned(row.status));
            }
            eprintln!(
                "farfield_norm = {:.16e}, bound_rhs = {:.16e}, ratio = {:.16e}",
                row.farfield_norm, row.bound_rhs, row.ratio
            );
            if let Some(path) = output {
                let density = nonscatter::herglotz::perturb_density(
                    &p.density, eps, cfg.seed, &cfg.materials.host, p.omega, p.norm_radius, cfg.net_norm(),
                )?;
                let medium = medium_for_config(&cfg, tau)?;
                let res = solve_farfield(&density, &medium, p.omega)?;
                res.write_farfield_csv(open_out(Some(&path))?)?;
            }
            Ok(())
        }
        Cmd::SweepTau { config, format, output } => {
            let cfg = SweepConfig::from_path(&config)?;
            emit(&run_tau_sweep(&cfg)?, &cfg, format, output)
        }
        Cmd::SweepEps { config, format, output } => {
            let cfg = SweepConfig::from_path(&config)?;
            emit(&run_eps_sweep(&cfg)?, &cfg, format, output)
        }
        Cmd::Check => {
            let results = run_checks()?;
            let mut ok = true;
            for c in &results {
                println!(
                    "{} {:<26} {:.3e} (tol {:.0e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tolerance
                );
                ok &= c.passed;
            }
            if ok {
                Ok(())
            } else {
                Err(Error::IllConditioned("invariant suite failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
