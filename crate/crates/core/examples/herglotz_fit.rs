//! Fit a cavity eigenfunction by a Herglotz wave, then perturb the density.
use nonscatter::eigenmodes::{eigenfunction_coefficients, nth_eigenvalue, BallGeometry, Family};
use nonscatter::herglotz::{fit_density, perturb_density};
use nonscatter::media::Host;
use nonscatter::sobolev::PairNorm;

fn main() -> nonscatter::Result<()> {
    let ball = BallGeometry::new(1.0, 1.0, 1.0)?;
    let host = Host::vacuum();
    let rec = nth_eigenvalue(&ball, Family::PecTm, 0)?;
    let target = eigenfunction_coefficients(&ball, &rec, 1)?;
    let fit = fit_density(&target, &host, rec.omega, 1.0, PairNorm::H1Pair, 0.0, 8)?;
    println!("omega = {:.12}, achieved eps = {:.2e}", rec.omega, fit.achieved_eps);
    println!("density L2 norm = {:.6}", fit.density.l2_norm());
    let noisy = perturb_density(&fit.density, 1e-3, 42, &host, rec.omega, 1.0, PairNorm::H1Pair)?;
    println!("perturbed density L2 norm = {:.6}", noisy.l2_norm());
    Ok(())
}
