//! Perturb the exact non-scattering density at a transmission eigenvalue and
//! watch the far field grow linearly in eps.
use nonscatter::experiments::{prepare, run_eps_sweep, run_point, Column, SweepConfig};

fn main() -> nonscatter::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/transmission_eps.json");
    let cfg = SweepConfig::from_path(path.as_ref())?;
    let exact = run_point(&prepare(&cfg)?, 0.0, 0.0);
    println!("eps = 0: |E_inf| = {:.3e}", exact.farfield_norm);
    let table = run_eps_sweep(&cfg)?;
    for r in &table.rows {
        println!("eps = {:.0e}: |E_inf| = {:.6e}  ratio {:.6}", r.eps, r.farfield_norm, r.ratio);
    }
    let fit = table.fit(Column::Eps, Column::FarfieldNorm)?;
    println!("slope {:.4}", fit.slope);
    Ok(())
}
