//! Coated-PEC sweep over the shell parameter tau, with a log-log slope fit.
use nonscatter::experiments::{run_tau_sweep, write_report, Column, ReportFormat, SweepConfig};

fn main() -> nonscatter::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/coated_pec_tau.json");
    let table = run_tau_sweep(&SweepConfig::from_path(path.as_ref())?)?;
    write_report(&table, ReportFormat::Csv, std::io::stdout().lock())?;
    let fit = table.fit(Column::Tau, Column::FarfieldNorm)?;
    println!("slope {:.4}, r2 {:.6}", fit.slope, fit.r2);
    if let Some((lo, hi)) = table.ratio_range() {
        println!("ratio in [{lo:.4e}, {hi:.4e}], max/min {:.2}", hi / lo);
    }
    Ok(())
}
