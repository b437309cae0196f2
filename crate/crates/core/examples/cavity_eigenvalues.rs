//! Lowest PEC and PMC resonances of the unit ball.
use nonscatter::eigenmodes::{pec_eigenvalues, pmc_eigenvalues, BallGeometry};

fn main() -> nonscatter::Result<()> {
    let ball = BallGeometry::new(1.0, 1.0, 1.0)?;
    for (name, recs) in [("PEC", pec_eigenvalues(&ball, 7.0)?), ("PMC", pmc_eigenvalues(&ball, 7.0)?)] {
        println!("{name}");
        for r in recs {
            println!("  omega = {:.12}  n = {}  {}  multiplicity {}", r.omega, r.n, r.family, r.multiplicity);
        }
    }
    Ok(())
}
