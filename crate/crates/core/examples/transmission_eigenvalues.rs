//! Interior transmission eigenvalues of a dielectric ball and the hypotheses
//! that make its eigenfunctions nearly invisible.
use nonscatter::eigenmodes::BallGeometry;
use nonscatter::media::Host;
use nonscatter::transmission::{nontransparency_norm, pec_pmc_exclusion_check, transmission_eigenvalues};

fn main() -> nonscatter::Result<()> {
    let ball = BallGeometry::new(1.0, 4.0, 1.0)?;
    let host = Host::vacuum();
    for r in transmission_eigenvalues(&ball, &host, (0.0, 5.0), 6)? {
        let excl = pec_pmc_exclusion_check(&ball, r.omega, 6)?;
        let nt = nontransparency_norm(&ball, &host, r.omega, 6)?;
        println!(
            "omega = {:.12}  n = {}  {}  exclusion ok: {}  non-transparency norm {:.4}",
            r.omega, r.n, r.pol, excl.ok, nt.norm
        );
    }
    Ok(())
}
