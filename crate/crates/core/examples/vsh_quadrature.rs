//! Gram matrix of the vector spherical harmonics under the product quadrature.
use nonscatter::harmonics::{Mode, SphereQuadrature, VshTable};
use nonscatter::vec3;

fn main() -> nonscatter::Result<()> {
    let n_max = 6;
    let quad = SphereQuadrature::new(2 * n_max + 2)?;
    let tables: Vec<VshTable> = quad.nodes().iter().map(|d| VshTable::new(n_max, d)).collect();
    let modes: Vec<Mode> = Mode::all(n_max).collect();
    let mut worst: f64 = 0.0;
    for a in &modes {
        for b in &modes {
            let g: num_complex::Complex64 = tables
                .iter()
                .zip(quad.weights())
                .map(|(t, w)| vec3::inner(t.basis(a), t.basis(b)) * *w)
                .sum();
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - want).norm());
        }
    }
    println!("{} modes, {} nodes, max |G - I| = {worst:.2e}", modes.len(), quad.len());
    Ok(())
}
