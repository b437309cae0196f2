//! Spherical Bessel and Hankel values, and the Wronskian check they satisfy.
use nonscatter::specfun::{sph_bessel_j, sph_bessel_y, sph_hankel1, SpecFun};
use num_complex::Complex64;

fn main() -> nonscatter::Result<()> {
    let z = Complex64::new(3.5, 0.25);
    for n in [0, 1, 5, 20] {
        println!(
            "n = {n:2}  j = {:.10e}  y = {:.10e}  h1 = {:.10e}",
            sph_bessel_j(n, z)?,
            sph_bessel_y(n, z)?,
            sph_hankel1(n, z)?
        );
    }
    let sf = SpecFun::new(40);
    let j = sf.j_seq(40, z)?;
    let y = sf.y_seq(40, z)?;
    let worst = (1..=40)
        .map(|n| (z * z * (j[n] * y[n - 1] - j[n - 1] * y[n]) - 1.0).norm())
        .fold(0.0, f64::max);
    println!("max Wronskian defect for n <= 40: {worst:.2e}");
    Ok(())
}
