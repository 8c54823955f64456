//! Hyperbolic densities and the Schwarz–Pick residual for maps of the
//! half-plane into the disk.

use minsurf::harmonic::{
    cayley_disk_to_halfplane, cayley_halfplane_to_disk, halfplane_blaschke, hyperbolic_density,
    poisson_kernel, schwarz_pick_residual, Domain,
};
use minsurf::{Complex, Expr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points = [
        Complex::new(0.0, 1.0),
        Complex::new(1.5, 0.2),
        Complex::new(-3.0, 4.0),
    ];

    let maps = [
        ("cayley", Expr::parse("(z - i)/(z + i)")?),
        ("exp(iz)", Expr::parse("exp(i*z)")?),
        (
            "blaschke",
            halfplane_blaschke(&[Complex::new(1.0, 1.0), Complex::new(-1.0, 0.5)], 0.3, 0.8),
        ),
    ];
    for (name, q) in &maps {
        for &z in &points {
            let r = schwarz_pick_residual(q, z, Domain::HalfPlane)?;
            println!("{name:>9} at {z}: residual {r:.3e}");
        }
    }

    for &z in &points {
        let w = cayley_halfplane_to_disk(z)?;
        println!(
            "{z} -> {w:.6} -> {:.6}; densities {:.6} / {:.6}",
            cayley_disk_to_halfplane(w)?,
            hyperbolic_density(Domain::HalfPlane, z)?,
            hyperbolic_density(Domain::Disk, w)?,
        );
    }

    let z = Complex::new(0.0, 1.0);
    let peak = poisson_kernel(z, 0.0)?;
    let tail = poisson_kernel(z, 10.0)?;
    println!("Poisson kernel at i: {peak} (t = 0), {tail:.3e} (t = 10)");
    Ok(())
}
