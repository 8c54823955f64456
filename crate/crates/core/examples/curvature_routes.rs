//! Gaussian curvature from the Weierstrass–Enneper formula, the dilatation
//! of the projection, and finite differences of log λ.

use minsurf::enneper::{fd_step, gauss_curvature_dilatation, schober_bound, EnneperError};
use minsurf::harmonic::{halfplane_blaschke, Domain};
use minsurf::{Complex, WEData};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = halfplane_blaschke(&[Complex::new(0.5, 1.0)], 1.0, 0.9);
    let we = WEData::halfplane_graph(q, 1.0);
    let map = we.harmonic_map();
    println!("p = {}\nq = {}\n", we.p(), we.q());
    println!(
        "{:>16} {:>14} {:>14} {:>14} {:>10} {:>10}",
        "z", "K", "K_dilatation", "K_fd", "|K|y²", "bound"
    );
    for z in [
        Complex::new(0.0, 1.0),
        Complex::new(0.5, 1.0),
        Complex::new(-2.0, 0.1),
        Complex::new(3.0, 2.5),
    ] {
        let k = we.gauss_curvature(z)?;
        // The dilatation route is undefined where g' = 0, i.e. at the zero of q.
        let kd = match gauss_curvature_dilatation(&map, z) {
            Ok(kd) => format!("{kd:.9}"),
            Err(EnneperError::Indeterminate(_)) => "undefined".to_string(),
            Err(e) => return Err(e.into()),
        };
        let kfd = we.gauss_curvature_fd(z, fd_step(z))?;
        println!(
            "{:>16} {k:>14.9} {kd:>14} {kfd:>14.9} {:>10.6} {:>10.6}",
            format!("{z}"),
            k.abs() / schober_bound(z)?,
            we.curvature_bound(z, Domain::HalfPlane)?,
        );
    }
    Ok(())
}
