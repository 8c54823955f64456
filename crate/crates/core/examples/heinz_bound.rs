//! Lower bounds for |Df| of harmonic self-maps of the half-plane, and the
//! transferred bound on the disk.

use minsurf::contour::QuadratureConfig;
use minsurf::enneper::extremal_halfplane_example;
use minsurf::harmonic::{
    verify_heinz, verify_heinz_disk, DiskGrid, GridSpec, HarmonicMap, DEFAULT_SLACK,
};
use minsurf::{Complex, Expr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new((-5.0, 5.0, 100), (0.01, 5.0, 100))?;
    let ex = extremal_halfplane_example();
    let r = verify_heinz(&ex.map, &grid, DEFAULT_SLACK)?;
    println!(
        "extremal map: bound {} min |Df| {:.12} at {} ({} samples, passed {})",
        r.bound,
        r.min_value,
        r.argmin,
        r.samples,
        r.passed()
    );

    // f(a) = b with Im f = (Im b / Im a) Im z.
    let a = Complex::new(0.3, 0.5);
    let b = Complex::new(-1.0, 2.0);
    let m = HarmonicMap::halfplane_self_map(Expr::parse("-i*z + 1")?, a, b)?;
    let r = verify_heinz(&m, &grid, DEFAULT_SLACK)?;
    println!(
        "f({a}) = {b}: bound {} min |Df| {:.12}",
        r.bound, r.min_value
    );

    let disk = DiskGrid::new(0.95, 40, 72)?;
    let r = verify_heinz_disk(&ex.map, &disk, DEFAULT_SLACK, &QuadratureConfig::default())?;
    println!(
        "extremal map on the disk: bound {} min |DF| {:.12} at {:.4}",
        r.bound, r.min_value, r.argmin
    );
    Ok(())
}
