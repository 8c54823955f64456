//! The extremal minimal graph: curvature -1 above i, closed-form immersion,
//! and an OBJ mesh written through the CLI layer.

use minsurf::cli::{self, Command, JobConfig};
use minsurf::contour::QuadratureConfig;
use minsurf::enneper::{extremal_halfplane_example, ExtremalInstance};
use minsurf::Complex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ex = extremal_halfplane_example();
    let i = Complex::new(0.0, 1.0);
    let (fz, fzbar) = ex.wirtinger_derivatives(i)?;
    println!("K(i) = {}", ex.we.gauss_curvature(i)?);
    println!("f_z(i) = {fz}, f_zbar(i) = {fzbar}");

    let cfg = QuadratureConfig::default();
    for z in [
        Complex::new(1.0, 1.0),
        Complex::new(-2.0, 0.3),
        Complex::new(0.5, 3.0),
    ] {
        let p = ex.we.immerse(z, &cfg)?;
        let c = ExtremalInstance::closed_form_position(z);
        println!(
            "{z}: ({:.12}, {:.12}, {:.12}) closed form ({:.12}, {:.12}, {:.12})",
            p.u, p.v, p.t, c.u, c.v, c.t
        );
    }

    let dir = std::env::temp_dir().join("minsurf-extremal");
    let outcome = cli::run(&JobConfig {
        command: Command::Extremal,
        output_path: Some(dir),
        ..JobConfig::default()
    })?;
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    println!("{}", serde_json::to_string_pretty(&outcome.summary)?);
    Ok(())
}
